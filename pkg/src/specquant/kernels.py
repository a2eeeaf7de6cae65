"""Backend selection for the inner loops.

The compiled extension is used when it imports; otherwise the numpy
fallback is used.  Setting ``SPECQUANT_PURE_PYTHON=1`` forces the fallback.
"""
import os

import numpy as np

from . import _pykernels

try:
    if os.environ.get("SPECQUANT_PURE_PYTHON", "") not in ("", "0"):
        raise ImportError("pure-Python backend requested")
    from . import _ckernels as _impl

    BACKEND = "cython"
except ImportError:
    _impl = _pykernels
    BACKEND = "python"


def available_backends():
    """Names of importable backends, compiled first."""
    names = []
    try:
        from . import _ckernels  # noqa: F401

        names.append("cython")
    except ImportError:
        pass
    names.append("python")
    return names


def get_backend(name=None):
    """Return the kernel module for ``name`` ("cython", "python" or None)."""
    if name is None:
        return _impl
    if name == "python":
        return _pykernels
    if name == "cython":
        from . import _ckernels

        return _ckernels
    raise ValueError(f"unknown backend {name!r}")


def _c(a):
    return np.ascontiguousarray(a, dtype=np.complex128)


def _r(a):
    return np.ascontiguousarray(a, dtype=np.float64)


def schur_cf(alphas, z, backend=None):
    z = np.asarray(z)
    out = get_backend(backend).schur_cf(_c(alphas), _c(z.ravel()))
    return np.asarray(out).reshape(z.shape)


def jacobi_cf(diag, offsq, z, backend=None):
    z = np.asarray(z)
    diag = _r(diag)
    offsq = _r(offsq)
    if offsq.shape[0] < diag.shape[0]:
        offsq = np.concatenate([offsq, np.zeros(diag.shape[0] - offsq.shape[0])])
    out = get_backend(backend).jacobi_cf(diag, offsq, _c(z.ravel()))
    return np.asarray(out).reshape(z.shape)


def szego_values(alphas, z, backend=None):
    z = np.asarray(z)
    phi, phis = get_backend(backend).szego_values(_c(alphas), _c(z.ravel()))
    shape = (len(alphas) + 1,) + z.shape
    return np.asarray(phi).reshape(shape), np.asarray(phis).reshape(shape)


def three_term_values(p, q, r, x, backend=None):
    x = np.asarray(x)
    out = get_backend(backend).three_term_values(_r(p), _r(q), _r(r), _r(x.ravel()))
    return np.asarray(out).reshape((len(p) + 1,) + x.shape)
