"""CMV matrices, their LM factorisation and the CMV (Laurent) basis."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import kernels
from ._numerics import fmt_float
from .coeffs import VerblunskySpec
from .errors import SpecError

DET_MAX_N = 12


def theta_block(alpha: complex) -> np.ndarray:
    """The 2x2 unitary block [[conj(a), rho], [rho, -a]], rho = sqrt(1 - |a|^2)."""
    alpha = complex(alpha)
    if abs(alpha) > 1.0 + 1e-12:
        raise SpecError(f"|alpha| = {abs(alpha)!r} exceeds 1")
    rho = np.sqrt(max(0.0, 1.0 - abs(alpha) ** 2))
    return np.array([[np.conj(alpha), rho], [rho, -alpha]], dtype=np.complex128)


def _block_sum(alphas, n: int, offset: int) -> np.ndarray:
    """n x n truncation of (1 if offset) ⊕ Theta_offset ⊕ Theta_{offset+2} ⊕ ..."""
    out = np.zeros((n, n), dtype=np.complex128)
    if offset == 1 and n > 0:
        out[0, 0] = 1.0
    for start in range(offset, n, 2):
        blk = theta_block(alphas[start])
        stop = min(start + 2, n)
        out[start:stop, start:stop] = blk[: stop - start, : stop - start]
    return out


@dataclass(frozen=True)
class CmvOperator:
    """Upper-left n x n block of a CMV matrix with its factors L and M."""

    size: int
    alphas: np.ndarray
    dense: np.ndarray
    L: np.ndarray
    M: np.ndarray

    def eigenvalues(self) -> np.ndarray:
        return np.linalg.eigvals(self.dense)

    def unitarity_defect(self) -> np.ndarray:
        n = self.size
        return self.dense.conj().T @ self.dense - np.eye(n)

    def to_csv(self) -> str:
        """Dense entries as ``row, col, re, im`` rows."""
        lines = ["row,col,re,im"]
        for i in range(self.size):
            for j in range(self.size):
                v = self.dense[i, j]
                lines.append(f"{i},{j},{fmt_float(v.real)},{fmt_float(v.imag)}")
        return "\n".join(lines) + "\n"

    def eigen_csv(self) -> str:
        lines = ["re,im,arg"]
        for v in sorted(self.eigenvalues(), key=np.angle):
            lines.append(f"{fmt_float(v.real)},{fmt_float(v.imag)},{fmt_float(np.angle(v))}")
        return "\n".join(lines) + "\n"


def _from_alphas(alphas, n: int) -> CmvOperator:
    L = _block_sum(alphas, n, 0)
    M = _block_sum(alphas, n, 1)
    return CmvOperator(n, np.asarray(alphas[:n]), L @ M, L, M)


def build_cmv(spec: VerblunskySpec, n: int) -> CmvOperator:
    """Truncation C^(n) = L^(n) M^(n) using alpha_0..alpha_{n-1}.

    Truncating the block-diagonal factors commutes with the product here,
    because the coupling between row n-1 and column n only enters through
    entries beyond the block, so the result is exactly the upper-left
    n x n block of the infinite CMV matrix.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    return _from_alphas(spec.values(n), n)


def finite_cmv(alphas) -> CmvOperator:
    """Finite (unitary) CMV matrix; the last coefficient must be unimodular."""
    alphas = np.asarray(alphas, dtype=np.complex128)
    if alphas.ndim != 1 or alphas.shape[0] == 0:
        raise SpecError("need a non-empty coefficient list")
    if abs(abs(alphas[-1]) - 1.0) > 1e-12:
        raise SpecError(f"terminal coefficient has modulus {abs(alphas[-1])!r}, not 1")
    if np.any(np.abs(alphas[:-1]) >= 1.0):
        raise SpecError("interior coefficients must lie strictly inside the disk")
    return _from_alphas(alphas, alphas.shape[0])


def bareiss_det(a) -> complex:
    """Determinant by fraction-free elimination with partial pivoting."""
    m = np.array(a, dtype=np.complex128, copy=True)
    n = m.shape[0]
    sign = 1.0
    prev = 1.0 + 0j
    for k in range(n - 1):
        piv = k + int(np.argmax(np.abs(m[k:, k])))
        if m[piv, k] == 0:
            return 0j
        if piv != k:
            m[[k, piv]] = m[[piv, k]]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i, j] = (m[i, j] * m[k, k] - m[i, k] * m[k, j]) / prev
            m[i, k] = 0.0
        prev = m[k, k]
    return complex(sign * m[n - 1, n - 1]) if n else 1 + 0j


def monic_via_det(spec: VerblunskySpec, n: int, z: complex) -> complex:
    """Phi_n(z) as det(z I - C^(n)); a test oracle, limited to n <= 12."""
    if n > DET_MAX_N:
        raise ValueError(f"determinant oracle limited to n <= {DET_MAX_N}")
    if n == 0:
        return 1 + 0j
    c = build_cmv(spec, n).dense
    return bareiss_det(complex(z) * np.eye(n) - c)


def cmv_basis_eval(spec: VerblunskySpec, n: int, z, backend=None):
    """chi_0..chi_n at z on the circle.

    ``chi_{2k} = z^{-k} phi_{2k}^*`` and ``chi_{2k+1} = z^{-k} phi_{2k+1}``.
    Returns an array of shape ``(n + 1,) + shape(z)``.
    """
    z = np.asarray(z, dtype=np.complex128)
    if np.any(np.abs(np.abs(z) - 1.0) > 1e-12):
        raise ValueError("CMV basis is evaluated on the unit circle only")
    phi, phis = kernels.szego_values(spec.values(n), z, backend=backend)
    out = np.empty_like(phi)
    for m in range(n + 1):
        k = m // 2
        out[m] = z ** (-k) * (phis[m] if m % 2 == 0 else phi[m])
    return out
