"""Small numerical helpers shared by the measure-recovery routines."""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Callable

import numpy as np


def neville_at_zero(eps, values):
    """Value at ``eps = 0`` of the interpolating polynomial through the data.

    Parameters
    ----------
    eps : array_like, shape (m,)
        Distinct abscissae (typically a geometric schedule 2**-k).
    values : array_like, shape (m, ...)
        Samples; trailing axes are extrapolated independently.

    Returns
    -------
    ndarray
        Extrapolated values with shape ``values.shape[1:]``.
    """
    eps = np.asarray(eps, dtype=float)
    table = np.array(values, dtype=np.result_type(values, float), copy=True)
    m = eps.shape[0]
    for level in range(1, m):
        for i in range(m - level):
            xl, xr = eps[i], eps[i + level]
            table[i] = (xl * table[i + 1] - xr * table[i]) / (xl - xr)
    return table[0]


@lru_cache(maxsize=16)
def _gauss_legendre(n: int):
    return np.polynomial.legendre.leggauss(n)


def cosine_nodes(lo: float, hi: float, n: int = 512):
    """Nodes and weights for ``int_lo^hi g(x) dx`` after ``x = mid + half*cos t``.

    The substitution absorbs inverse-square-root singularities at both ends
    of the interval, so Gauss--Legendre in ``t`` converges quickly for
    band-edge behaviour of the form ``(x - lo)**(-1/2)``.
    """
    t, w = _gauss_legendre(n)
    t = 0.5 * np.pi * (t + 1.0)
    w = 0.5 * np.pi * w
    mid = 0.5 * (lo + hi)
    half = 0.5 * (hi - lo)
    x = mid + half * np.cos(t)
    return x, w * half * np.sin(t)


@dataclass
class RadialLimit:
    """Per-point outcome of a boundary extrapolation."""

    value: np.ndarray
    spread: np.ndarray
    levels: np.ndarray
    stable: np.ndarray


def radial_limit(
    sample: Callable[[float, np.ndarray], np.ndarray],
    n_points: int,
    k_range=(4, 20),
    order: int = 5,
    tol: float = 1e-8,
) -> RadialLimit:
    """Extrapolate ``sample(eps, mask)`` to ``eps = 0`` along ``eps = 2**-k``.

    ``sample(eps, mask)`` returns values at the points selected by ``mask``.
    Each point is extrapolated with a Neville table over its last ``order``
    levels and retired once two successive estimates differ by less than
    ``tol``.
    """
    k0, k1 = k_range
    hist = []
    eps_hist = []
    value = np.full(n_points, np.nan)
    spread = np.full(n_points, np.inf)
    level = np.full(n_points, k1, dtype=int)
    active = np.ones(n_points, dtype=bool)
    prev_est = np.full(n_points, np.nan)
    for k in range(k0, k1 + 1):
        eps = 2.0 ** (-k)
        vals = np.full(n_points, np.nan)
        vals[active] = sample(eps, active)
        hist.append(vals)
        eps_hist.append(eps)
        m = min(order, len(hist))
        est = neville_at_zero(np.array(eps_hist[-m:]), np.array(hist[-m:]))
        diff = np.abs(est - prev_est)
        done = active & (diff < tol)
        value[active] = est[active]
        spread[active] = diff[active]
        level[done] = k
        active &= ~done
        prev_est = est
        if not active.any():
            break
    return RadialLimit(value, spread, level, ~active)


def fmt_float(x) -> str:
    """Shortest round-trip decimal form of a float."""
    return repr(float(x))
