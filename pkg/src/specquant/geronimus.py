"""Dictionary between real Verblunsky coefficients and half-line walks.

Forward and inverse Geronimus relations, the Szegő map of measures and of
orthonormal polynomials, the naive quantization through the LM
factorisation, and a numerical check of how (C + C^t)/2 acts on the +1
eigenvectors of M.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import kernels
from .cmv import build_cmv
from .coeffs import VerblunskySpec, WalkSpec, real_alphas
from .errors import NotQuantizableError, SpecError
from .opuc import CircleMeasure
from .walks import SegmentMeasure

DIV_TOL = 1e-13


def _ext(alphas):
    """alpha list with alpha_{-1} = -1 prepended: ``ext[j + 1] = alpha_j``."""
    return np.concatenate([[-1.0], alphas])


# ---------------------------------------------------------------------------
# Geronimus relations
# ---------------------------------------------------------------------------


def walk_rows_from_alphas(alphas) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """(p, q, r) arrays for every row k with alpha_{2k} available.

    ``q_k = (1 + a_{2k-2})(1 + a_{2k-1})/2``,
    ``r_k = (a_{2k}(1 - a_{2k-1}) - a_{2k-2}(1 + a_{2k-1}))/2``,
    ``p_k = (1 - a_{2k-1})(1 - a_{2k})/2``, with ``a_{-1} = -1`` and the
    k = 0 terms involving ``a_{-2}`` read as zero.
    """
    a = real_alphas(alphas)
    if a.shape[0] == 0:
        raise SpecError("need at least alpha_0")
    e = _ext(a)
    n_rows = (a.shape[0] - 1) // 2 + 1
    k = np.arange(n_rows)
    even = a[2 * k]
    odd = e[2 * k]  # alpha_{2k-1}
    prev_even = np.where(k > 0, a[np.maximum(2 * k - 2, 0)], 0.0)
    p = 0.5 * (1 - odd) * (1 - even)
    q = np.where(k > 0, 0.5 * (1 + prev_even) * (1 + odd), 0.0)
    r = 0.5 * (even * (1 - odd) - prev_even * (1 + odd))
    return p, q, r


def alphas_to_walk(alphas) -> WalkSpec:
    """Walk whose unitary counterpart has Verblunsky coefficients ``alphas``.

    Raises
    ------
    NotQuantizableError
        If some r_k < 0: the coefficients do not come from a random walk.
    """
    p, q, r = walk_rows_from_alphas(alphas)
    neg = np.nonzero(r < -1e-15)[0]
    if neg.size:
        k = int(neg[0])
        raise NotQuantizableError(f"r_{k} = {float(r[k])!r} < 0: not a random walk", index=k)
    return WalkSpec.from_lists(p, q, np.maximum(r, 0.0))


def walk_to_alphas(walk: WalkSpec, n_alphas: int) -> np.ndarray:
    """Invert the Geronimus relations: alpha_0..alpha_{n_alphas - 1}.

    ``alpha_0 = r_0``; then for k >= 1, alpha_{2k-1} from q_k and alpha_{2k}
    from p_k.

    Raises
    ------
    NotQuantizableError
        If a division is singular or some alpha leaves (-1, 1); ``index``
        names the offending coefficient.
    """
    if n_alphas < 1:
        raise ValueError("n_alphas must be >= 1")
    n_rows = (n_alphas - 1) // 2 + 1 + (n_alphas % 2 == 0)
    p, q, r = walk.arrays(n_rows)
    out = np.empty(n_alphas)

    def accept(j, v):
        if not -1.0 < v < 1.0:
            raise NotQuantizableError(
                f"alpha_{j} = {v!r} is outside (-1, 1): walk is not spectrally quantizable",
                index=j,
            )
        out[j] = v

    accept(0, r[0])
    for k in range(1, n_rows):
        j = 2 * k - 1
        if j >= n_alphas:
            break
        den = 1.0 + out[j - 1]
        if den < DIV_TOL:
            raise NotQuantizableError(f"1 + alpha_{j - 1} vanishes", index=j)
        accept(j, 2.0 * q[k] / den - 1.0)
        if j + 1 >= n_alphas:
            break
        den = 1.0 - out[j]
        if den < DIV_TOL:
            raise NotQuantizableError(f"1 - alpha_{j} vanishes", index=j + 1)
        accept(j + 1, 1.0 - 2.0 * p[k] / den)
    return out


def offdiag_from_alphas(alphas, k: int) -> float:
    """s_k = sqrt((1 - a_{2k-1})(1 - a_{2k}^2)(1 + a_{2k+1})) / 2."""
    e = _ext(real_alphas(alphas))
    if 2 * k + 2 >= e.shape[0]:
        raise IndexError(f"s_{k} needs alpha_{2 * k + 1}")
    return float(0.5 * np.sqrt((1 - e[2 * k]) * (1 - e[2 * k + 1] ** 2) * (1 + e[2 * k + 2])))


def naive_quantization(alphas) -> WalkSpec:
    """Walk read off from the position flip L with +1 eigenvectors of M as coins.

    ``q_k = (1 + a_{2k-1})(1 - a_{2k-2}^2)/2``,
    ``p_k = (1 - a_{2k-1})(1 - a_{2k}^2)/2``,
    ``r_k = (a_{2k-2}^2 (1 + a_{2k-1}) + a_{2k}^2 (1 - a_{2k-1}))/2``.
    """
    a = real_alphas(alphas)
    e = _ext(a)
    n_rows = (a.shape[0] - 1) // 2 + 1
    k = np.arange(n_rows)
    even = a[2 * k]
    odd = e[2 * k]
    prev_sq = np.where(k > 0, a[np.maximum(2 * k - 2, 0)] ** 2, 0.0)
    q = np.where(k > 0, 0.5 * (1 + odd) * (1 - prev_sq), 0.0)
    p = 0.5 * (1 - odd) * (1 - even**2)
    r = 0.5 * (prev_sq * (1 + odd) + even**2 * (1 - odd))
    return WalkSpec.from_lists(p, q, r)


@dataclass
class CorrespondenceRecord:
    """Matched Verblunsky list, walk and Jacobi off-diagonal."""

    alphas: np.ndarray
    walk: WalkSpec
    s: np.ndarray
    provenance: str = "spectral"

    def to_json(self) -> dict:
        p, q, r = self.walk.arrays(self.walk.horizon)
        return {
            "alphas": [float(v) + 0.0 for v in self.alphas],
            "walk": {"p": p.tolist(), "q": q.tolist(), "r": r.tolist()},
            "s": [float(v) for v in self.s],
            "provenance": self.provenance,
        }


def correspondence(alphas, provenance: str = "spectral") -> CorrespondenceRecord:
    a = real_alphas(alphas)
    walk = alphas_to_walk(a) if provenance == "spectral" else naive_quantization(a)
    n_s = max(0, (a.shape[0] - 2) // 2 + 1) if a.shape[0] >= 2 else 0
    s = np.array([offdiag_from_alphas(a, k) for k in range(n_s)])
    return CorrespondenceRecord(a, walk, s, provenance)


# ---------------------------------------------------------------------------
# Szegő map
# ---------------------------------------------------------------------------


def szego_weight_forward(w, x):
    """u(x) = w(arccos x) / (pi sqrt(1 - x^2))."""
    x = np.asarray(x, dtype=float)
    return w(np.arccos(x)) / (np.pi * np.sqrt(1.0 - x * x))


def szego_weight_inverse(u, theta):
    """w(theta) = pi |sin theta| u(cos theta)."""
    theta = np.asarray(theta, dtype=float)
    return np.pi * np.abs(np.sin(theta)) * u(np.cos(theta))


def szego_measure_forward(
    circle: CircleMeasure, boundary_factor: float = 1.0, check_points: int = 64
) -> SegmentMeasure:
    """Push a conjugation-symmetric circle measure forward under x = cos theta.

    Interior masses at +-theta merge into one mass at cos theta; masses at
    theta = 0 or pi are multiplied by ``boundary_factor``.
    """
    th = np.linspace(0.05, np.pi - 0.05, check_points)
    if np.max(np.abs(circle.weight(th) - circle.weight(2 * np.pi - th))) > 1e-8:
        raise SpecError("circle measure is not symmetric under conjugation")
    masses = {}
    for t, m in circle.point_masses:
        t = float(np.mod(t, 2 * np.pi))
        x = float(np.cos(t))
        on_axis = min(abs(t), abs(t - np.pi), abs(t - 2 * np.pi)) < 1e-12
        key = round(x, 12)
        prev = masses.get(key, (x, 0.0))
        masses[key] = (x, prev[1] + (boundary_factor * m if on_axis else m))
    # interior masses need their mirror image
    for t, m in circle.point_masses:
        t = float(np.mod(t, 2 * np.pi))
        if min(abs(t), abs(t - np.pi), abs(t - 2 * np.pi)) < 1e-12:
            continue
        mirror = [mm for tt, mm in circle.point_masses
                  if abs(np.mod(tt, 2 * np.pi) - (2 * np.pi - t)) < 1e-9]
        if not mirror or abs(mirror[0] - m) > 1e-8:
            raise SpecError("point masses are not symmetric under conjugation")
    bands = []
    for lo, hi in circle.bands:
        lo_, hi_ = max(lo, 0.0), min(hi, np.pi)
        if hi_ > lo_:
            bands.append((float(np.cos(hi_)), float(np.cos(lo_))))
    w = circle.weight

    def weight(x):
        x = np.asarray(x, dtype=float)
        inside = np.abs(x) < 1.0
        xs = np.where(inside, x, 0.0)
        return np.where(inside, szego_weight_forward(w, xs), 0.0)

    return SegmentMeasure(weight, sorted(masses.values()), bands=bands)


def segment_polys_from_circle(spec: VerblunskySpec, k: int, x, backend=None):
    """Orthonormal p_k(x) on the segment from phi_{2k} on the circle.

    ``p_k(x) = (z^{-k} phi_{2k}(z) + z^k phi_{2k}(1/z)) / sqrt(2 (1 - a_{2k-1}))``
    with ``z = e^{i arccos x}``.
    """
    if not spec.is_real:
        raise SpecError("the Szegő map needs real Verblunsky coefficients")
    x = np.asarray(x, dtype=float)
    if np.any(np.abs(x) > 1.0):
        raise ValueError("x must lie in [-1, 1]")
    z = np.exp(1j * np.arccos(x))
    alphas = spec.values(2 * k)
    phi_z, _ = kernels.szego_values(alphas, z, backend=backend)
    phi_zi, _ = kernels.szego_values(alphas, 1.0 / z, backend=backend)
    a_odd = -1.0 if k == 0 else float(np.real(alphas[2 * k - 1]))
    val = (z ** (-k) * phi_z[2 * k] + z**k * phi_zi[2 * k]) / np.sqrt(2.0 * (1.0 - a_odd))
    return val.real if np.max(np.abs(val.imag), initial=0.0) < 1e-10 else val


# ---------------------------------------------------------------------------
# Restriction of (C + C^t)/2 to the +1 eigenspace of M
# ---------------------------------------------------------------------------


def m_eigenvectors(alphas, n: int):
    """c_k^+ and c_k^- as columns of n x K arrays (e-basis of size n)."""
    e = _ext(real_alphas(alphas))
    plus, minus = [], []
    for k in range((n + 1) // 2):
        a = e[2 * k]  # alpha_{2k-1}
        v = np.zeros(n)
        w = np.zeros(n)
        if k == 0:
            v[0] = 1.0
        else:
            v[2 * k - 1] = np.sqrt((1 + a) / 2)
            w[2 * k - 1] = np.sqrt((1 - a) / 2)
            if 2 * k < n:
                v[2 * k] = np.sqrt((1 - a) / 2)
                w[2 * k] = -np.sqrt((1 + a) / 2)
            minus.append(w)
        plus.append(v)
    return np.array(plus).T, (np.array(minus).T if minus else np.zeros((n, 0)))


def restriction_identity_check(alphas, n: int, tol: float = 1e-10) -> dict:
    """Check that (C + C^t)/2 acts tridiagonally on the c_k^+ with (r_k, s_k).

    Uses the n x n CMV truncation with n odd, for which M is a complete
    block sum; rows k whose image would reach past the truncation are
    skipped.
    """
    a = real_alphas(alphas)
    if n < 6:
        raise ValueError("n must be >= 6")
    if n % 2 == 0:
        n -= 1
    if a.shape[0] < n + 2:
        raise ValueError(f"need at least {n + 2} coefficients")
    op = build_cmv(VerblunskySpec.from_list(a[:n]), n)
    C, M = op.dense.real, op.M.real
    cp, cm = m_eigenvectors(a, n)
    H = 0.5 * (C + C.T)
    _, _, r = walk_rows_from_alphas(a)
    residuals = []
    for k in range(cp.shape[1] - 1):
        target = r[k] * cp[:, k] + offdiag_from_alphas(a, k) * cp[:, k + 1]
        if k > 0:
            target = target + offdiag_from_alphas(a, k - 1) * cp[:, k - 1]
        residuals.append(float(np.max(np.abs(H @ cp[:, k] - target))))
    m_plus = float(np.max(np.abs(M @ cp - cp)))
    m_minus = float(np.max(np.abs(M @ cm + cm), initial=0.0))
    worst = int(np.argmax(residuals))
    return {
        "rows_checked": len(residuals),
        "r": [float(v) for v in r[: len(residuals)]],
        "s": [offdiag_from_alphas(a, k) for k in range(len(residuals))],
        "max_residual": max(residuals),
        "worst_k": worst,
        "m_plus_residual": m_plus,
        "m_minus_residual": m_minus,
        "passed": max(residuals) < tol and max(m_plus, m_minus) < 1e-12,
    }
