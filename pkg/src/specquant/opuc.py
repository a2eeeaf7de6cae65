"""Orthogonal polynomials on the unit circle.

Szegő recurrence on coefficient lists, reversed polynomials, the Schur and
Carathéodory functions as continued fractions, and recovery of the
orthogonality measure from radial boundary values.

Polynomials are stored as ascending coefficient arrays: ``c[j]`` multiplies
``z**j``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from . import kernels
from ._numerics import cosine_nodes, fmt_float, radial_limit
from .coeffs import VerblunskySpec
from .errors import ConvergenceError, SpecError

MAX_DEPTH = 10_000
GAP_TOL = 1e-12
MAX_DEGREE = 512


# ---------------------------------------------------------------------------
# Polynomials
# ---------------------------------------------------------------------------


def reversed_poly(coeffs) -> np.ndarray:
    """Reversed polynomial P*: coefficient j is conj of coefficient n - j."""
    c = np.asarray(coeffs, dtype=np.complex128)
    if c.ndim != 1 or c.shape[0] == 0:
        raise ValueError("expected a non-empty 1-D coefficient list")
    return np.conj(c[::-1])


def horner(coeffs, z):
    """Evaluate an ascending coefficient list at ``z`` (scalar or array)."""
    z = np.asarray(z, dtype=np.complex128)
    out = np.zeros_like(z)
    for c in np.asarray(coeffs, dtype=np.complex128)[::-1]:
        out = out * z + c
    return out[()] if out.ndim == 0 else out


@dataclass(frozen=True)
class LaurentPair:
    """An orthonormal polynomial phi_n together with its reversal phi_n^*."""

    phi: np.ndarray
    phi_star: np.ndarray
    degree: int

    @property
    def kappa(self) -> float:
        """Leading coefficient of phi_n (real, positive)."""
        return float(self.phi[-1].real)

    def monic(self) -> np.ndarray:
        """Coefficients of the monic polynomial Phi_n = phi_n / kappa_n."""
        return self.phi / self.kappa

    def __call__(self, z):
        """(phi_n(z), phi_n^*(z))."""
        return horner(self.phi, z), horner(self.phi_star, z)


def szego_step(pair: LaurentPair, alpha: complex, n: int | None = None) -> LaurentPair:
    """Advance one step of the Szegő recurrence.

    ``phi_{n+1} = (z phi_n - conj(alpha) phi_n^*) / rho`` and
    ``phi_{n+1}^* = (-alpha z phi_n + phi_n^*) / rho`` with
    ``rho = sqrt(1 - |alpha|**2) > 0``.
    """
    alpha = complex(alpha)
    if not abs(alpha) < 1.0:
        raise SpecError(f"|alpha| = {abs(alpha)!r} is not < 1")
    if n is not None and n != pair.degree:
        raise ValueError(f"pair has degree {pair.degree}, not {n}")
    rho = np.sqrt(1.0 - abs(alpha) ** 2)
    zphi = np.concatenate([[0.0], pair.phi])
    phis = np.concatenate([pair.phi_star, [0.0]])
    phi_new = (zphi - np.conj(alpha) * phis) / rho
    phis_new = (-alpha * zphi + phis) / rho
    return LaurentPair(phi_new, phis_new, pair.degree + 1)


def orthonormal_sequence(spec: VerblunskySpec, n_max: int) -> list[LaurentPair]:
    """Pairs (phi_k, phi_k^*) for k = 0..n_max, starting from phi_0 = phi_0^* = 1."""
    if n_max < 0:
        raise ValueError("n_max must be >= 0")
    if n_max > MAX_DEGREE:
        raise ValueError(f"degree {n_max} exceeds the cap {MAX_DEGREE}")
    one = np.ones(1, dtype=np.complex128)
    pairs = [LaurentPair(one, one.copy(), 0)]
    for k, a in enumerate(spec.values(n_max)):
        pairs.append(szego_step(pairs[-1], a))
    return pairs


def orthonormal_values(spec: VerblunskySpec, n_max: int, z, backend=None):
    """Values of phi_k(z) and phi_k^*(z), k = 0..n_max, by the recurrence.

    Returns two arrays of shape ``(n_max + 1,) + shape(z)``.  Unlike
    :func:`orthonormal_sequence` this never forms coefficient lists and is
    the route used for bulk evaluation.
    """
    return kernels.szego_values(spec.values(n_max), z, backend=backend)


def monic_values(spec: VerblunskySpec, n: int, z, backend=None):
    """Phi_n(z) = phi_n(z) / kappa_n with kappa_n = prod 1/rho_k."""
    alphas = spec.values(n)
    phi, _ = kernels.szego_values(alphas, z, backend=backend)
    rho = np.sqrt(1.0 - np.abs(alphas) ** 2)
    return phi[n] * np.prod(rho)


# ---------------------------------------------------------------------------
# Schur / Carathéodory functions
# ---------------------------------------------------------------------------


@dataclass
class CFInfo:
    """Diagnostics of a continued-fraction evaluation."""

    depth: int
    gap: float
    converged: bool


def _adaptive(evaluate: Callable[[int], np.ndarray], start: int, horizon, tol, max_depth):
    """Double the truncation depth until successive values agree.

    Stops when the gap drops below ``tol``, or when the gap stops halving
    below 1e-9 (the rounding floor of the fraction has been reached).
    """
    if horizon is not None:
        val = evaluate(horizon)
        return val, CFInfo(horizon, 0.0, True)
    depth = max(1, min(start, max_depth))
    prev = evaluate(depth)
    last_gap = np.inf
    while True:
        nxt = min(2 * depth, max_depth)
        if nxt == depth:
            return prev, CFInfo(depth, float(last_gap), False)
        val = evaluate(nxt)
        gap = float(np.max(np.abs(val - prev))) if val.size else 0.0
        depth = nxt
        if gap < tol or (gap < 1e-9 and gap > 0.5 * last_gap):
            return val, CFInfo(depth, gap, True)
        prev, last_gap = val, gap


def _check_disk(z):
    z = np.asarray(z, dtype=np.complex128)
    if np.any(np.abs(z) >= 1.0):
        raise ValueError("the continued fraction needs |z| < 1")
    return z


def schur_eval(
    spec: VerblunskySpec,
    z,
    depth: int | None = None,
    *,
    tol: float = GAP_TOL,
    max_depth: int = MAX_DEPTH,
    backend=None,
    full_output: bool = False,
):
    """Schur function from the continued fraction of the Verblunsky coefficients.

    The fraction ``f = (alpha_0 + z f_1) / (1 + conj(alpha_0) z f_1)`` is
    evaluated bottom-up with zero tail.  With ``depth`` given, the value at
    that depth is returned and compared with depth + 8; otherwise the depth
    is doubled from 64 until the gap falls below ``tol``.

    Raises
    ------
    ConvergenceError
        When adaptive doubling hits ``max_depth`` with the gap above ``tol``.
    """
    z = _check_disk(z)

    def evaluate(d):
        d_eff = d if spec.horizon is None else min(d, spec.horizon)
        return kernels.schur_cf(spec.values(d_eff), z, backend=backend)

    if depth is not None:
        if depth < 1:
            raise ValueError("depth must be >= 1")
        val = evaluate(depth)
        gap = float(np.max(np.abs(evaluate(depth + 8) - val))) if z.size else 0.0
        info = CFInfo(depth, gap, gap < tol)
    else:
        start = 64
        rmax = float(np.max(np.abs(z))) if z.size else 0.0
        if rmax > 0:
            start = max(start, int(2 ** np.ceil(np.log2(4.0 / (1.0 - rmax)))))
        val, info = _adaptive(evaluate, start, spec.horizon, tol, max_depth)
        if not info.converged:
            raise ConvergenceError(
                f"Schur fraction not converged at depth {info.depth}", gap=info.gap
            )
    val = val[()] if val.ndim == 0 else val
    return (val, info) if full_output else val


def caratheodory_from_schur(f, z):
    """F = (1 + z f) / (1 - z f), guarding the denominator."""
    z = np.asarray(z, dtype=np.complex128)
    zf = z * f
    den = 1.0 - zf
    if np.any(np.abs(den) < 1e-14):
        raise ConvergenceError("1 - z f(z) vanishes; F is singular here", gap=float("nan"))
    return (1.0 + zf) / den


def caratheodory_eval(spec: VerblunskySpec, z, depth: int | None = None, **kwargs):
    """Carathéodory function F(z), normalised so that F(0) = 1."""
    full = kwargs.pop("full_output", False)
    f, info = schur_eval(spec, z, depth, full_output=True, **kwargs)
    F = caratheodory_from_schur(f, z)
    F = F[()] if np.ndim(F) == 0 else F
    return (F, info) if full else F


# ---------------------------------------------------------------------------
# Measures
# ---------------------------------------------------------------------------


@dataclass
class CircleMeasure:
    """Probability measure on the unit circle.

    ``weight`` maps angles to the density with respect to ``dtheta / 2pi``;
    ``point_masses`` lists ``(theta, mass)``; ``bands`` lists angle
    intervals containing the support of the weight, used for quadrature.
    """

    weight: Callable[[np.ndarray], np.ndarray]
    point_masses: list = field(default_factory=list)
    bands: list = field(default_factory=lambda: [(0.0, 2.0 * np.pi)])
    samples: tuple | None = None

    def integrate(self, g: Callable[[np.ndarray], np.ndarray], nodes: int = 512):
        """Integral of ``g(theta)`` against the measure."""
        total = 0.0
        for lo, hi in self.bands:
            th, w = cosine_nodes(lo, hi, nodes)
            total = total + np.sum(w * self.weight(th) * g(th)) / (2.0 * np.pi)
        for th, m in self.point_masses:
            total = total + m * g(np.asarray(th))
        return total

    def total_mass(self, nodes: int = 512) -> float:
        return float(np.real(self.integrate(lambda th: np.ones_like(th), nodes)))

    def to_csv(self, theta=None) -> str:
        """``theta, weight`` rows followed by a ``# point_mass, theta, mass`` block."""
        if theta is None:
            if self.samples is None:
                theta = np.linspace(0.0, 2.0 * np.pi, 257)[:-1]
            else:
                theta = self.samples[0]
        theta = np.asarray(theta, dtype=float)
        w = self.weight(theta) if self.samples is None else self.samples[1]
        lines = ["theta,weight"]
        lines += [f"{fmt_float(t)},{fmt_float(v)}" for t, v in zip(theta, w)]
        lines.append("# point_mass,theta,mass")
        lines += [f"# point_mass,{fmt_float(t)},{fmt_float(m)}" for t, m in self.point_masses]
        return "\n".join(lines) + "\n"


def _periodic_interp(theta, values):
    theta = np.asarray(theta, dtype=float)
    values = np.asarray(values, dtype=float)
    order = np.argsort(theta)
    th, v = theta[order], values[order]
    th = np.concatenate([th[-1:] - 2 * np.pi, th, th[:1] + 2 * np.pi])
    v = np.concatenate([v[-1:], v, v[:1]])
    return lambda x: np.interp(np.mod(x, 2 * np.pi), th, v)


def measure_from_caratheodory(
    spec: VerblunskySpec,
    theta_grid,
    k_range=(4, 20),
    *,
    candidates=(),
    tol: float = 1e-8,
    order: int = 5,
    singular_threshold: float = 1e6,
    backend=None,
) -> tuple[CircleMeasure, dict]:
    """Recover weight and point masses from radial limits of F.

    The weight at each grid angle is the limit of Re F(r e^{i theta}) along
    ``r = 1 - 2**-k``; a point mass at angle ``t`` is the limit of
    ``(1 - r)/2 * Re F(r e^{i t})``.  Masses are tested at ``candidates``
    and at grid angles where Re F exceeds ``singular_threshold``.

    Returns
    -------
    measure : CircleMeasure
        Sampled weight (periodic linear interpolation) plus detected masses.
    report : dict
        ``unstable`` grid indices, per-point ``spread`` and the mass table.
    """
    theta = np.asarray(theta_grid, dtype=float)
    u = np.exp(1j * theta)
    max_depth = max(MAX_DEPTH, int(64 * 2.0 ** k_range[1]))
    peak = np.zeros(theta.shape[0])

    def sample_weight(eps, mask):
        F = caratheodory_eval(spec, (1.0 - eps) * u[mask], max_depth=max_depth, backend=backend)
        peak[mask] = np.maximum(peak[mask], F.real)
        return F.real

    lim = radial_limit(sample_weight, theta.shape[0], k_range, order, tol)
    weight = lim.value.copy()

    singular = [float(t) for t in theta[peak > singular_threshold]]
    masses = []
    seen = []
    for t in list(candidates) + singular:
        t = float(np.mod(t, 2 * np.pi))
        if any(abs(np.angle(np.exp(1j * (t - s)))) < 1e-9 for s in seen):
            continue
        seen.append(t)
        m = point_mass_limit(spec, t, k_range, order=order, tol=tol, max_depth=max_depth,
                             backend=backend)
        masses.append(m)
    point_masses = [(m["theta"], m["mass"]) for m in masses if m["mass"] > 1e-8]
    weight[peak > singular_threshold] = 0.0
    measure = CircleMeasure(
        _periodic_interp(theta, weight), point_masses, samples=(theta, weight)
    )
    report = {
        "unstable": np.nonzero(~lim.stable)[0].tolist(),
        "spread": lim.spread,
        "levels": lim.levels,
        "masses": masses,
    }
    return measure, report


def point_mass_limit(
    spec: VerblunskySpec,
    theta: float,
    k_range=(4, 20),
    *,
    order: int = 5,
    tol: float = 1e-8,
    max_depth: int | None = None,
    backend=None,
) -> dict:
    """Mass at ``e^{i theta}`` as the limit of (1 - r)/2 Re F(r e^{i theta}).

    Returns a dict with the extrapolated ``mass``, the raw per-level
    ``estimates`` and the ``spread`` between the last two extrapolations.
    """
    u = np.exp(1j * theta)
    if max_depth is None:
        max_depth = max(MAX_DEPTH, int(64 * 2.0 ** k_range[1]))
    raw = []

    def sample(eps, mask):
        F = caratheodory_eval(spec, np.array([(1.0 - eps) * u]), max_depth=max_depth,
                              backend=backend)
        raw.append((eps, float(0.5 * eps * F.real[0])))
        return 0.5 * eps * F.real

    lim = radial_limit(sample, 1, k_range, order, tol)
    return {
        "theta": float(theta),
        "mass": float(lim.value[0]),
        "spread": float(lim.spread[0]),
        "stable": bool(lim.stable[0]),
        "estimates": raw,
    }
