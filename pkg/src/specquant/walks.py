"""Birth-death chains on the half-line and their spectral representation.

Walk polynomials ``Q_k``, the constants ``pi_k``, the symmetric Jacobi
matrix, the Stieltjes transform as a J-fraction, measure recovery from its
boundary values, and n-step transition probabilities computed both by
matrix powers and by integrating against the orthogonality measure.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from . import kernels
from ._numerics import cosine_nodes, fmt_float, radial_limit
from .coeffs import WalkSpec
from .errors import ConvergenceError

MAX_DEPTH = 10_000
GAP_TOL = 1e-12


def walk_polynomials(walk: WalkSpec, n_max: int, x, backend=None) -> np.ndarray:
    """Q_0..Q_{n_max} at ``x``.

    ``Q_0 = 1``, ``p_0 Q_1 = x - r_0`` and
    ``x Q_k = q_k Q_{k-1} + r_k Q_k + p_k Q_{k+1}``.  Returns an array of
    shape ``(n_max + 1,) + shape(x)``.
    """
    if n_max < 0:
        raise ValueError("n_max must be >= 0")
    p, q, r = walk.arrays(n_max)
    return kernels.three_term_values(p, q, r, x, backend=backend)


def log_pi_constants(walk: WalkSpec, n_max: int) -> np.ndarray:
    """log pi_k for k = 0..n_max."""
    p, q, _ = walk.arrays(n_max + 1)
    out = np.zeros(n_max + 1)
    if n_max:
        out[1:] = np.cumsum(np.log(p[:n_max]) - np.log(q[1 : n_max + 1]))
    return out


def pi_constants(walk: WalkSpec, n_max: int) -> np.ndarray:
    """pi_0 = 1, pi_k = (p_0 ... p_{k-1}) / (q_1 ... q_k), k = 0..n_max.

    Products are accumulated in log space.

    Raises
    ------
    OverflowError
        If some pi_k is not representable as a double.
    """
    logs = log_pi_constants(walk, n_max)
    if np.any(logs > np.log(np.finfo(float).max)):
        k = int(np.argmax(logs > np.log(np.finfo(float).max)))
        raise OverflowError(f"pi_{k} overflows (log pi_{k} = {logs[k]!r}); use log_pi_constants")
    return np.exp(logs)


@dataclass(frozen=True)
class JacobiMatrix:
    """Symmetric tridiagonal matrix with diagonal r_k and off-diagonal s_k."""

    diag: np.ndarray
    offdiag: np.ndarray

    @property
    def size(self) -> int:
        return self.diag.shape[0]

    def dense(self) -> np.ndarray:
        return (
            np.diag(self.diag) + np.diag(self.offdiag, 1) + np.diag(self.offdiag, -1)
        )

    def eigh(self):
        return np.linalg.eigh(self.dense())


def jacobi_matrix(walk: WalkSpec, n: int) -> JacobiMatrix:
    """n x n truncation: diagonal r_k, off-diagonal sqrt(p_k q_{k+1})."""
    if n < 1:
        raise ValueError("n must be >= 1")
    p, q, r = walk.arrays(n)
    return JacobiMatrix(r.copy(), np.sqrt(p[:-1] * q[1:]))


def transition_matrix(walk: WalkSpec, n: int) -> np.ndarray:
    """Upper-left n x n block of the one-step transition matrix."""
    p, q, r = walk.arrays(n)
    return np.diag(r) + np.diag(p[:-1], 1) + np.diag(q[1:], -1)


# ---------------------------------------------------------------------------
# Stieltjes transform
# ---------------------------------------------------------------------------


@dataclass
class CFInfo:
    depth: int
    gap: float
    converged: bool


def stieltjes_eval(
    walk: WalkSpec,
    z,
    depth: int | None = None,
    *,
    tol: float = GAP_TOL,
    max_depth: int = MAX_DEPTH,
    backend=None,
    full_output: bool = False,
):
    """S(z) = int dnu(x) / (x - z) from the J-fraction of the walk.

    ``S(z) = -1 / (z - r_0 - p_0 q_1 / (z - r_1 - p_1 q_2 / ...))`` is
    evaluated bottom-up; without ``depth`` the truncation is doubled from
    64 until successive values differ by less than ``tol``.  Im S(z) has
    the sign of Im z.
    """
    z = np.asarray(z, dtype=np.complex128)
    if np.any((np.abs(z.imag) == 0) & (np.abs(z.real) <= 1.0)):
        raise ValueError("S is only defined off the segment [-1, 1]")

    def evaluate(d):
        if walk.horizon is not None:
            d = min(d, walk.horizon)
        p, q, r = walk.arrays(d)
        return -kernels.jacobi_cf(r, p[:-1] * q[1:], z, backend=backend)

    if depth is not None:
        val = evaluate(depth)
        gap = float(np.max(np.abs(evaluate(depth + 8) - val))) if z.size else 0.0
        info = CFInfo(depth, gap, gap < tol)
    elif walk.horizon is not None:
        val, info = evaluate(walk.horizon), CFInfo(walk.horizon, 0.0, True)
    else:
        dist = float(np.min(np.abs(z - np.clip(z.real, -1.0, 1.0)))) if z.size else 1.0
        d = max(64, int(2 ** np.ceil(np.log2(4.0 / max(dist, 1e-300)))))
        d = min(d, max_depth)
        prev = evaluate(d)
        last_gap = np.inf
        while True:
            nxt = min(2 * d, max_depth)
            if nxt == d:
                raise ConvergenceError(
                    f"J-fraction not converged at depth {d}", gap=float(last_gap)
                )
            val = evaluate(nxt)
            gap = float(np.max(np.abs(val - prev))) if z.size else 0.0
            d = nxt
            if gap < tol or (gap < 1e-9 and gap > 0.5 * last_gap):
                break
            prev, last_gap = val, gap
        info = CFInfo(d, gap, True)
    val = val[()] if val.ndim == 0 else val
    return (val, info) if full_output else val


# ---------------------------------------------------------------------------
# Measures on the segment
# ---------------------------------------------------------------------------


@dataclass
class SegmentMeasure:
    """Probability measure on [-1, 1]: density ``weight`` plus point masses.

    ``bands`` are the intervals carrying the density, used for quadrature.
    """

    weight: Callable[[np.ndarray], np.ndarray]
    point_masses: list = field(default_factory=list)
    bands: list = field(default_factory=lambda: [(-1.0, 1.0)])
    samples: tuple | None = None

    def integrate(self, g: Callable[[np.ndarray], np.ndarray], nodes: int = 512):
        total = 0.0
        for lo, hi in self.bands:
            x, w = cosine_nodes(lo, hi, nodes)
            total = total + np.sum(w * self.weight(x) * g(x))
        for x0, m in self.point_masses:
            total = total + m * g(np.asarray(x0, dtype=float))
        return total

    def total_mass(self, nodes: int = 512) -> float:
        return float(self.integrate(lambda x: np.ones_like(x), nodes))

    def quadrature(self, nodes: int = 512):
        """(nodes, weights) representing the whole measure, masses included."""
        xs, ws = [], []
        for lo, hi in self.bands:
            x, w = cosine_nodes(lo, hi, nodes)
            xs.append(x)
            ws.append(w * self.weight(x))
        for x0, m in self.point_masses:
            xs.append(np.array([x0], dtype=float))
            ws.append(np.array([m], dtype=float))
        return np.concatenate(xs), np.concatenate(ws)

    def to_csv(self, x=None) -> str:
        """``x, u(x)`` rows followed by a ``# point_mass, x, mass`` block."""
        if x is None:
            x = self.samples[0] if self.samples is not None else np.linspace(-1, 1, 257)
        x = np.asarray(x, dtype=float)
        u = self.weight(x) if self.samples is None else self.samples[1]
        lines = ["x,u"]
        lines += [f"{fmt_float(a)},{fmt_float(b)}" for a, b in zip(x, u)]
        lines.append("# point_mass,x,mass")
        lines += [f"# point_mass,{fmt_float(a)},{fmt_float(m)}" for a, m in self.point_masses]
        return "\n".join(lines) + "\n"


def measure_from_stieltjes(
    walk: WalkSpec,
    x_grid,
    k_range=(8, 24),
    *,
    candidates=(),
    tol: float = 1e-8,
    order: int = 5,
    singular_threshold: float = 1e6,
    backend=None,
) -> tuple[SegmentMeasure, dict]:
    """Recover the orthogonality measure from boundary values of S.

    ``u(x) = lim (1/pi) Im S(x + i eps)`` along ``eps = 2**-k`` with
    Neville extrapolation in eps; a mass at ``x0`` is
    ``lim eps Im S(x0 + i eps)``, tested at ``candidates`` and at grid points
    where (1/pi) Im S exceeds ``singular_threshold``.
    """
    x = np.asarray(x_grid, dtype=float)
    if np.any(np.abs(x) >= 1.0):
        raise ValueError("grid must lie inside (-1, 1)")
    max_depth = max(MAX_DEPTH, int(64 * 2.0 ** k_range[1]))
    peak = np.zeros(x.shape[0])

    def sample(eps, mask):
        S = stieltjes_eval(walk, x[mask] + 1j * eps, max_depth=max_depth, backend=backend)
        u = S.imag / np.pi
        peak[mask] = np.maximum(peak[mask], u)
        return u

    lim = radial_limit(sample, x.shape[0], k_range, order, tol)
    weight = lim.value.copy()
    singular = peak > singular_threshold
    masses = [
        point_mass_stieltjes(walk, x0, k_range, order=order, tol=tol, backend=backend)
        for x0 in list(candidates) + [float(v) for v in x[singular]]
    ]
    weight[singular] = 0.0
    measure = SegmentMeasure(
        lambda t: np.interp(t, x, weight, left=0.0, right=0.0),
        [(m["x"], m["mass"]) for m in masses if m["mass"] > 1e-8],
        bands=[(float(x[0]), float(x[-1]))],
        samples=(x, weight),
    )
    report = {
        "unstable": np.nonzero(~lim.stable)[0].tolist(),
        "spread": lim.spread,
        "levels": lim.levels,
        "masses": masses,
    }
    return measure, report


def point_mass_stieltjes(
    walk: WalkSpec, x0: float, k_range=(8, 24), *, order=5, tol=1e-8, backend=None
) -> dict:
    """Mass of the orthogonality measure at ``x0``: lim eps Im S(x0 + i eps)."""
    max_depth = max(MAX_DEPTH, int(64 * 2.0 ** k_range[1]))
    raw = []

    def sample(eps, mask):
        S = stieltjes_eval(walk, np.array([x0 + 1j * eps]), max_depth=max_depth, backend=backend)
        raw.append((eps, float(eps * S.imag[0])))
        return eps * S.imag

    lim = radial_limit(sample, 1, k_range, order, tol)
    return {
        "x": float(x0),
        "mass": float(lim.value[0]),
        "spread": float(lim.spread[0]),
        "stable": bool(lim.stable[0]),
        "estimates": raw,
    }


def gauss_measure(walk: WalkSpec, n_nodes: int) -> tuple[np.ndarray, np.ndarray]:
    """Gauss rule of the walk measure from the n-node Jacobi truncation.

    Exact for polynomials of degree up to ``2 n_nodes - 1``.
    """
    lam, vec = jacobi_matrix(walk, n_nodes).eigh()
    return lam, vec[0] ** 2


# ---------------------------------------------------------------------------
# n-step probabilities
# ---------------------------------------------------------------------------


def _matrix_power_entry(walk: WalkSpec, i: int, j: int, n: int, size: int) -> float:
    P = transition_matrix(walk, size)
    v = np.zeros(size)
    v[i] = 1.0
    for _ in range(n):
        v = v @ P
    return float(v[j])


def n_step_probability(
    walk: WalkSpec,
    i: int,
    j: int,
    n: int,
    route: str = "matrix",
    *,
    measure: SegmentMeasure | None = None,
    nodes: int = 512,
) -> float:
    """P_ij(n), the probability of moving from i to j in n steps.

    ``route="matrix"`` multiplies the one-step matrix on a truncation of
    ``i + j + n + 8`` states and checks that eight more states change
    nothing.  ``route="spectral"`` evaluates ``pi_j int x^n Q_i Q_j dnu``
    against ``measure`` if given, the closed-form measure for constant
    walks, and otherwise the Gauss rule of a Jacobi truncation large
    enough to integrate the polynomial exactly.
    """
    if min(i, j, n) < 0:
        raise ValueError("states and step count must be >= 0")
    if route == "matrix":
        size = i + j + n + 8
        val = _matrix_power_entry(walk, i, j, n, size)
        check = _matrix_power_entry(walk, i, j, n, size + 8)
        if abs(val - check) > 1e-14:
            raise ConvergenceError("truncation too small for the requested path length",
                                   gap=abs(val - check))
        return val
    if route != "spectral":
        raise ValueError(f"unknown route {route!r}")
    deg = max(i, j)
    pi_j = pi_constants(walk, j)[j]
    if measure is None and walk.kind == "constant":
        from .periodic import constant_walk_measure

        measure = constant_walk_measure(*walk.params)
    if measure is not None:
        x, w = measure.quadrature(nodes)
    else:
        x, w = gauss_measure(walk, (n + i + j) // 2 + 2)
    Q = walk_polynomials(walk, deg, x)
    return float(pi_j * np.sum(w * x**n * Q[i] * Q[j]))


def probability_table(walk: WalkSpec, states, steps, *, measure=None) -> str:
    """CSV table ``i, j, n, P_matrix, P_spectral, abs_diff``."""
    lines = ["i,j,n,P_matrix,P_spectral,abs_diff"]
    for n in steps:
        for i in states:
            for j in states:
                pm = n_step_probability(walk, i, j, n, "matrix")
                ps = n_step_probability(walk, i, j, n, "spectral", measure=measure)
                lines.append(
                    f"{i},{j},{n},{fmt_float(pm)},{fmt_float(ps)},{fmt_float(abs(pm - ps))}"
                )
    return "\n".join(lines) + "\n"
