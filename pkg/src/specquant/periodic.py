"""Closed forms for periodic coefficients.

Transfer matrices and discriminants, Chebyshev representations of the
orthonormal polynomials (circle and segment), the measure of the
constant-probability walk, the two-periodic circle measure with its
Carathéodory function, and the ruler-and-compass construction of the
two-periodic spectrum.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ._numerics import fmt_float
from .coeffs import VerblunskySpec, WalkSpec
from .errors import ConvergenceError, SpecError
from .opuc import CircleMeasure
from .walks import SegmentMeasure


def chebyshev_u(k: int, y):
    """U_k(y) from U_{k+1} = 2y U_k - U_{k-1}, U_{-1} = 0, U_0 = 1.

    ``k = -2`` is also accepted (U_{-2} = -1), which keeps closed forms
    valid at their lowest index.
    """
    y = np.asarray(y)
    if k < -2:
        raise ValueError("k must be >= -2")
    if k == -2:
        return -np.ones_like(y, dtype=np.result_type(y, float))[()]
    prev = np.zeros_like(y, dtype=np.result_type(y, float))
    cur = np.ones_like(prev)
    if k == -1:
        return prev[()]
    for _ in range(k):
        prev, cur = cur, 2 * y * cur - prev
    return cur[()]


# ---------------------------------------------------------------------------
# OPUC transfer matrices
# ---------------------------------------------------------------------------


def szego_matrix(alpha: complex, z) -> np.ndarray:
    """A(z) with (phi_{n+1}, phi_{n+1}^*) = A(z) (phi_n, phi_n^*); det A = z."""
    alpha = complex(alpha)
    rho = np.sqrt(1.0 - abs(alpha) ** 2)
    return np.array([[z, -np.conj(alpha)], [-alpha * z, 1.0]], dtype=np.complex128) / rho


def _half_power(z: complex, p: int) -> complex:
    """z**(p/2): e^{i p theta/2} with theta in [0, 2pi) on the circle, else principal."""
    z = complex(z)
    if abs(abs(z) - 1.0) < 1e-12:
        theta = np.mod(np.angle(z), 2 * np.pi)
        return complex(np.exp(0.5j * p * theta))
    return complex(z ** (0.5 * p))


@dataclass(frozen=True)
class TransferData:
    """Product of one period of transfer matrices and its discriminant."""

    period: int
    matrix: np.ndarray
    discriminant: complex
    half_power: complex


def _period_values(spec: VerblunskySpec, p: int) -> np.ndarray:
    if p < 1:
        raise ValueError("period must be >= 1")
    vals = spec.values(2 * p)
    if np.max(np.abs(vals[:p] - vals[p:])) > 1e-15:
        raise SpecError(f"coefficients are not {p}-periodic")
    return vals[:p]


def opuc_transfer(spec: VerblunskySpec, p: int, z: complex) -> TransferData:
    """T_p(z) = A_{p-1}(z) ... A_0(z) and Delta_p(z) = z^{-p/2} Tr T_p(z)."""
    z = complex(z)
    if z == 0:
        raise ValueError("the discriminant is undefined at z = 0")
    T = np.eye(2, dtype=np.complex128)
    for a in _period_values(spec, p):
        T = szego_matrix(a, z) @ T
    s = _half_power(z, p)
    return TransferData(p, T, complex(np.trace(T) / s), s)


def periodic_opuc_closed_form(spec: VerblunskySpec, p: int, k: int, j: int, z: complex):
    """(phi_n(z), phi_n^*(z)) at n = k p + j from the Chebyshev representation.

    ``z^{kp/2} [U_k(D/2) A_{j-1}..A_0 - z^{p/2} U_{k-1}(D/2) A_j^{-1}..A_{p-1}^{-1}] (1, 1)``
    with ``D`` the discriminant.  Any consistent choice of z^{p/2} gives
    the same value; on the circle the discriminant must come out real.
    """
    if not 0 <= j < p:
        raise ValueError("offset j must satisfy 0 <= j < p")
    if k < 0:
        raise ValueError("block index must be >= 0")
    z = complex(z)
    alphas = _period_values(spec, p)
    td = opuc_transfer(spec, p, z)
    if abs(abs(z) - 1.0) < 1e-12 and abs(td.discriminant.imag) > 1e-8:
        raise ConvergenceError("discriminant not real on the circle: branch mismatch",
                               gap=abs(td.discriminant.imag))
    head = np.eye(2, dtype=np.complex128)
    for a in alphas[:j]:
        head = szego_matrix(a, z) @ head
    tail = np.eye(2, dtype=np.complex128)
    for a in alphas[j:]:
        tail = tail @ np.linalg.inv(szego_matrix(a, z))
    y = td.discriminant / 2
    s = td.half_power
    vec = s**k * (chebyshev_u(k, y) * head - s * chebyshev_u(k - 1, y) * tail) @ np.ones(2)
    return complex(vec[0]), complex(vec[1])


def _chebyshev_table(k_max: int, y):
    """U_{-1}..U_{k_max} at y; row m holds U_{m-1}."""
    out = np.empty(k_max + 2, dtype=np.result_type(y, float))
    out[0], out[1] = 0.0, 1.0
    for m in range(2, k_max + 2):
        out[m] = 2 * y * out[m - 1] - out[m - 2]
    return out


def periodic_opuc_table(spec: VerblunskySpec, p: int, n_max: int, z: complex):
    """phi_n(z) and phi_n^*(z) for n = 0..n_max from the closed form.

    Same formula as :func:`periodic_opuc_closed_form`, with the transfer
    matrix, Chebyshev values and partial products computed once.
    """
    z = complex(z)
    alphas = _period_values(spec, p)
    td = opuc_transfer(spec, p, z)
    if abs(abs(z) - 1.0) < 1e-12 and abs(td.discriminant.imag) > 1e-8:
        raise ConvergenceError("discriminant not real on the circle: branch mismatch",
                               gap=abs(td.discriminant.imag))
    A = [szego_matrix(a, z) for a in alphas]
    Ainv = [np.linalg.inv(m) for m in A]
    heads, tails = [], []
    for j in range(p):
        h = np.eye(2, dtype=np.complex128)
        for m in A[:j]:
            h = m @ h
        t = np.eye(2, dtype=np.complex128)
        for m in Ainv[j:]:
            t = t @ m
        heads.append(h @ np.ones(2))
        tails.append(t @ np.ones(2))
    k_max = n_max // p
    U = _chebyshev_table(k_max, td.discriminant / 2)
    s = td.half_power
    out = np.empty((2, n_max + 1), dtype=np.complex128)
    for n in range(n_max + 1):
        k, j = divmod(n, p)
        out[:, n] = s**k * (U[k + 1] * heads[j] - s * U[k] * tails[j])
    return out[0], out[1]


def two_periodic_polys(a: complex, b: complex, k: int, z: complex):
    """(phi_{2k}(z), phi_{2k+1}(z)) from the explicit two-periodic formulas."""
    a, b, z = complex(a), complex(b), complex(z)
    ra, rb = np.sqrt(1 - abs(a) ** 2), np.sqrt(1 - abs(b) ** 2)
    y = (z + a * np.conj(b) + np.conj(a) * b + 1 / z) / (2 * ra * rb)
    uk, uk1 = chebyshev_u(k, y), chebyshev_u(k - 1, y)
    even = z**k * uk - z ** (k - 1) * uk1 * (1 + np.conj(b) + z * np.conj(a) * (1 + b)) / (ra * rb)
    odd = z**k * uk * (z - np.conj(a)) / ra - z**k * uk1 * (1 + np.conj(b)) / rb
    return complex(even), complex(odd)


# ---------------------------------------------------------------------------
# OPRL transfer matrices
# ---------------------------------------------------------------------------


def walk_matrix(p: float, q: float, r: float, x) -> np.ndarray:
    """B(x) with (Q_{m+1}, Q_m) = B(x) (Q_m, Q_{m-1}); det B = q / p."""
    return np.array([[(x - r) / p, -q / p], [1.0, 0.0]], dtype=float)


def oprl_transfer(walk: WalkSpec, L: int, x: float, k0: int = 1) -> TransferData:
    """T_L(x) = B_{k0+L-1} ... B_{k0} and its trace.

    ``half_power`` holds sqrt(det T_L) = sqrt(q_(L) / p_(L)), where q_(L)
    and p_(L) are the products of q and p over one period.
    """
    if L < 1:
        raise ValueError("period must be >= 1")
    rows = [walk.at(m) for m in range(k0, k0 + 2 * L)]
    if np.max(np.abs(np.subtract(rows[:L], rows[L:]))) > 1e-15:
        raise SpecError(f"walk rows from {k0} on are not {L}-periodic")
    T = np.eye(2)
    for p, q, r in rows[:L]:
        T = walk_matrix(p, q, r, x) @ T
    det = np.prod([q / p for p, q, _ in rows[:L]])
    return TransferData(L, T, complex(np.trace(T)), complex(np.sqrt(det)))


def periodic_oprl_closed_form(walk: WalkSpec, L: int, k: int, j: int, x: float, k0: int = 1):
    """(Q_n(x), Q_{n-1}(x)) at n = k0 + k L + j from the Chebyshev representation.

    Rows ``m >= k0`` are L-periodic (``k0 = 1`` for walks: q_0 = 0 breaks
    periodicity at the origin).  With ``s = sqrt(q_(L)/p_(L))`` and
    ``y = Tr T_L / (2 s)``::

        s^k [U_k(y) B_{k0+j-1}..B_{k0} - s U_{k-1}(y) B_{k0+j}^{-1}..B_{k0+L-1}^{-1}] v

    where ``v = (Q_{k0}, Q_{k0-1})`` comes from the plain recurrence.
    """
    if not 0 <= j < L:
        raise ValueError("offset j must satisfy 0 <= j < L")
    x = float(x)
    td = oprl_transfer(walk, L, x, k0)
    rows = [walk.at(m) for m in range(k0, k0 + L)]
    prev, cur = 0.0, 1.0
    for m in range(k0):
        p, q, r = walk.at(m)
        prev, cur = cur, ((x - r) * cur - q * prev) / p
    v = np.array([cur, prev])
    head = np.eye(2)
    for p, q, r in rows[:j]:
        head = walk_matrix(p, q, r, x) @ head
    tail = np.eye(2)
    for p, q, r in rows[j:]:
        tail = tail @ np.linalg.inv(walk_matrix(p, q, r, x))
    s = td.half_power.real
    y = td.discriminant.real / (2 * s)
    vec = s**k * (chebyshev_u(k, y) * head - s * chebyshev_u(k - 1, y) * tail) @ v
    return float(vec[0]), float(vec[1])


def periodic_oprl_table(walk: WalkSpec, L: int, n_max: int, x: float, k0: int = 1):
    """Q_n(x) for n = k0..n_max from the closed form, computed in one pass.

    Returns an array of length ``n_max + 1`` whose entries below ``k0``
    come from the plain recurrence.
    """
    x = float(x)
    td = oprl_transfer(walk, L, x, k0)
    rows = [walk.at(m) for m in range(k0, k0 + L)]
    out = np.empty(n_max + 1)
    prev, cur = 0.0, 1.0
    for m in range(k0):
        out[m] = cur
        p, q, r = walk.at(m)
        prev, cur = cur, ((x - r) * cur - q * prev) / p
    v = np.array([cur, prev])
    B = [walk_matrix(p, q, r, x) for p, q, r in rows]
    heads, tails = [], []
    for j in range(L):
        h = np.eye(2)
        for m in B[:j]:
            h = m @ h
        t = np.eye(2)
        for m in B[j:]:
            t = t @ np.linalg.inv(m)
        heads.append((h @ v)[0])
        tails.append((t @ v)[0])
    s = td.half_power.real
    U = _chebyshev_table(max(0, (n_max - k0) // L), td.discriminant.real / (2 * s))
    for n in range(k0, n_max + 1):
        k, j = divmod(n - k0, L)
        out[n] = s**k * (U[k + 1] * heads[j] - s * U[k] * tails[j])
    return out


# ---------------------------------------------------------------------------
# Constant-probability walk
# ---------------------------------------------------------------------------


def _check_constant(p0, p, q):
    if not (0 < p and 0 < q and p + q <= 1 + 1e-15 and 0 < p0 <= 1):
        raise SpecError(f"invalid constant walk (p0, p, q) = ({p0}, {p}, {q})")


def constant_walk_polys(p0: float, p: float, q: float, k: int, x, normalized: bool = False):
    """Q_k(x) of the constant walk in Chebyshev form.

    ``Q_k = (q/p)^{k/2} [U_k(y) + ((p/q)^{1/2} (x - 1 + p0)/p0 - (x - r)/sqrt(pq)) U_{k-1}(y)]``
    with ``y = (x - r) / (2 sqrt(pq))``.  With ``normalized`` the symmetric
    version ``P_k = (p/q)^{k/2} Q_k`` is returned.
    """
    _check_constant(p0, p, q)
    if k < 0:
        raise ValueError("k must be >= 0")
    x = np.asarray(x, dtype=float)
    r = 1.0 - p - q
    sq = np.sqrt(p * q)
    y = (x - r) / (2 * sq)
    P = chebyshev_u(k, y) + (np.sqrt(p / q) * (x - 1 + p0) / p0 - (x - r) / sq) * chebyshev_u(k - 1, y)
    return P if normalized else (q / p) ** (k / 2) * P


def constant_walk_xi(p0: float, p: float, q: float) -> float | None:
    """xi = 1 - p0 - p0 q / (p0 - p); None when p0 = p."""
    if p0 == p:
        return None
    return 1.0 - p0 - p0 * q / (p0 - p)


def constant_walk_stieltjes(p0: float, p: float, q: float, z):
    """Closed-form S(z) of the constant walk.

    The square root is ``(z - s_+)^{1/2} (z - s_-)^{1/2}`` with principal
    factors, which behaves like ``z`` at infinity and is analytic off the
    band.
    """
    _check_constant(p0, p, q)
    z = np.asarray(z, dtype=np.complex128)
    r = 1.0 - p - q
    s_minus, s_plus = 1 - (np.sqrt(p) + np.sqrt(q)) ** 2, 1 - (np.sqrt(p) - np.sqrt(q)) ** 2
    root = np.sqrt(z - s_plus) * np.sqrt(z - s_minus)
    # sqrt((r - z)^2 - 4pq) on the branch ~ z - r at infinity, so S ~ -1/z
    num = -2 * p * (z - 1 + p0) - p0 * (r - z) + p0 * root
    den = 2 * (1 - z) * ((p0 - p) * (z - 1 + p0) + p0 * q)
    return num / den


def constant_walk_measure(p0: float, p: float, q: float) -> SegmentMeasure:
    """Orthogonality measure of the constant walk.

    Density ``p0 sqrt((x - s_-)(s_+ - x)) / (2 pi (1 - x) (p0 - p)(x - xi))``
    on ``[s_-, s_+]``, ``s_pm = 1 - (sqrt p -+ sqrt q)^2``, where
    ``(p0 - p)(x - xi)`` is evaluated as ``(p0 - p)(x - 1 + p0) + p0 q`` so
    that the case p0 = p needs no special branch.  Masses
    ``(q - p)/(q - p + p0)`` at 1 when q > p, and
    ``((p0 - p)^2 - pq)/((p0 - p)(p0 - p + q))`` at xi when (p0 - p)^2 > pq.
    """
    _check_constant(p0, p, q)
    s_minus = 1 - (np.sqrt(p) + np.sqrt(q)) ** 2
    s_plus = 1 - (np.sqrt(p) - np.sqrt(q)) ** 2

    def weight(x):
        x = np.asarray(x, dtype=float)
        inside = (x > s_minus) & (x < s_plus)
        xs = np.where(inside, x, 0.5 * (s_minus + s_plus))
        val = p0 * np.sqrt((xs - s_minus) * (s_plus - xs)) / (
            2 * np.pi * (1 - xs) * ((p0 - p) * (xs - 1 + p0) + p0 * q)
        )
        return np.where(inside, val, 0.0)

    masses = []
    if q > p:
        masses.append((1.0, (q - p) / (q - p + p0)))
    xi = constant_walk_xi(p0, p, q)
    if xi is not None and (p0 - p) ** 2 > p * q:
        masses.append((xi, ((p0 - p) ** 2 - p * q) / ((p0 - p) * (p0 - p + q))))
    return SegmentMeasure(weight, masses, bands=[(float(s_minus), float(s_plus))])


# ---------------------------------------------------------------------------
# Two-periodic Verblunsky coefficients
# ---------------------------------------------------------------------------


def _rho(a):
    return float(np.sqrt(1.0 - abs(a) ** 2))


def two_periodic_band_cosines(a: complex, b: complex):
    """(cos theta_+, cos theta_-) = (+-rho_a rho_b - Re(a conj b))."""
    ra, rb = _rho(a), _rho(b)
    c = (a * np.conj(b)).real
    return ra * rb - c, -ra * rb - c


def two_periodic_quadratic(a: complex, b: complex, z):
    """Coefficients (A, B, C) of the quadratic A F^2 + B F + C = 0."""
    a, b = complex(a), complex(b)
    z = np.asarray(z, dtype=np.complex128)
    ac, bc = np.conj(a), np.conj(b)
    A = -(z**2) * (b + 1) - z * (a + a * bc - ac - ac * b) + 1 + bc
    B = -2 * (b * z**2 + (a + ac) * z + bc)
    C = -(z**2) * (b - 1) - z * (a - a * bc - ac + ac * b) - 1 + bc
    return A, B, C


def two_periodic_caratheodory(a: complex, b: complex, z, steps: int = 256):
    """F(z) as the root of the quadratic continuously connected to F(0) = 1.

    The root is tracked along the ray ``t z``, ``t`` in [0, 1], choosing at
    each step the root nearest the previous value.
    """
    z = np.asarray(z, dtype=np.complex128)
    if np.any(np.abs(z) >= 1):
        raise ValueError("F is evaluated inside the disk only")
    F = np.ones_like(z)
    for t in np.linspace(0.0, 1.0, steps + 1)[1:]:
        A, B, C = two_periodic_quadratic(a, b, t * z)
        disc = np.sqrt(B * B - 4 * A * C)
        r1 = (-B + disc) / (2 * A)
        r2 = (-B - disc) / (2 * A)
        F = np.where(np.abs(r1 - F) <= np.abs(r2 - F), r1, r2)
    return F[()] if F.ndim == 0 else F


def two_periodic_weight(a: complex, b: complex, theta):
    """Absolutely continuous density (w.r.t. dtheta/2pi) for alternating a, b.

    ``sqrt(rho_a^2 rho_b^2 - Re(e^{i theta} + a conj b)^2) / |Im((e^{i theta} - conj a)(1 + b))|``
    inside the bands and zero outside.
    """
    a, b = complex(a), complex(b)
    theta = np.asarray(theta, dtype=float)
    u = np.exp(1j * theta)
    ra, rb = _rho(a), _rho(b)
    rad = (ra * rb) ** 2 - ((u + a * np.conj(b)).real) ** 2
    den = np.abs(((u - np.conj(a)) * (1 + b)).imag)
    inside = rad > 0
    with np.errstate(divide="ignore", invalid="ignore"):
        w = np.sqrt(np.where(inside, rad, 0.0)) / den
    w = np.where(inside, w, 0.0)
    # where two bands touch, numerator and denominator vanish together;
    # the density there is the (finite) two-sided limit
    touch = ~inside & (den < 1e-12) & (np.abs(rad) < 1e-12)
    if np.any(touch):
        # symmetric averages are even in h; one Richardson step removes h^2
        h = 1e-3
        def avg(step):
            return 0.5 * (two_periodic_weight(a, b, theta + step)
                          + two_periodic_weight(a, b, theta - step))
        w = np.where(touch, (4 * avg(h) - avg(2 * h)) / 3, w)
    return w


def two_periodic_points(a: complex, b: complex):
    """Candidate discrete points z_+, z_- (roots of A(z) = 0)."""
    a, b = complex(a), complex(b)
    ac, bc = np.conj(a), np.conj(b)
    c1 = a + a * bc - ac - ac * b
    disc = np.sqrt(c1 * c1 + 4 * abs(1 + b) ** 2)
    return (-c1 + disc) / (2 * (b + 1)), (-c1 - disc) / (2 * (b + 1))


def two_periodic_point_masses(a: complex, b: complex, factor: float = 0.5):
    """Discrete part: list of (z, theta, mass, included) for z_+ then z_-.

    z_+ carries mass iff Re(a + b z_+) > 0 and z_- iff Re(a + b z_-) < 0;
    the mass is ``factor * |2 Re(a + b z) / ((b + 1) sin((g_+ - g_-)/2))|``
    with ``z_pm = e^{i g_pm}``.  The default factor 1/2 is the value that
    agrees with radial boundary limits of F.
    """
    zp, zm = two_periodic_points(a, b)
    gp, gm = np.angle(zp), np.angle(zm)
    s = np.sin((gp - gm) / 2)
    out = []
    for z, sign in ((zp, 1), (zm, -1)):
        re = (a + b * z).real
        included = sign * re > 0
        mass = factor * abs(2 * re / ((b + 1) * s)) if included else 0.0
        out.append((complex(z), float(np.mod(np.angle(z), 2 * np.pi)), float(mass), bool(included)))
    return out


def two_periodic_circle_measure(a: complex, b: complex, factor: float = 0.5) -> CircleMeasure:
    """Measure on the circle for alpha_{2k} = a, alpha_{2k+1} = b."""
    a, b = complex(a), complex(b)
    cp, cm = two_periodic_band_cosines(a, b)
    tp, tm = float(np.arccos(np.clip(cp, -1, 1))), float(np.arccos(np.clip(cm, -1, 1)))
    bands = [(tp, tm), (2 * np.pi - tm, 2 * np.pi - tp)]
    masses = [(t, m) for _, t, m, inc in two_periodic_point_masses(a, b, factor) if inc]
    return CircleMeasure(lambda th: two_periodic_weight(a, b, th), masses, bands=bands)


# ---------------------------------------------------------------------------
# Geometric construction
# ---------------------------------------------------------------------------


def thales_rho(a: complex) -> tuple[float, complex]:
    """rho_a = sqrt(1 - |a|^2) by Thales' theorem.

    The circle of radius |a| about 0 meets the circle on the diameter
    [0, 1] at a point w with a right angle at w, so |1 - w| = rho_a.
    Returns (rho_a, w).
    """
    m = abs(a)
    w = complex(m * m, m * np.sqrt(max(0.0, 1.0 - m * m)))
    return abs(1 - w), w


def circle_circle_unit(center: float, radius: float):
    """Intersections of the unit circle with the circle |z - center| = radius.

    Returns (points, tangent) with points ordered by increasing argument
    in (-pi, pi]; ``tangent`` flags a double intersection.
    """
    x = (1 + center**2 - radius**2) / (2 * center)
    if abs(x) > 1 + 1e-12:
        return [], False
    x = float(np.clip(x, -1.0, 1.0))
    y = np.sqrt(max(0.0, 1 - x * x))
    tangent = y < 1e-12
    return ([complex(x, 0.0)] if tangent else [complex(x, -y), complex(x, y)]), tangent


def line_circle_unit(p0: complex, direction: complex):
    """Intersections of the unit circle with the line p0 + t direction."""
    d2 = abs(direction) ** 2
    if d2 == 0:
        return [], False
    bq = 2 * (np.conj(p0) * direction).real
    cq = abs(p0) ** 2 - 1
    disc = bq * bq - 4 * d2 * cq
    if disc < 0:
        return [], False
    sq = np.sqrt(disc)
    ts = [(-bq + sq) / (2 * d2), (-bq - sq) / (2 * d2)]
    tangent = sq < 1e-12
    return [complex(p0 + t * direction) for t in ts[: 1 if tangent else 2]], tangent


@dataclass
class GeometricSpectrum:
    """Ruler-and-compass data for the two-periodic spectrum."""

    a: complex
    b: complex
    rho_a: float
    rho_b: float
    r_plus: float
    r_minus: float
    line: tuple
    band_edges: list
    discrete_points: list
    flags: list = field(default_factory=list)

    def to_csv(self) -> str:
        lines = ["kind,re,im,extra"]
        lines.append(f"circle_center,1.0,0.0,r_plus={fmt_float(self.r_plus)}")
        lines.append(f"circle_center,1.0,0.0,r_minus={fmt_float(self.r_minus)}")
        for pt in self.line:
            lines.append(f"line_point,{fmt_float(pt.real)},{fmt_float(pt.imag)},")
        for e in self.band_edges:
            lines.append(f"band_edge,{fmt_float(e.real)},{fmt_float(e.imag)},")
        for z, inc, m in self.discrete_points:
            lines.append(f"discrete,{fmt_float(z.real)},{fmt_float(z.imag)},"
                         f"included={inc};mass={fmt_float(m)}")
        for f in self.flags:
            lines.append(f"flag,,,{f}")
        return "\n".join(lines) + "\n"


def geometric_spectrum(a: complex, b: complex, factor: float = 0.5) -> GeometricSpectrum:
    """Band edges and discrete points from circle and line intersections.

    Edges are where the unit circle meets circles about 1 of radii
    ``r_pm = sqrt(|a + b|^2 + (rho_a -+ rho_b)^2)``; the discrete
    candidates are where it meets the line through ``conj a`` and
    ``1 + conj a + conj b``.
    """
    a, b = complex(a), complex(b)
    rho_a, _ = thales_rho(a)
    rho_b, _ = thales_rho(b)
    s = abs(a + b)
    r_plus = float(np.hypot(s, rho_a - rho_b))
    r_minus = float(np.hypot(s, rho_a + rho_b))
    flags = []
    edges = []
    for name, r in (("plus", r_plus), ("minus", r_minus)):
        if r < 1e-12:
            flags.append(f"degenerate_{name}: zero radius, band closes at z = 1")
            edges.append(1 + 0j)
            continue
        pts, tangent = circle_circle_unit(1.0, r)
        if tangent:
            flags.append(f"tangent_{name}")
        edges.extend(pts)
    p_line = complex(np.conj(a))
    q_line = 1 + np.conj(a) + np.conj(b)
    pts, tangent = line_circle_unit(p_line, q_line - p_line)
    if tangent:
        flags.append("tangent_line")
    analytic = two_periodic_point_masses(a, b, factor)
    discrete = []
    for z in pts:
        zz, _, m, inc = min(analytic, key=lambda t: abs(t[0] - z))
        discrete.append((z, inc, m))
    return GeometricSpectrum(a, b, rho_a, rho_b, r_plus, r_minus, (p_line, q_line),
                             edges, discrete, flags)
