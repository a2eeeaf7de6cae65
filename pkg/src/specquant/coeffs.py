"""Coefficient sequences: Verblunsky coefficients and birth-death walks.

Both spec types are index-addressable rules rather than materialised
sequences.  Closed-form families are validated when constructed; custom
rules are validated on every access.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, NamedTuple

import numpy as np

from .errors import SpecError

STOCHASTIC_TOL = 1e-12


def _as_complex(v) -> complex:
    if isinstance(v, (list, tuple)):
        if len(v) != 2:
            raise SpecError(f"complex value must be [re, im], got {v!r}")
        return complex(float(v[0]), float(v[1]))
    return complex(v)


def _pair(c: complex) -> list:
    return [float(c.real), float(c.imag)]


def _check_inside(a: complex, n: int) -> complex:
    if not abs(a) < 1.0:
        raise SpecError(f"|alpha_{n}| = {abs(a)!r} is not < 1")
    return a


# ---------------------------------------------------------------------------
# Verblunsky coefficients
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class VerblunskySpec:
    """Rule producing Verblunsky coefficients alpha_n, n >= 0.

    Use the classmethod constructors rather than the raw initialiser.  The
    sentinel alpha_{-1} = -1 is implied by :meth:`at` and never stored.
    """

    kind: str
    params: tuple
    horizon: int | None = None
    terminal: bool = False
    rule: Callable[[int], complex] | None = field(default=None, compare=False, repr=False)

    # -- constructors -----------------------------------------------------
    @classmethod
    def constant(cls, a) -> "VerblunskySpec":
        a = _check_inside(_as_complex(a), 0)
        return cls("constant", (a,))

    @classmethod
    def two_periodic(cls, a, b) -> "VerblunskySpec":
        a = _check_inside(_as_complex(a), 0)
        b = _check_inside(_as_complex(b), 1)
        return cls("two_periodic", (a, b))

    @classmethod
    def periodic(cls, values) -> "VerblunskySpec":
        vals = tuple(_as_complex(v) for v in values)
        if not vals:
            raise SpecError("periodic spec needs at least one value")
        for n, a in enumerate(vals):
            _check_inside(a, n)
        return cls("periodic", vals)

    @classmethod
    def circular_jacobi(cls, alpha: float, beta: float) -> "VerblunskySpec":
        # |alpha_n| < 1 holds for every n whenever alpha, beta > -1
        _check_jacobi_params(alpha, beta)
        return cls("circular_jacobi", (float(alpha), float(beta)))

    @classmethod
    def from_list(cls, values, terminal: bool = False) -> "VerblunskySpec":
        """Finite list; with ``terminal`` the last entry must lie on the circle."""
        vals = tuple(_as_complex(v) for v in values)
        if not vals:
            raise SpecError("empty coefficient list")
        last = len(vals) - 1
        for n, a in enumerate(vals):
            if terminal and n == last:
                if abs(abs(a) - 1.0) > 1e-12:
                    raise SpecError(f"terminal coefficient |alpha_{n}| = {abs(a)!r} is not 1")
            else:
                _check_inside(a, n)
        return cls("list", vals, horizon=len(vals), terminal=terminal)

    @classmethod
    def custom(cls, rule: Callable[[int], complex], horizon: int | None = None) -> "VerblunskySpec":
        return cls("custom", (), horizon=horizon, rule=rule)

    # -- access -------------------------------------------------------------
    def at(self, n: int) -> complex:
        if n < -1:
            raise IndexError(f"Verblunsky index {n} < -1")
        if n == -1:
            return complex(-1.0)
        if self.horizon is not None and n >= self.horizon:
            raise IndexError(f"index {n} beyond horizon {self.horizon} of {self.kind} spec")
        kind = self.kind
        if kind == "constant":
            return self.params[0]
        if kind == "two_periodic":
            return self.params[n % 2]
        if kind == "periodic":
            return self.params[n % len(self.params)]
        if kind == "circular_jacobi":
            return complex(circular_jacobi_alpha(n, *self.params))
        if kind == "list":
            return self.params[n]
        if kind == "custom":
            a = complex(self.rule(n))
            if self.terminal and self.horizon is not None and n == self.horizon - 1:
                return a
            return _check_inside(a, n)
        raise SpecError(f"unknown spec kind {kind!r}")

    def values(self, n: int) -> np.ndarray:
        """First ``n`` coefficients alpha_0..alpha_{n-1} as a complex array."""
        if n < 0:
            raise ValueError("n must be >= 0")
        if self.horizon is not None and n > self.horizon:
            raise IndexError(f"requested {n} coefficients beyond horizon {self.horizon}")
        kind = self.kind
        if kind == "constant":
            return np.full(n, self.params[0], dtype=np.complex128)
        if kind in ("two_periodic", "periodic"):
            per = np.asarray(self.params, dtype=np.complex128)
            return per[np.arange(n) % per.shape[0]]
        if kind == "circular_jacobi":
            idx = np.arange(n, dtype=float)
            return circular_jacobi_alpha(idx, *self.params).astype(np.complex128)
        if kind == "list":
            return np.asarray(self.params[:n], dtype=np.complex128)
        return np.array([self.at(k) for k in range(n)], dtype=np.complex128)

    @property
    def period(self) -> int | None:
        return {"constant": 1, "two_periodic": 2}.get(
            self.kind, len(self.params) if self.kind == "periodic" else None
        )

    @property
    def is_real(self) -> bool:
        if self.kind == "circular_jacobi":
            return True
        if self.kind == "custom":
            return False
        return all(abs(complex(a).imag) == 0.0 for a in self.params)

    # -- JSON ---------------------------------------------------------------
    def to_json(self) -> dict:
        if self.kind == "constant":
            return {"kind": "constant", "a": _pair(self.params[0])}
        if self.kind == "two_periodic":
            return {"kind": "two_periodic", "a": _pair(self.params[0]), "b": _pair(self.params[1])}
        if self.kind == "periodic":
            return {"kind": "periodic", "values": [_pair(a) for a in self.params]}
        if self.kind == "circular_jacobi":
            return {"kind": "circular_jacobi", "alpha": self.params[0], "beta": self.params[1]}
        if self.kind == "list":
            doc = {"kind": "list", "values": [_pair(a) for a in self.params]}
            if self.terminal:
                doc["terminal"] = True
            return doc
        raise SpecError("custom specs have no JSON form")


def _check_jacobi_params(alpha, beta):
    if not (alpha > -1 and beta > -1):
        raise SpecError(f"Jacobi parameters must exceed -1, got ({alpha}, {beta})")


def verblunsky_at(spec: VerblunskySpec, n: int) -> complex:
    """alpha_n of ``spec``; -1 exactly at n = -1."""
    return spec.at(n)


def circular_jacobi_alpha(n, alpha: float, beta: float):
    """Verblunsky coefficients of the circular Jacobi weight.

    ``-(alpha + 1/2 + (-1)**(n+1) (beta + 1/2)) / (n + alpha + beta + 2)``;
    ``n`` may be an integer or an array of integers.
    """
    _check_jacobi_params(alpha, beta)
    n_arr = np.asarray(n)
    if np.any(n_arr < 0):
        raise ValueError("index must be >= 0")
    sign = np.where(n_arr % 2 == 0, -1.0, 1.0)
    val = -(alpha + 0.5 + sign * (beta + 0.5)) / (n_arr + alpha + beta + 2.0)
    return float(val) if np.ndim(val) == 0 else val


class JacobiWalkCoeffs(NamedTuple):
    p: float
    r: float
    q: float
    valid: bool  # False when r < 0: the recurrence is not a random walk


def jacobi_walk_coeffs(n: int, alpha: float, beta: float) -> JacobiWalkCoeffs:
    """Transition coefficients of the normalised Jacobi polynomials P_n/P_n(1)."""
    _check_jacobi_params(alpha, beta)
    if n < 0:
        raise ValueError("n must be >= 0")
    s = alpha + beta
    if n == 0:
        # closed forms after cancelling (alpha + beta) and (alpha + beta + 1)
        p = 2.0 * (alpha + 1.0) / (s + 2.0)
        r = (beta - alpha) / (s + 2.0)
        q = 0.0
    else:
        m = 2.0 * n + s
        p = 2.0 * (n + alpha + 1.0) * (n + s + 1.0) / ((m + 1.0) * (m + 2.0))
        r = (beta * beta - alpha * alpha) / (m * (m + 2.0))
        q = 2.0 * n * (n + beta) / (m * (m + 1.0))
    return JacobiWalkCoeffs(p, r, q, r >= 0.0)


def jacobi_poly_eval(n: int, alpha: float, beta: float, x):
    """P_n^(alpha, beta)(x) from the three-term recurrence, P_{-1} = 0, P_0 = 1."""
    _check_jacobi_params(alpha, beta)
    if n < 0:
        raise ValueError("n must be >= 0")
    x = np.asarray(x, dtype=float)
    s = alpha + beta
    prev = np.zeros_like(x)
    cur = np.ones_like(x)
    for k in range(n):
        if k == 0:
            lead = 2.0 / (s + 2.0)
            mid = (beta - alpha) / (s + 2.0)
            low = 0.0
        else:
            m = 2.0 * k + s
            lead = 2.0 * (k + 1.0) * (k + s + 1.0) / ((m + 1.0) * (m + 2.0))
            mid = (beta * beta - alpha * alpha) / (m * (m + 2.0))
            low = 2.0 * (k + alpha) * (k + beta) / (m * (m + 1.0))
        prev, cur = cur, ((x - mid) * cur - low * prev) / lead
    return float(cur) if cur.ndim == 0 else cur


# ---------------------------------------------------------------------------
# Walks
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class WalkSpec:
    """Transition probabilities (p_k, q_k, r_k) of a half-line birth-death chain."""

    kind: str
    params: tuple
    horizon: int | None = None
    rule: Callable[[int], tuple] | None = field(default=None, compare=False, repr=False)

    @classmethod
    def from_lists(cls, p, q, r) -> "WalkSpec":
        p, q, r = (tuple(float(v) for v in seq) for seq in (p, q, r))
        if not (len(p) == len(q) == len(r)) or not p:
            raise SpecError("p, q, r must be non-empty and of equal length")
        for k in range(len(p)):
            _check_row(k, p[k], q[k], r[k])
        return cls("list", (p, q, r), horizon=len(p))

    @classmethod
    def constant(cls, p0: float, p: float, q: float) -> "WalkSpec":
        """p_0, r_0 = 1 - p_0 at the origin; (p, q, 1 - p - q) elsewhere."""
        p0, p, q = float(p0), float(p), float(q)
        _check_row(0, p0, 0.0, 1.0 - p0)
        _check_row(1, p, q, 1.0 - p - q)
        return cls("constant", (p0, p, q))

    @classmethod
    def periodic(cls, p0: float, p, q, r) -> "WalkSpec":
        """Origin row (p0, 0, 1 - p0); rows k >= 1 cycle through (p, q, r)."""
        p0 = float(p0)
        p, q, r = (tuple(float(v) for v in seq) for seq in (p, q, r))
        if not (len(p) == len(q) == len(r)) or not p:
            raise SpecError("periodic block lists must be non-empty and of equal length")
        _check_row(0, p0, 0.0, 1.0 - p0)
        for j in range(len(p)):
            _check_row(j + 1, p[j], q[j], r[j])
        return cls("periodic", (p0, p, q, r))

    @classmethod
    def jacobi(cls, alpha: float, beta: float) -> "WalkSpec":
        if not (alpha == beta or beta >= abs(alpha)):
            raise SpecError(
                f"Jacobi parameters ({alpha}, {beta}) give r_n < 0; not a random walk"
            )
        _check_jacobi_params(alpha, beta)
        return cls("jacobi", (float(alpha), float(beta)))

    @classmethod
    def custom(cls, rule: Callable[[int], tuple], horizon: int | None = None) -> "WalkSpec":
        """``rule(k)`` returns (p_k, q_k, r_k)."""
        return cls("custom", (), horizon=horizon, rule=rule)

    def at(self, k: int) -> tuple[float, float, float]:
        """(p_k, q_k, r_k)."""
        if k < 0:
            raise IndexError("walk index must be >= 0")
        if self.horizon is not None and k >= self.horizon:
            raise IndexError(f"index {k} beyond horizon {self.horizon}")
        kind = self.kind
        if kind == "list":
            return self.params[0][k], self.params[1][k], self.params[2][k]
        if kind == "constant":
            p0, p, q = self.params
            return (p0, 0.0, 1.0 - p0) if k == 0 else (p, q, 1.0 - p - q)
        if kind == "periodic":
            p0, p, q, r = self.params
            if k == 0:
                return p0, 0.0, 1.0 - p0
            j = (k - 1) % len(p)
            return p[j], q[j], r[j]
        if kind == "jacobi":
            c = jacobi_walk_coeffs(k, *self.params)
            return c.p, c.q, c.r
        if kind == "custom":
            p, q, r = (float(v) for v in self.rule(k))
            _check_row(k, p, q, r)
            return p, q, r
        raise SpecError(f"unknown walk kind {kind!r}")

    def arrays(self, n: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """(p, q, r) arrays for k = 0..n-1."""
        if self.horizon is not None and n > self.horizon:
            raise IndexError(f"requested {n} rows beyond horizon {self.horizon}")
        if self.kind == "list":
            return tuple(np.asarray(seq[:n], dtype=float) for seq in self.params)
        rows = np.array([self.at(k) for k in range(n)], dtype=float).reshape(n, 3)
        return rows[:, 0].copy(), rows[:, 1].copy(), rows[:, 2].copy()

    def to_json(self) -> dict:
        if self.kind == "constant":
            p0, p, q = self.params
            return {"kind": "walk", "p0": p0, "p": p, "q": q}
        if self.kind == "list":
            p, q, r = self.params
            return {"p": list(p), "q": list(q), "r": list(r)}
        if self.kind == "periodic":
            p0, p, q, r = self.params
            return {"kind": "periodic_walk", "p0": p0, "p": list(p), "q": list(q), "r": list(r)}
        if self.kind == "jacobi":
            return {"kind": "jacobi_walk", "alpha": self.params[0], "beta": self.params[1]}
        raise SpecError("custom walks have no JSON form")


def _check_row(k, p, q, r):
    if not p > 0:
        raise SpecError(f"p_{k} = {p!r} must be > 0")
    if k == 0:
        if q != 0:
            raise SpecError(f"q_0 must be 0, got {q!r}")
    elif not q > 0:
        raise SpecError(f"q_{k} = {q!r} must be > 0")
    if r < -STOCHASTIC_TOL:
        raise SpecError(f"r_{k} = {r!r} must be >= 0")
    if abs(p + q + r - 1.0) > STOCHASTIC_TOL:
        raise SpecError(f"row {k}: p + q + r = {p + q + r!r} != 1")


# ---------------------------------------------------------------------------
# JSON documents
# ---------------------------------------------------------------------------


def spec_from_json(doc: dict):
    """Parse a coefficient-spec document into a VerblunskySpec or WalkSpec."""
    if not isinstance(doc, dict):
        raise SpecError("spec document must be a JSON object")
    kind = doc.get("kind")
    try:
        if kind == "constant":
            return VerblunskySpec.constant(_as_complex(doc["a"]))
        if kind == "two_periodic":
            return VerblunskySpec.two_periodic(_as_complex(doc["a"]), _as_complex(doc["b"]))
        if kind == "periodic":
            return VerblunskySpec.periodic([_as_complex(v) for v in doc["values"]])
        if kind == "circular_jacobi":
            return VerblunskySpec.circular_jacobi(float(doc["alpha"]), float(doc["beta"]))
        if kind == "list":
            return VerblunskySpec.from_list(
                [_as_complex(v) for v in doc["values"]], terminal=bool(doc.get("terminal", False))
            )
        if kind == "walk" or (kind is None and {"p0", "p", "q"} <= doc.keys() and "r" not in doc):
            return WalkSpec.constant(float(doc["p0"]), float(doc["p"]), float(doc["q"]))
        if kind == "periodic_walk":
            return WalkSpec.periodic(doc["p0"], doc["p"], doc["q"], doc["r"])
        if kind == "jacobi_walk":
            return WalkSpec.jacobi(float(doc["alpha"]), float(doc["beta"]))
        if kind is None and {"p", "q", "r"} <= doc.keys():
            return WalkSpec.from_lists(doc["p"], doc["q"], doc["r"])
    except (KeyError, TypeError) as exc:
        raise SpecError(f"malformed {kind or 'walk'} document: {exc}") from exc
    raise SpecError(f"unrecognised spec document {doc!r}")


def real_alphas(values) -> np.ndarray:
    """Validate a real Verblunsky list, returning a float array."""
    arr = np.asarray(values)
    if np.iscomplexobj(arr):
        if np.any(np.abs(arr.imag) > 0):
            raise SpecError("Verblunsky coefficients must be real here")
        arr = arr.real
    arr = np.asarray(arr, dtype=float)
    bad = np.nonzero(~(np.abs(arr) < 1.0))[0]
    if bad.size:
        n = int(bad[0])
        raise SpecError(f"alpha_{n} = {arr[n]!r} is outside (-1, 1)")
    return arr


def binomial(x: float, n: int) -> float:
    """Generalised binomial coefficient C(x, n) for real x and integer n >= 0."""
    out = 1.0
    for i in range(1, n + 1):
        out *= (x - n + i) / i
    return out
