"""Szegedy quantization of Markov chains.

The walk lives on the span of ordered vertex pairs ``|j, k>``.  With
``|phi_j> = sum_k sqrt(P_jk) |j, k>``, the coin flip is ``R = 2 Pi - I``
(``Pi`` the projector onto the ``phi_j``), the position swap is
``S |j, k> = |k, j>``, and one step is ``U = S R``.  The discriminant
``D = T^t S T`` has entries ``sqrt(P_jk P_kj)``.

For a half-line walk truncated at vertex K the state list is, in
lexicographic order::

    (0,0), (0,1), (1,0), (1,1), (1,2), ..., (K,K-1), (K,K), (K,K+1), (K+1,K)

The last pair exists only as the swap image of (K, K+1): vertex K keeps its
full three-state coin, so no stochastic row is renormalised and ``D`` is
exactly the (K+1) x (K+1) Jacobi truncation.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ._numerics import fmt_float
from .coeffs import WalkSpec
from .errors import SpecError

STOCH_TOL = 1e-12


@dataclass
class QuantumState:
    """Finite superposition of pair states ``|j, k>``."""

    amplitudes: dict

    def norm(self) -> float:
        return float(np.sqrt(sum(abs(v) ** 2 for v in self.amplitudes.values())))

    def normalized(self) -> "QuantumState":
        n = self.norm()
        return QuantumState({key: v / n for key, v in self.amplitudes.items()})

    def vector(self, index: dict) -> np.ndarray:
        out = np.zeros(len(index), dtype=np.complex128)
        for key, v in self.amplitudes.items():
            out[index[key]] = v
        return out

    @classmethod
    def from_vector(cls, vec, basis, tol: float = 0.0) -> "QuantumState":
        return cls({b: complex(v) for b, v in zip(basis, vec) if abs(v) > tol})


@dataclass
class WalkOperator:
    """R, S and U = S R on an ordered list of pair states."""

    basis: list
    R: np.ndarray
    S: np.ndarray
    T: np.ndarray
    n_vertices: int
    meta: dict = field(default_factory=dict)

    @property
    def U(self) -> np.ndarray:
        return self.S @ self.R

    @property
    def index(self) -> dict:
        return {b: i for i, b in enumerate(self.basis)}

    @property
    def D(self) -> np.ndarray:
        return self.T.T @ self.S @ self.T

    def phi(self, j: int) -> np.ndarray:
        return self.T[:, j].astype(np.complex128)

    def psi(self, j: int) -> np.ndarray:
        return self.S @ self.phi(j)


def _check_stochastic(P) -> np.ndarray:
    P = np.asarray(P, dtype=float)
    if P.ndim != 2 or P.shape[0] != P.shape[1]:
        raise SpecError("transition matrix must be square")
    if np.any(P < 0):
        raise SpecError("transition matrix has negative entries")
    rows = np.abs(P.sum(axis=1) - 1.0)
    if np.any(rows > STOCH_TOL):
        raise SpecError(f"row {int(np.argmax(rows))} does not sum to 1")
    return P


def stationary_coin_states(P) -> list[QuantumState]:
    """|phi_j> = sum_k sqrt(P_jk) |j, k> for each vertex j."""
    P = _check_stochastic(P)
    n = P.shape[0]
    return [
        QuantumState({(j, k): complex(np.sqrt(P[j, k])) for k in range(n) if P[j, k] > 0})
        for j in range(n)
    ]


def _assemble(basis, phis, n_vertices, meta=None) -> WalkOperator:
    index = {b: i for i, b in enumerate(basis)}
    dim = len(basis)
    T = np.zeros((dim, len(phis)))
    for j, st in enumerate(phis):
        for key, v in st.amplitudes.items():
            T[index[key], j] = v.real
    S = np.zeros((dim, dim))
    for (j, k), i in index.items():
        S[index[(k, j)], i] = 1.0
    R = 2.0 * T @ T.T - np.eye(dim)
    return WalkOperator(list(basis), R, S, T, n_vertices, meta or {})


def walk_operator(P) -> WalkOperator:
    """Szegedy walk of a finite chain on all N^2 ordered pairs."""
    P = _check_stochastic(P)
    n = P.shape[0]
    basis = [(j, k) for j in range(n) for k in range(n)]
    return _assemble(basis, stationary_coin_states(P), n)


def _positions(op: WalkOperator, vec) -> np.ndarray:
    probs = np.zeros(max(b[0] for b in op.basis) + 1)
    for (j, _), a in zip(op.basis, vec):
        probs[j] += abs(a) ** 2
    return probs


def one_step_distribution(op: WalkOperator, j: int) -> np.ndarray:
    """Position distribution after one step of U from |phi_j>."""
    return _positions(op, op.U @ op.phi(j))


def discriminant(P) -> np.ndarray:
    """D_jk = sqrt(P_jk P_kj)."""
    P = _check_stochastic(P)
    return np.sqrt(P * P.T)


def lift_spectrum(lam: float) -> tuple[complex, complex]:
    """mu_pm = lam +- i sqrt(1 - lam^2) = e^{+-i arccos lam}."""
    lam = float(lam)
    if abs(lam) > 1.0 + 1e-12:
        raise ValueError(f"|lambda| = {abs(lam)!r} exceeds 1")
    lam = min(1.0, max(-1.0, lam))
    s = np.sqrt(1.0 - lam * lam)
    return complex(lam, s), complex(lam, -s)


def verify_lifting(op_or_P, tol: float = 1e-8) -> dict:
    """Compare the spectrum of U with the lifted spectrum of D.

    Checks that every eigenvalue of D lifts to eigenvalues of U, that the
    eigenphases of U away from +-1 are exactly the lifted ones, and that
    ``T|lam> - mu S T|lam>`` are eigenvectors of U with eigenvalue ``mu``.
    """
    op = op_or_P if isinstance(op_or_P, WalkOperator) else walk_operator(op_or_P)
    U = op.U
    lam, vec = np.linalg.eigh(op.D)
    mu_U = np.linalg.eigvals(U)
    entries = []
    worst_res = 0.0
    worst_match = 0.0
    for i, l in enumerate(lam):
        mp, mm = lift_spectrum(l)
        v = op.T @ vec[:, i]
        sv = op.S @ v
        row = {"lambda": float(l), "mu_plus": mp, "mu_minus": mm}
        for name, m in (("plus", mp), ("minus", mm)):
            match = float(np.min(np.abs(mu_U - m)))
            w = v - m * sv
            nrm = np.linalg.norm(w)
            res = float(np.linalg.norm(U @ w - m * w) / nrm) if nrm > 1e-10 else 0.0
            row[f"match_{name}"] = match
            row[f"residual_{name}"] = res
            worst_match = max(worst_match, match)
            worst_res = max(worst_res, res)
        entries.append(row)
    away = mu_U[np.abs(np.abs(mu_U.real) - 1.0) > tol]
    phases_U = np.sort(away.real)
    inner = lam[np.abs(np.abs(lam) - 1.0) > tol]
    phases_D = np.sort(np.concatenate([inner, inner]))
    if phases_U.shape == phases_D.shape:
        phase_err = float(np.max(np.abs(phases_U - phases_D), initial=0.0))
    else:
        phase_err = float("inf")
    rest = np.abs(np.abs(mu_U.real) - 1.0)
    return {
        "entries": entries,
        "max_match": worst_match,
        "max_residual": worst_res,
        "phase_error": phase_err,
        "n_pm1": int(np.sum(rest <= tol)),
        "passed": worst_match < tol and worst_res < tol and phase_err < tol,
    }


def lifting_report_json(report: dict) -> dict:
    """JSON-friendly version of :func:`verify_lifting` output."""
    def c(z):
        return [fmt_float(z.real), fmt_float(z.imag)]

    out = {k: v for k, v in report.items() if k != "entries"}
    out["entries"] = [
        {**{k: v for k, v in e.items() if not k.startswith("mu")},
         "mu_plus": c(e["mu_plus"]), "mu_minus": c(e["mu_minus"])}
        for e in report["entries"]
    ]
    return out


# ---------------------------------------------------------------------------
# Half-line walks
# ---------------------------------------------------------------------------


def halfline_basis(K: int) -> list:
    if K < 1:
        raise ValueError("cutoff K must be >= 1")
    basis = [(0, 0), (0, 1)]
    for k in range(1, K + 1):
        basis += [(k, k - 1), (k, k), (k, k + 1)]
    basis.append((K + 1, K))
    return basis


def coin_block(p: float, q: float, r: float, origin: bool = False):
    """Local coin flip 2|phi><phi| - I over one vertex.

    Over the origin the coin is 2-dimensional on (|0,0>, |0,1>); elsewhere
    3-dimensional on (|k,k-1>, |k,k>, |k,k+1>).  Returns the block and a
    flag that is True when some amplitude vanishes (degenerate coin).
    """
    amps = np.sqrt([r, p]) if origin else np.sqrt([q, r, p])
    return 2.0 * np.outer(amps, amps) - np.eye(amps.shape[0]), bool(np.any(amps == 0))


def halfline_blocks(walk: WalkSpec, K: int) -> WalkOperator:
    """Szegedy walk of a half-line chain truncated at vertex K.

    R is block diagonal: the 2x2 origin coin, one 3x3 coin per vertex
    1..K, and -1 on the trailing state (K+1, K).  S is 1 ⊕ A ⊕ 1 ⊕ A ⊕ ...
    with A the 2x2 swap.
    """
    basis = halfline_basis(K)
    p, q, r = walk.arrays(K + 1)
    phis = [QuantumState({(0, 0): complex(np.sqrt(r[0])), (0, 1): complex(np.sqrt(p[0]))})]
    for k in range(1, K + 1):
        phis.append(QuantumState({
            (k, k - 1): complex(np.sqrt(q[k])),
            (k, k): complex(np.sqrt(r[k])),
            (k, k + 1): complex(np.sqrt(p[k])),
        }))
    op = _assemble(basis, phis, K + 1, {"kind": "halfline", "K": K})
    op.meta["degenerate"] = [k for k in range(K + 1) if p[k] == 0 or (k and r[k] == 0)]
    return op


def halfline_transition(walk: WalkSpec, K: int) -> np.ndarray:
    """(K+2) x (K+2) transition matrix whose Szegedy walk embeds the truncation."""
    p, q, r = walk.arrays(K + 1)
    P = np.zeros((K + 2, K + 2))
    for k in range(K + 1):
        P[k, k] = r[k]
        P[k, k + 1] = p[k]
        if k:
            P[k, k - 1] = q[k]
    P[K + 1, K] = 1.0
    return P


def cmv_basis_extraction(walk: WalkSpec, K: int, rho_tol: float = 1e-13):
    """Build the CMV basis from e_0 = |phi_0> by alternating S and R.

    ``S e_{2k} = a_{2k} e_{2k} + rho_{2k} e_{2k+1}`` and
    ``R e_{2k+1} = a_{2k+1} e_{2k+1} + rho_{2k+1} e_{2k+2}`` with
    ``rho_j > 0``.  On the truncation at K this is exact for
    alpha_0..alpha_{2K}.

    Returns
    -------
    basis : ndarray, shape (dim, 2K + 1)
        Columns e_0..e_{2K} in the pair-state basis.
    alphas : ndarray, shape (2K + 1,)
    """
    op = halfline_blocks(walk, K)
    S, R = op.S, op.R
    e = [op.T[:, 0].copy()]
    alphas = []
    for j in range(2 * K + 1):
        X = S if j % 2 == 0 else R
        v = X @ e[-1]
        a = float(e[-1] @ v)
        alphas.append(a)
        if j == 2 * K:
            break
        w = v - a * e[-1]
        rho = np.linalg.norm(w)
        if rho < rho_tol:
            raise SpecError(f"rho_{j} = {rho!r} vanishes: orientation of e_{j + 1} undefined")
        e.append(w / rho)
    return np.array(e).T, np.array(alphas)


def complement_basis(walk: WalkSpec, K: int, normalize: bool = False) -> list[QuantumState]:
    """sigma_k for k = 0..K-1, spanning the complement of the phi/psi span.

    ``sigma_k = sqrt(p_k r_{k+1}) |k,k> - sqrt(r_k r_{k+1}) (|k,k+1> + |k+1,k>)
    + sqrt(r_k q_{k+1}) |k+1,k+1>``; produced unnormalised unless
    ``normalize``.  Requires r_k > 0 for every k <= K.
    """
    p, q, r = walk.arrays(K + 1)
    zero = np.nonzero(r <= 0)[0]
    if zero.size:
        raise SpecError(f"r_{int(zero[0])} = 0: the complement vectors degenerate")
    out = []
    for k in range(K):
        st = QuantumState({
            (k, k): complex(np.sqrt(p[k] * r[k + 1])),
            (k, k + 1): complex(-np.sqrt(r[k] * r[k + 1])),
            (k + 1, k): complex(-np.sqrt(r[k] * r[k + 1])),
            (k + 1, k + 1): complex(np.sqrt(r[k] * q[k + 1])),
        })
        out.append(st.normalized() if normalize else st)
    return out


def eigenphase_csv(op: WalkOperator) -> str:
    mu = np.linalg.eigvals(op.U)
    lines = ["re,im,phase"]
    for m in sorted(mu, key=np.angle):
        lines.append(f"{fmt_float(m.real)},{fmt_float(m.imag)},{fmt_float(np.angle(m))}")
    return "\n".join(lines) + "\n"
