"""Pure numpy implementations of the inner loops.

Each function mirrors the signature of its counterpart in ``_ckernels``.
Loops run over the recurrence depth and are vectorised over evaluation
points, so they are adequate for moderate depths only.
"""
import numpy as np


def schur_cf(alphas, z):
    """Bottom-up Schur continued fraction, tail set to zero."""
    alphas = np.asarray(alphas, dtype=np.complex128)
    z = np.asarray(z, dtype=np.complex128)
    f = np.zeros_like(z)
    for a in alphas[::-1]:
        zf = z * f
        f = (a + zf) / (1.0 + np.conj(a) * zf)
    return f


def jacobi_cf(diag, offsq, z):
    """Bottom-up J-fraction ``1/(z - b0 - c0/(z - b1 - ...))``.

    ``offsq[n]`` couples levels ``n`` and ``n + 1``; the last entry is unused.
    """
    diag = np.asarray(diag, dtype=np.float64)
    offsq = np.asarray(offsq, dtype=np.float64)
    z = np.asarray(z, dtype=np.complex128)
    g = np.zeros_like(z)
    for n in range(diag.shape[0] - 1, -1, -1):
        g = 1.0 / (z - diag[n] - offsq[n] * g)
    return g


def szego_values(alphas, z):
    """Values of phi_n and phi_n^* for n = 0..len(alphas) at each z."""
    alphas = np.asarray(alphas, dtype=np.complex128)
    z = np.asarray(z, dtype=np.complex128)
    n = alphas.shape[0]
    phi = np.empty((n + 1, z.shape[0]), dtype=np.complex128)
    phis = np.empty_like(phi)
    phi[0] = 1.0
    phis[0] = 1.0
    for k in range(n):
        a = alphas[k]
        rho = np.sqrt(1.0 - abs(a) ** 2)
        phi[k + 1] = (z * phi[k] - np.conj(a) * phis[k]) / rho
        phis[k + 1] = (-a * z * phi[k] + phis[k]) / rho
    return phi, phis


def three_term_values(p, q, r, x):
    """Walk polynomials Q_0..Q_N at each x, N = len(p)."""
    p = np.asarray(p, dtype=np.float64)
    q = np.asarray(q, dtype=np.float64)
    r = np.asarray(r, dtype=np.float64)
    x = np.asarray(x, dtype=np.float64)
    n = p.shape[0]
    out = np.empty((n + 1, x.shape[0]), dtype=np.float64)
    out[0] = 1.0
    prev = np.zeros_like(x)
    for k in range(n):
        out[k + 1] = ((x - r[k]) * out[k] - q[k] * prev) / p[k]
        prev = out[k]
    return out
