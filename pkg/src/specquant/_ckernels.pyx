# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled inner loops; see ``_pykernels`` for the reference versions."""
import numpy as np

from libc.math cimport sqrt


cdef inline double complex _div(double complex w, double complex d) noexcept nogil:
    # plain w * conj(d) / |d|^2; operands stay O(1) so no rescaling is needed
    cdef double s = 1.0 / (d.real * d.real + d.imag * d.imag)
    return w * d.conjugate() * s


def schur_cf(const double complex[::1] alphas, const double complex[::1] z):
    # points innermost: independent chains pipeline instead of serialising
    cdef Py_ssize_t depth = alphas.shape[0]
    cdef Py_ssize_t m = z.shape[0]
    cdef Py_ssize_t i, n
    cdef double complex zf, a, ac
    out = np.zeros(m, dtype=np.complex128)
    cdef double complex[::1] f = out
    with nogil:
        for n in range(depth - 1, -1, -1):
            a = alphas[n]
            ac = a.conjugate()
            for i in range(m):
                zf = z[i] * f[i]
                f[i] = _div(a + zf, 1.0 + ac * zf)
    return out


def jacobi_cf(const double[::1] diag, const double[::1] offsq,
              const double complex[::1] z):
    cdef Py_ssize_t depth = diag.shape[0]
    cdef Py_ssize_t m = z.shape[0]
    cdef Py_ssize_t i, n
    cdef double d, o, s
    cdef double complex w
    if offsq.shape[0] < depth:
        raise ValueError("offsq must be at least as long as diag")
    out = np.zeros(m, dtype=np.complex128)
    cdef double complex[::1] g = out
    with nogil:
        for n in range(depth - 1, -1, -1):
            d = diag[n]
            o = offsq[n]
            for i in range(m):
                w = z[i] - d - o * g[i]
                s = 1.0 / (w.real * w.real + w.imag * w.imag)
                g[i] = w.conjugate() * s
    return out


def szego_values(const double complex[::1] alphas, const double complex[::1] z):
    cdef Py_ssize_t n = alphas.shape[0]
    cdef Py_ssize_t m = z.shape[0]
    cdef Py_ssize_t i, k
    cdef double complex a, ac, p, ps
    cdef double irho
    phi = np.empty((n + 1, m), dtype=np.complex128)
    phis = np.empty((n + 1, m), dtype=np.complex128)
    cdef double complex[:, ::1] P = phi
    cdef double complex[:, ::1] PS = phis
    with nogil:
        for i in range(m):
            P[0, i] = 1
            PS[0, i] = 1
        for k in range(n):
            a = alphas[k]
            ac = a.conjugate()
            irho = 1.0 / sqrt(1.0 - (a.real * a.real + a.imag * a.imag))
            for i in range(m):
                p = z[i] * P[k, i]
                ps = PS[k, i]
                P[k + 1, i] = (p - ac * ps) * irho
                PS[k + 1, i] = (ps - a * p) * irho
    return phi, phis


def three_term_values(const double[::1] p, const double[::1] q,
                      const double[::1] r, const double[::1] x):
    cdef Py_ssize_t n = p.shape[0]
    cdef Py_ssize_t m = x.shape[0]
    cdef Py_ssize_t i, k
    cdef double rk, qk, ip
    out = np.empty((n + 1, m), dtype=np.float64)
    cdef double[:, ::1] Q = out
    with nogil:
        for i in range(m):
            Q[0, i] = 1.0
        for k in range(n):
            rk = r[k]
            qk = q[k]
            ip = 1.0 / p[k]
            for i in range(m):
                if k == 0:
                    Q[1, i] = (x[i] - rk) * ip
                else:
                    Q[k + 1, i] = ((x[i] - rk) * Q[k, i] - qk * Q[k - 1, i]) * ip
    return out
