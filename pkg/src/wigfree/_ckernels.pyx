# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled twins of the numpy kernels in wigfree._pykernels.

Scalar loops over points.  eval_groups keeps the exact Horner ordering of
the fallback; quad_points factors the node-dependent exponentials into a
precomputed table, so the two backends agree to rounding rather than
bit for bit.
"""

import numpy as np

from libc.math cimport exp, sqrt, M_PI

cdef extern from "complex.h":
    double complex cexp(double complex) nogil

BACKEND_NAME = "compiled"


cdef inline double complex _ipow(double complex x, long n) nogil:
    cdef double complex out = 1.0
    cdef long k
    for k in range(n):
        out = out * x
    return out


def eval_groups(const double[::1] qs, const double[::1] ps,
                const double complex[:, :, ::1] coeffs,
                const double complex[::1] s, const double complex[::1] mu,
                double inv_two_var, double two_a, double pref):
    cdef Py_ssize_t npts = qs.shape[0]
    cdef Py_ssize_t ngroups = coeffs.shape[0]
    cdef Py_ssize_t nx = coeffs.shape[1]
    cdef Py_ssize_t ny = coeffs.shape[2]
    out_arr = np.empty(npts, dtype=np.complex128)
    cdef double complex[::1] out = out_arr
    cdef Py_ssize_t n, g, i, j
    cdef double q, p
    cdef double complex acc, row, total, dp
    with nogil:
        for n in range(npts):
            q = qs[n]
            p = ps[n]
            total = 0.0
            for g in range(ngroups):
                acc = 0.0
                for i in range(nx - 1, -1, -1):
                    row = 0.0
                    for j in range(ny - 1, -1, -1):
                        row = row * p + coeffs[g, i, j]
                    acc = acc * q + row
                dp = p - mu[g]
                total = total + acc * cexp(s[g] * q - dp * dp * inv_two_var)
            out[n] = total * (pref * exp(-two_a * q * q))
    return out_arr


def quad_points(const double[::1] qs, const double[::1] ps,
                const double[::1] t, const double[::1] w,
                const double complex[::1] c, const long[::1] m, const double complex[::1] b,
                const double complex[::1] cbar, const double complex[::1] bbar,
                double a, double hbar):
    cdef Py_ssize_t npts = qs.shape[0]
    cdef Py_ssize_t nnodes = t.shape[0]
    cdef Py_ssize_t nterms = c.shape[0]
    out_arr = np.empty(npts, dtype=np.complex128)
    cdef double complex[::1] out = out_arr
    cdef double sigma = sqrt(2.0 / a) / hbar
    cdef double inv_two_var = 1.0 / (2.0 * a * hbar * hbar)
    cdef double half = 0.5 * hbar * sigma
    # the evaluation points are x(+/-) = (q -/+ i hbar delta / 2) +/- half t_i,
    # so exp(b x) factors into a per-point part and this node table; that
    # cuts the cexp count from npts*nnodes*nterms down to npts*nterms.
    # overflow to inf is deliberate: the adaptive driver reads non-finite
    # output as divergence
    with np.errstate(over="ignore", invalid="ignore"):
        tp_arr = np.exp(np.multiply.outer(np.asarray(b), half * np.asarray(t)))
        tm_arr = np.exp(np.multiply.outer(-np.asarray(bbar), half * np.asarray(t)))
    cdef double complex[:, ::1] tp = np.ascontiguousarray(tp_arr)
    cdef double complex[:, ::1] tm = np.ascontiguousarray(tm_arr)
    e0_arr = np.empty(2 * nterms, dtype=np.complex128)
    cdef double complex[::1] e0 = e0_arr
    cdef long max_m = 0
    cdef Py_ssize_t n, i, j
    for j in range(nterms):
        if m[j] > max_m:
            max_m = m[j]
    pow_arr = np.empty((2, max_m + 1), dtype=np.complex128)
    cdef double complex[:, ::1] xpow = pow_arr
    cdef double q, p, delta
    cdef double complex zm, zp, xm, xp, fm, fp, acc
    with nogil:
        for n in range(npts):
            q = qs[n]
            p = ps[n]
            delta = p / (a * hbar * hbar)
            zp = q - 1j * (0.5 * hbar * delta)
            zm = q + 1j * (0.5 * hbar * delta)
            for j in range(nterms):
                e0[j] = c[j] * cexp(b[j] * zp)
                e0[nterms + j] = cbar[j] * cexp(bbar[j] * zm)
            acc = 0.0
            for i in range(nnodes):
                xp = zp + half * t[i]
                xm = zm - half * t[i]
                xpow[0, 0] = 1.0
                xpow[1, 0] = 1.0
                for j in range(1, max_m + 1):
                    xpow[0, j] = xpow[0, j - 1] * xp
                    xpow[1, j] = xpow[1, j - 1] * xm
                fm = 0.0
                fp = 0.0
                for j in range(nterms):
                    fp = fp + e0[j] * tp[j, i] * xpow[0, m[j]]
                    fm = fm + e0[nterms + j] * tm[j, i] * xpow[1, m[j]]
                acc = acc + w[i] * fm * fp
            out[n] = acc * exp(-2.0 * a * q * q - p * p * inv_two_var) \
                * (sigma / (2.0 * M_PI))
    return out_arr
