"""Numpy implementations of the hot loops.

Mirrors wigfree._ckernels function for function; the dispatch layer in
wigfree.kernels picks whichever is available.  Both backends implement the
same arithmetic (Horner in the same order), so they agree to rounding.
"""

from __future__ import annotations

import math

import numpy as np

BACKEND_NAME = "python"


def eval_groups(qs, ps, coeffs, s, mu, inv_two_var, two_a, pref):
    """Evaluate a sum of Gaussian-envelope groups at paired points.

    out[n] = pref * exp(-two_a * qs[n]^2)
           * sum_g P_g(qs[n], ps[n]) * exp(s[g] qs[n] - (ps[n]-mu[g])^2 * inv_two_var)

    coeffs has shape (G, nx, ny) with P_g(x, y) = sum_ij coeffs[g,i,j] x^i y^j.
    Returns complex values; realness policy is the caller's business.
    """
    qs = np.asarray(qs, dtype=np.float64)
    ps = np.asarray(ps, dtype=np.float64)
    out = np.zeros(qs.shape, dtype=np.complex128)
    for g in range(coeffs.shape[0]):
        c = coeffs[g]
        acc = np.zeros(qs.shape, dtype=np.complex128)
        for i in range(c.shape[0] - 1, -1, -1):
            row = np.zeros(qs.shape, dtype=np.complex128)
            for j in range(c.shape[1] - 1, -1, -1):
                row = row * ps + c[i, j]
            acc = acc * qs + row
        dp = ps - mu[g]
        out += acc * np.exp(s[g] * qs - dp * dp * inv_two_var)
    return out * (pref * np.exp(-two_a * qs * qs))


def quad_points(qs, ps, t, w, c, m, b, cbar, bbar, a, hbar):
    """Gauss-Hermite estimate of the phase-space integral at paired points.

    The oscillatory factor is removed by completing the square, so the rule
    sees the polynomial-exponential part evaluated at complex-shifted
    nodes:

        y_i = sigma t_i - i p / (a hbar^2),   sigma = sqrt(2/a) / hbar

    out[n] = sigma/(2 pi) * exp(-2 a q^2 - p^2/(2 a hbar^2))
           * sum_i w_i conj(phi)(q - hbar y_i / 2) phi(q + hbar y_i / 2)

    where phi(x) = sum_j c[j] x^m[j] exp(b[j] x) and conj(phi) uses cbar,
    bbar.  Returns complex values.
    """
    qs = np.asarray(qs, dtype=np.float64)
    ps = np.asarray(ps, dtype=np.float64)
    sigma = math.sqrt(2.0 / a) / hbar
    inv_two_var = 1.0 / (2.0 * a * hbar * hbar)
    delta = ps / (a * hbar * hbar)
    # y values per (point, node)
    y = sigma * t[np.newaxis, :] - 1j * delta[:, np.newaxis]
    xm = qs[:, np.newaxis] - 0.5 * hbar * y
    xp = qs[:, np.newaxis] + 0.5 * hbar * y
    fm = np.zeros(xm.shape, dtype=np.complex128)
    fp = np.zeros(xp.shape, dtype=np.complex128)
    # overflow to inf is deliberate: the adaptive driver reads non-finite
    # output as divergence
    with np.errstate(over="ignore", invalid="ignore"):
        for j in range(len(c)):
            fm += cbar[j] * _ipow(xm, m[j]) * np.exp(bbar[j] * xm)
            fp += c[j] * _ipow(xp, m[j]) * np.exp(b[j] * xp)
        acc = (w[np.newaxis, :] * fm * fp).sum(axis=1)
    env = np.exp(-2.0 * a * qs * qs - ps * ps * inv_two_var)
    return acc * env * (sigma / (2.0 * math.pi))


def _ipow(x, n):
    # Repeated multiply, matching the scalar loop in the compiled backend.
    out = np.ones_like(x)
    for _ in range(n):
        out = out * x
    return out
