"""Numerical cross-check of the closed-form engine.

Everything here goes back to the defining integral

    W(q, p) = 1/(2 pi) integral conj(psi)(q - hbar y/2) psi(q + hbar y/2)
              exp(-i y p) dy

evaluated with Gauss-Hermite quadrature.  Deliberately independent of the
closed-form machinery: the only shared code is the wavefunction type
itself.  In particular the nodes and weights are built here from the
Jacobi matrix (Golub-Welsch), not taken from numpy's Hermite module, so a
defect in either side cannot hide in the other.

The Gaussian envelopes of psi contribute exp(-(a hbar^2/2) y^2) after the
fixed exp(-2 a q^2) is pulled out, which is exactly a Hermite weight after
rescaling.  The oscillatory exp(-i y p) is folded in by completing the
square, which shifts the polynomial-exponential part of the integrand to
complex arguments and leaves a real damping factor outside.  With that
arrangement a degree-d polynomial part is integrated exactly once the
rule has more than (d + (number of exponential factors)) support, which
is what makes low orders usable at every (q, p), not just near p = 0.
"""

from __future__ import annotations

import math
from functools import lru_cache

import numpy as np

from . import kernels
from .engine import (
    REALNESS_RTOL,
    GaussExpPolyWavefunction,
)
from .errors import NoConvergence, RealnessViolation

_MIN_ORDER = 8
_ADAPTIVE_START = 16
_ADAPTIVE_CAP = 1024


@lru_cache(maxsize=64)
def gauss_hermite_rule(order: int) -> tuple[np.ndarray, np.ndarray]:
    """Nodes and weights for the weight exp(-t^2) on the real line.

    Golub-Welsch: eigenvalues of the symmetric tridiagonal Jacobi matrix
    with off-diagonal sqrt(k/2) are the nodes; weights are sqrt(pi) times
    the squared first eigenvector components.  Results are symmetrized so
    node/weight pairs mirror exactly, and returned read-only (they are
    cached and shared).
    """
    if order < 1:
        raise ValueError("order must be a positive integer")
    if order == 1:
        nodes = np.zeros(1)
        weights = np.full(1, math.sqrt(math.pi))
    else:
        off = np.sqrt(np.arange(1, order) / 2.0)
        try:
            from scipy.linalg import eigh_tridiagonal

            nodes, vecs = eigh_tridiagonal(np.zeros(order), off)
        except ImportError:  # pragma: no cover - scipy is a hard dep
            jac = np.diag(off, 1) + np.diag(off, -1)
            nodes, vecs = np.linalg.eigh(jac)
        weights = math.sqrt(math.pi) * vecs[0] ** 2
        # enforce the exact +/- symmetry the analytic rule has
        nodes = 0.5 * (nodes - nodes[::-1])
        weights = 0.5 * (weights + weights[::-1])
        if order % 2 == 1:
            nodes[order // 2] = 0.0
    nodes.setflags(write=False)
    weights.setflags(write=False)
    return nodes, weights


def _term_arrays(psi: GaussExpPolyWavefunction):
    c = np.array([t.coeff for t in psi.terms], dtype=np.complex128)
    m = np.array([t.power for t in psi.terms], dtype=np.int64)
    b = np.array([t.rate for t in psi.terms], dtype=np.complex128)
    return c, m, b


def _quad_complex(psi, qs, ps, order: int) -> np.ndarray:
    t, w = gauss_hermite_rule(order)
    c, m, b = _term_arrays(psi)
    return kernels.quad_points(
        np.ascontiguousarray(qs, dtype=np.float64),
        np.ascontiguousarray(ps, dtype=np.float64),
        t,
        w,
        c,
        m,
        b,
        np.conj(c),
        np.conj(b),
        psi.a,
        psi.hbar,
    )


def _require_real_scalar(value: complex, where: str) -> float:
    if abs(value.imag) > REALNESS_RTOL * (1.0 + abs(value.real)):
        raise RealnessViolation(
            f"quadrature value at {where} has imaginary residue "
            f"{value.imag:.3e}"
        )
    return float(value.real)


def wigner_quadrature(
    psi: GaussExpPolyWavefunction, q: float, p: float, order: int = 64
) -> float:
    """Gauss-Hermite estimate of W(q, p) at a fixed order (>= 8)."""
    if order < _MIN_ORDER:
        raise ValueError(f"order must be >= {_MIN_ORDER}")
    val = complex(
        _quad_complex(psi, np.array([q]), np.array([p]), order)[0]
    )
    return _require_real_scalar(val, f"(q={q:g}, p={p:g})")


def wigner_quadrature_grid(
    psi: GaussExpPolyWavefunction, qs, ps, order: int = 64
) -> np.ndarray:
    """Quadrature values on a tensor grid; out[i, j] = W(qs[i], ps[j])."""
    if order < _MIN_ORDER:
        raise ValueError(f"order must be >= {_MIN_ORDER}")
    qs = np.asarray(qs, dtype=np.float64)
    ps = np.asarray(ps, dtype=np.float64)
    qq, pp = np.meshgrid(qs, ps, indexing="ij")
    vals = _quad_complex(psi, qq.ravel(), pp.ravel(), order)
    bad = np.abs(vals.imag) > REALNESS_RTOL * (1.0 + np.abs(vals.real))
    if np.any(bad):
        k = int(np.argmax(np.abs(vals.imag)))
        raise RealnessViolation(
            f"quadrature grid value at (q={qq.ravel()[k]:g}, "
            f"p={pp.ravel()[k]:g}) has imaginary residue {vals.imag[k]:.3e}"
        )
    return vals.real.reshape(len(qs), len(ps)).copy()


def wigner_quadrature_adaptive(
    psi: GaussExpPolyWavefunction, q: float, p: float, tol: float = 1e-10
) -> tuple[float, int]:
    """Double the order from 16 until successive values differ by < tol.

    Returns (value, order) for the last evaluation.  The comparison is on
    the absolute difference; raises NoConvergence past order 1024.
    """
    if tol < 1e-13:
        raise ValueError("tol below 1e-13 is not resolvable in doubles")
    qa, pa = np.array([q]), np.array([p])
    order = _ADAPTIVE_START
    prev = complex(_quad_complex(psi, qa, pa, order)[0])
    while order < _ADAPTIVE_CAP:
        order *= 2
        cur = complex(_quad_complex(psi, qa, pa, order)[0])
        if _absdiff(cur, prev) < tol:
            return (
                _require_real_scalar(cur, f"(q={q:g}, p={p:g})"),
                order,
            )
        prev = cur
    raise NoConvergence(
        f"quadrature did not stabilize to {tol:g} by order {_ADAPTIVE_CAP} "
        f"at (q={q:g}, p={p:g})"
    )


def _absdiff(x: complex, y: complex) -> float:
    # Overflowed or NaN values can never certify convergence.
    try:
        d = abs(x - y)
    except OverflowError:
        return math.inf
    return math.inf if math.isnan(d) else d


def chi_quadrature(
    k: int, p: float, a: float, hbar: float = 1.0, order: int = 128
) -> complex:
    """Gauss-Hermite value of integral y^k exp(-(a hbar^2/2) y^2 - i y p) dy.

    Same square-completion arrangement as the full transform; the cross
    check partner of engine.chi_closed_form.
    """
    if k < 0:
        raise ValueError("power must be non-negative")
    if not a > 0 or not hbar > 0:
        raise ValueError("a and hbar must be positive")
    c = 0.5 * a * hbar * hbar
    t, w = gauss_hermite_rule(order)
    sigma = 1.0 / math.sqrt(c)
    ys = sigma * t - 1j * p / (2.0 * c)
    vals = w * ys**k
    # fold mirror nodes first so parity zeros cancel exactly, not merely
    # to rounding
    half = order // 2
    acc = np.sum(vals[:half] + vals[::-1][:half])
    if order % 2 == 1:
        acc += vals[half]
    return complex(math.exp(-p * p / (4.0 * c)) * sigma * acc)


def condition_check(
    psi: GaussExpPolyWavefunction, half_width: float = 8.0
) -> tuple[bool, float]:
    """Probe integrability of exp(-q^2) |phi(q)|^2 by interval doubling.

    Integrates over [-half_width, half_width] and over the doubled
    interval with Gauss-Legendre; reports (stable, estimate) where stable
    means the relative change between the two is below 1e-6.  For every
    admissible wavefunction with adequately chosen half_width this returns
    True; a False signals mass escaping past the window.
    """
    if not half_width > 0:
        raise ValueError("half_width must be positive")

    def _point(t: float) -> float:
        # growth fast enough to overflow the window is exactly the
        # instability this probe exists to flag
        try:
            return abs(psi.phi(t)) ** 2
        except OverflowError:
            return math.inf

    def _integrate(b: float) -> float:
        x, gw = np.polynomial.legendre.leggauss(240)
        xs = b * x
        vals = np.array([_point(t) for t in xs])
        return float(b * np.sum(gw * np.exp(-xs * xs) * vals))

    i1 = _integrate(half_width)
    i2 = _integrate(2.0 * half_width)
    denom = max(abs(i2), np.finfo(float).tiny)
    return (abs(i2 - i1) / denom < 1e-6, i2)
