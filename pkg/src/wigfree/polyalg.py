"""Polynomial algebra over complex coefficients.

Dense univariate and bivariate polynomials, physicists' Hermite and
generalized Laguerre families, conversion between the monomial and Hermite
bases, and half-integer Gamma values.  Everything here is exact symbolic
bookkeeping on coefficient arrays; no sampling or fitting.

A global degree cap (default 64, override with WIGFREE_DEGREE_CAP) bounds
every construction so runaway operator expansions fail loudly instead of
allocating without end.
"""

from __future__ import annotations

import math
import os
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence

import numpy as np

from .errors import DegreeCapExceeded

DEFAULT_DEGREE_CAP = 64
_CAP_ENV = "WIGFREE_DEGREE_CAP"


def degree_cap() -> int:
    """Current polynomial degree cap (env override read on each call)."""
    raw = os.environ.get(_CAP_ENV)
    if raw is None:
        return DEFAULT_DEGREE_CAP
    try:
        cap = int(raw)
    except ValueError:
        raise ValueError(
            f"{_CAP_ENV} must be a positive integer, got {raw!r}"
        ) from None
    if cap < 1:
        raise ValueError(f"{_CAP_ENV} must be a positive integer, got {raw!r}")
    return cap


def _check_degree(deg: int, what: str) -> None:
    cap = degree_cap()
    if deg > cap:
        raise DegreeCapExceeded(f"{what} degree {deg} exceeds cap {cap}")


class ComplexPolynomial:
    """Univariate polynomial; ``coeffs[k]`` multiplies ``x**k``.

    Immutable.  Trailing zero coefficients are trimmed on construction, so
    the zero polynomial compares equal no matter how many zeros it was
    built from.
    """

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable[complex] = ()):
        cs = [complex(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        _check_degree(len(cs) - 1, "polynomial")
        object.__setattr__(self, "coeffs", tuple(cs))

    def __setattr__(self, name, value):
        raise AttributeError("ComplexPolynomial is immutable")

    @classmethod
    def zero(cls) -> "ComplexPolynomial":
        return cls(())

    @classmethod
    def monomial(cls, power: int, coeff: complex = 1.0) -> "ComplexPolynomial":
        if power < 0:
            raise ValueError("power must be non-negative")
        return cls((0,) * power + (coeff,))

    @property
    def degree(self) -> int:
        """Degree, with -1 for the zero polynomial."""
        return len(self.coeffs) - 1

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    def __eq__(self, other) -> bool:
        if not isinstance(other, ComplexPolynomial):
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash(self.coeffs)

    def __add__(self, other: "ComplexPolynomial") -> "ComplexPolynomial":
        if not isinstance(other, ComplexPolynomial):
            return NotImplemented
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for k, c in enumerate(b):
            out[k] += c
        return ComplexPolynomial(out)

    def __neg__(self) -> "ComplexPolynomial":
        return ComplexPolynomial([-c for c in self.coeffs])

    def __sub__(self, other: "ComplexPolynomial") -> "ComplexPolynomial":
        return self + (-other)

    def __mul__(self, other) -> "ComplexPolynomial":
        if isinstance(other, ComplexPolynomial):
            if self.is_zero or other.is_zero:
                return ComplexPolynomial.zero()
            out = [0j] * (len(self.coeffs) + len(other.coeffs) - 1)
            for i, ci in enumerate(self.coeffs):
                if ci == 0:
                    continue
                for j, cj in enumerate(other.coeffs):
                    out[i + j] += ci * cj
            return ComplexPolynomial(out)
        return ComplexPolynomial([complex(other) * c for c in self.coeffs])

    __rmul__ = __mul__

    def conjugate(self) -> "ComplexPolynomial":
        return ComplexPolynomial([c.conjugate() for c in self.coeffs])

    def __call__(self, x: complex) -> complex:
        # Horner; accepts complex arguments.
        acc = 0j
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def __repr__(self) -> str:
        return f"ComplexPolynomial({list(self.coeffs)!r})"


class HermiteCoefficients:
    """Expansion coefficients over physicists' Hermite polynomials.

    ``values[n]`` multiplies H_n.  Trailing zeros trim, mirroring
    ComplexPolynomial.
    """

    __slots__ = ("values",)

    def __init__(self, values: Iterable[complex] = ()):
        vs = [complex(v) for v in values]
        while vs and vs[-1] == 0:
            vs.pop()
        _check_degree(len(vs) - 1, "Hermite expansion")
        object.__setattr__(self, "values", tuple(vs))

    def __setattr__(self, name, value):
        raise AttributeError("HermiteCoefficients is immutable")

    def __eq__(self, other) -> bool:
        if not isinstance(other, HermiteCoefficients):
            return NotImplemented
        return self.values == other.values

    def __hash__(self) -> int:
        return hash(self.values)

    def __len__(self) -> int:
        return len(self.values)

    def __getitem__(self, n: int) -> complex:
        return self.values[n]

    def __repr__(self) -> str:
        return f"HermiteCoefficients({list(self.values)!r})"


@lru_cache(maxsize=None)
def _hermite_int_coeffs(n: int) -> tuple[int, ...]:
    # Exact integer coefficients from the closed-form sum
    #   H_n(x) = sum_r (-1)^r n! / (r! (n-2r)!) (2x)^{n-2r}.
    out = [0] * (n + 1)
    for r in range(n // 2 + 1):
        k = n - 2 * r
        out[k] = (-1) ** r * math.factorial(n) // (
            math.factorial(r) * math.factorial(k)
        ) * 2**k
    return tuple(out)


def hermite(n: int) -> ComplexPolynomial:
    """Physicists' Hermite polynomial H_n in the monomial basis.

    Coefficients are computed in exact integer arithmetic and converted to
    complex at the end, so they are exact wherever they fit in a double.
    """
    if n < 0:
        raise ValueError("Hermite index must be non-negative")
    _check_degree(n, "Hermite polynomial")
    return ComplexPolynomial(_hermite_int_coeffs(n))


def laguerre(n: int, alpha: float = 0.0) -> ComplexPolynomial:
    """Generalized Laguerre polynomial L_n^alpha via the three-term recurrence.

    (k+1) L_{k+1} = (2k+1+alpha-x) L_k - (k+alpha) L_{k-1}
    """
    if n < 0:
        raise ValueError("Laguerre index must be non-negative")
    _check_degree(n, "Laguerre polynomial")
    prev = [1.0 + 0j]
    if n == 0:
        return ComplexPolynomial(prev)
    cur = [1.0 + alpha + 0j, -1.0 + 0j]
    for k in range(1, n):
        nxt = [0j] * (k + 2)
        for j, c in enumerate(cur):
            nxt[j] += (2 * k + 1 + alpha) * c
            nxt[j + 1] -= c  # the -x L_k term
        for j, c in enumerate(prev):
            nxt[j] -= (k + alpha) * c
        nxt = [c / (k + 1) for c in nxt]
        prev, cur = cur, nxt
    return ComplexPolynomial(cur)


def monomial_to_hermite(poly: ComplexPolynomial) -> HermiteCoefficients:
    """Expand a polynomial over H_0, H_1, ... by triangular elimination.

    The leading coefficient of H_d is 2^d, so back-substitution from the
    top degree downward is exact division by a power of two at each step.
    """
    residual = list(poly.coeffs)
    out = [0j] * len(residual)
    for d in range(len(residual) - 1, -1, -1):
        c = residual[d] / 2**d
        out[d] = c
        if c != 0:
            for k, hk in enumerate(_hermite_int_coeffs(d)):
                residual[k] -= c * hk
    return HermiteCoefficients(out)


def hermite_to_monomial(coeffs: HermiteCoefficients) -> ComplexPolynomial:
    """Sum C_n H_n back into the monomial basis."""
    acc = ComplexPolynomial.zero()
    for n, c in enumerate(coeffs.values):
        if c != 0:
            acc = acc + c * hermite(n)
    return acc


def gamma_half_integer(two_z: int) -> float:
    """Gamma(two_z / 2) for positive integer ``two_z``.

    Even ``two_z`` is a plain factorial; odd values come from
    Gamma(m + 1/2) = sqrt(pi) (2m)! / (4^m m!), evaluated as an exact
    rational times sqrt(pi) so accumulated rounding stays at a couple ulp.
    """
    if not isinstance(two_z, (int, np.integer)):
        raise ValueError("two_z must be an integer (twice the argument)")
    if two_z < 1:
        raise ValueError("argument must be positive")
    if two_z % 2 == 0:
        return float(math.factorial(two_z // 2 - 1))
    m = (two_z - 1) // 2
    ratio = Fraction(math.factorial(2 * m), 4**m * math.factorial(m))
    return float(ratio) * math.sqrt(math.pi)


class ComplexPolynomial2D:
    """Bivariate polynomial; ``coeffs[i, j]`` multiplies ``x**i * y**j``.

    Backed by a read-only complex128 array.  The engine uses the axes as
    (q, p) for phase-space data and (q, d/dp) for operator symbols; the
    algebra is the same either way.
    """

    __slots__ = ("coeffs",)

    def __init__(self, coeffs=None):
        if coeffs is None:
            arr = np.zeros((1, 1), dtype=np.complex128)
        else:
            arr = np.atleast_2d(np.asarray(coeffs, dtype=np.complex128)).copy()
        arr = _trim2d(arr)
        _check_degree(arr.shape[0] - 1, "bivariate (first axis)")
        _check_degree(arr.shape[1] - 1, "bivariate (second axis)")
        arr.setflags(write=False)
        object.__setattr__(self, "coeffs", arr)

    def __setattr__(self, name, value):
        raise AttributeError("ComplexPolynomial2D is immutable")

    @classmethod
    def constant(cls, value: complex = 1.0) -> "ComplexPolynomial2D":
        return cls([[value]])

    @classmethod
    def from_x_coeffs(cls, coeffs: Sequence[complex]) -> "ComplexPolynomial2D":
        """Univariate in the first variable, constant in the second."""
        arr = np.asarray(list(coeffs), dtype=np.complex128).reshape(-1, 1)
        return cls(arr)

    @property
    def degrees(self) -> tuple[int, int]:
        if self.is_zero:
            return (-1, -1)
        return (self.coeffs.shape[0] - 1, self.coeffs.shape[1] - 1)

    @property
    def is_zero(self) -> bool:
        return self.coeffs.shape == (1, 1) and self.coeffs[0, 0] == 0

    def __add__(self, other: "ComplexPolynomial2D") -> "ComplexPolynomial2D":
        if not isinstance(other, ComplexPolynomial2D):
            return NotImplemented
        a, b = self.coeffs, other.coeffs
        nx = max(a.shape[0], b.shape[0])
        ny = max(a.shape[1], b.shape[1])
        out = np.zeros((nx, ny), dtype=np.complex128)
        out[: a.shape[0], : a.shape[1]] += a
        out[: b.shape[0], : b.shape[1]] += b
        return ComplexPolynomial2D(out)

    def __sub__(self, other: "ComplexPolynomial2D") -> "ComplexPolynomial2D":
        return self + (-1.0) * other

    def __mul__(self, other) -> "ComplexPolynomial2D":
        if isinstance(other, ComplexPolynomial2D):
            if self.is_zero or other.is_zero:
                return ComplexPolynomial2D()
            a, b = self.coeffs, other.coeffs
            out = np.zeros(
                (a.shape[0] + b.shape[0] - 1, a.shape[1] + b.shape[1] - 1),
                dtype=np.complex128,
            )
            for i in range(a.shape[0]):
                for j in range(a.shape[1]):
                    c = a[i, j]
                    if c != 0:
                        out[i : i + b.shape[0], j : j + b.shape[1]] += c * b
            return ComplexPolynomial2D(out)
        return ComplexPolynomial2D(self.coeffs * complex(other))

    __rmul__ = __mul__

    def conjugate(self) -> "ComplexPolynomial2D":
        return ComplexPolynomial2D(np.conj(self.coeffs))

    def deriv_y(self) -> "ComplexPolynomial2D":
        """Partial derivative in the second variable."""
        a = self.coeffs
        if a.shape[1] == 1:
            return ComplexPolynomial2D()
        out = a[:, 1:] * np.arange(1, a.shape[1])
        return ComplexPolynomial2D(out)

    def mul_y(self) -> "ComplexPolynomial2D":
        """Multiply by the second variable."""
        a = self.coeffs
        out = np.zeros((a.shape[0], a.shape[1] + 1), dtype=np.complex128)
        out[:, 1:] = a
        return ComplexPolynomial2D(out)

    def mul_x_power(self, k: int) -> "ComplexPolynomial2D":
        """Multiply by the first variable raised to ``k``."""
        if k == 0:
            return self
        a = self.coeffs
        out = np.zeros((a.shape[0] + k, a.shape[1]), dtype=np.complex128)
        out[k:, :] = a
        return ComplexPolynomial2D(out)

    def shift_y(self, lam: complex) -> "ComplexPolynomial2D":
        """Substitute y -> y + lam (binomial transform along axis 1)."""
        if lam == 0:
            return self
        a = self.coeffs
        ny = a.shape[1]
        s = np.zeros((ny, ny), dtype=np.complex128)
        for k in range(ny):
            pw = 1.0 + 0j
            for j in range(k, -1, -1):
                s[k, j] = math.comb(k, j) * pw
                pw *= lam
        return ComplexPolynomial2D(a @ s)

    def __call__(self, x: complex, y: complex) -> complex:
        # Horner in y inside Horner in x.
        acc = 0j
        for row in self.coeffs[::-1]:
            r = 0j
            for c in row[::-1]:
                r = r * y + c
            acc = acc * x + r
        return acc

    def allclose(self, other: "ComplexPolynomial2D", rtol: float = 1e-12) -> bool:
        a, b = self.coeffs, other.coeffs
        nx = max(a.shape[0], b.shape[0])
        ny = max(a.shape[1], b.shape[1])
        pa = np.zeros((nx, ny), dtype=np.complex128)
        pb = np.zeros((nx, ny), dtype=np.complex128)
        pa[: a.shape[0], : a.shape[1]] = a
        pb[: b.shape[0], : b.shape[1]] = b
        return bool(np.all(np.abs(pa - pb) <= rtol * (1.0 + np.abs(pa))))

    def __eq__(self, other) -> bool:
        if not isinstance(other, ComplexPolynomial2D):
            return NotImplemented
        return self.coeffs.shape == other.coeffs.shape and bool(
            np.array_equal(self.coeffs, other.coeffs)
        )

    def __hash__(self):
        return hash((self.coeffs.shape, self.coeffs.tobytes()))

    def __repr__(self) -> str:
        return f"ComplexPolynomial2D({self.coeffs.tolist()!r})"


def _trim2d(arr: np.ndarray) -> np.ndarray:
    nz = np.nonzero(arr)
    if len(nz[0]) == 0:
        return np.zeros((1, 1), dtype=np.complex128)
    return np.ascontiguousarray(arr[: nz[0].max() + 1, : nz[1].max() + 1])
