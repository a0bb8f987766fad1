"""Closed-form phase-space construction.

Wavefunctions handled here have the shape

    psi(q) = exp(-a q^2) * phi(q),    phi(q) = sum_j c_j q^{m_j} exp(b_j q)

with a > 0 and non-negative integer powers m_j.  For this class the Wigner
transform can be written without any integral: substituting shifted
arguments into phi turns each appearance of q into a commuting mix of
multiplication by q and differentiation in p, acting on a fixed Gaussian
seed,

    W(q, p) = 1/(hbar sqrt(2 pi a)) exp(-2 a q^2)
              * conj(phi)(q - i hbar/2 d/dp) phi(q + i hbar/2 d/dp)
              * exp(-p^2 / (2 a hbar^2)).

Everything the operators produce stays inside one closed family: finitely
many groups of (polynomial in q and p) * exp(s q) * shifted p-Gaussian.
Applying the operators is therefore exact coefficient bookkeeping, and
evaluation, integrals and marginals of the result are elementary Gaussian
moments.

All operator pieces commute (q-multiplication, d/dp, p-translations), and
the assembled result is real by conjugate-pair cancellation; a residual
imaginary part beyond tolerance indicates an engine defect and raises
RealnessViolation rather than being silently discarded.
"""

from __future__ import annotations

import math
import numbers
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

from . import kernels
from .errors import (
    FractionalPowerUnsupported,
    InvalidWavefunction,
    RealnessViolation,
)
from .polyalg import ComplexPolynomial, ComplexPolynomial2D

# Mixed tolerance for the imaginary residue: |Im| <= tol * (1 + |Re|).
REALNESS_RTOL = 1e-10

# Groups whose (s, mu) agree within this radius are merged.
MERGE_TOL = 1e-14

_SMOOTHNESS_HINT = (
    "the closed-form construction needs polynomial factors q^m with "
    "non-negative integer m (smoothness condition)"
)


@dataclass(frozen=True)
class WavefunctionTerm:
    """One summand c * q^power * exp(rate * q) of the polynomial part."""

    coeff: complex
    power: int
    rate: complex


def _as_power(value) -> int:
    if isinstance(value, numbers.Integral):
        power = int(value)
    elif isinstance(value, numbers.Real) and float(value).is_integer():
        power = int(value)
    else:
        raise FractionalPowerUnsupported(
            f"fractional power {value!r} rejected: {_SMOOTHNESS_HINT}"
        )
    if power < 0:
        raise InvalidWavefunction(
            f"negative power {power} rejected: {_SMOOTHNESS_HINT}"
        )
    return power


class GaussExpPolyWavefunction:
    """psi(q) = exp(-a q^2) sum_j c_j q^{m_j} exp(b_j q), immutable.

    Terms are canonicalized on construction: exact duplicate (power, rate)
    pairs merge, zero-coefficient terms drop.  A wavefunction whose terms
    all cancel keeps a single zero term so the object stays well formed.
    """

    __slots__ = ("a", "hbar", "terms")

    def __init__(self, a: float, terms: Iterable, hbar: float = 1.0):
        a = float(a)
        if not a > 0:
            raise InvalidWavefunction(
                f"Gaussian width parameter a must be positive, got {a}; "
                "without decay the defining integral diverges"
            )
        hbar = float(hbar)
        if not hbar > 0:
            raise InvalidWavefunction(f"hbar must be positive, got {hbar}")
        normalized: list[WavefunctionTerm] = []
        for t in terms:
            if isinstance(t, WavefunctionTerm):
                c, m, b = t.coeff, t.power, t.rate
            else:
                c, m, b = t
            normalized.append(
                WavefunctionTerm(complex(c), _as_power(m), complex(b))
            )
        if not normalized:
            raise InvalidWavefunction("term list must be nonempty")
        merged: dict[tuple[int, complex], complex] = {}
        order: list[tuple[int, complex]] = []
        for t in normalized:
            key = (t.power, t.rate)
            if key not in merged:
                merged[key] = 0j
                order.append(key)
            merged[key] += t.coeff
        kept = [
            WavefunctionTerm(merged[k], k[0], k[1])
            for k in order
            if merged[k] != 0
        ]
        if not kept:
            kept = [WavefunctionTerm(0j, 0, 0j)]
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "hbar", hbar)
        object.__setattr__(self, "terms", tuple(kept))

    def __setattr__(self, name, value):
        raise AttributeError("GaussExpPolyWavefunction is immutable")

    def __eq__(self, other) -> bool:
        if not isinstance(other, GaussExpPolyWavefunction):
            return NotImplemented
        return (
            self.a == other.a
            and self.hbar == other.hbar
            and self.terms == other.terms
        )

    def __hash__(self) -> int:
        return hash((self.a, self.hbar, self.terms))

    def __repr__(self) -> str:
        return (
            f"GaussExpPolyWavefunction(a={self.a!r}, terms={list(self.terms)!r}, "
            f"hbar={self.hbar!r})"
        )

    def phi(self, x: complex) -> complex:
        """Polynomial-exponential part, accepts complex argument."""
        acc = 0j
        for t in self.terms:
            acc += t.coeff * x**t.power * np.exp(t.rate * x)
        return complex(acc)

    def psi(self, x: complex) -> complex:
        return complex(np.exp(-self.a * x * x) * self.phi(x))

    def scaled(self, factor: complex) -> "GaussExpPolyWavefunction":
        return GaussExpPolyWavefunction(
            self.a,
            [(factor * t.coeff, t.power, t.rate) for t in self.terms],
            self.hbar,
        )

    @property
    def is_polynomial(self) -> bool:
        return all(t.rate == 0 for t in self.terms)

    @property
    def polynomial_degree(self) -> int:
        """Total degree of phi when all rates vanish (else ValueError)."""
        if not self.is_polynomial:
            raise ValueError("wavefunction has exponential factors")
        return max(t.power for t in self.terms)

    def polynomial_part(self) -> ComplexPolynomial:
        if not self.is_polynomial:
            raise ValueError("wavefunction has exponential factors")
        deg = self.polynomial_degree
        out = [0j] * (deg + 1)
        for t in self.terms:
            out[t.power] += t.coeff
        return ComplexPolynomial(out)


def wavefunction_from_polynomial(
    a: float, poly: ComplexPolynomial, hbar: float = 1.0
) -> GaussExpPolyWavefunction:
    """Wrap a bare polynomial phi as a wavefunction with zero rates."""
    terms = [(c, k, 0j) for k, c in enumerate(poly.coeffs) if c != 0]
    if not terms:
        terms = [(0j, 0, 0j)]
    return GaussExpPolyWavefunction(a, terms, hbar)


# --------------------------------------------------------------------------
# Operator symbols


@dataclass(frozen=True)
class OperatorTerm:
    """poly(q, d/dp) * exp(rate * q) * exp(shift * d/dp), all commuting."""

    poly: ComplexPolynomial2D
    rate: complex
    shift: complex


class OperatorForm:
    """Finite sum of OperatorTerm, closed under + and *.

    The generators (multiplication by q, d/dp, translations in p,
    multiplication by exp(rate q)) all commute, so composition is a
    commutative product: polynomial parts convolve, rates and shifts add.
    """

    __slots__ = ("terms",)

    def __init__(self, terms: Iterable[OperatorTerm]):
        object.__setattr__(self, "terms", tuple(terms))

    def __setattr__(self, name, value):
        raise AttributeError("OperatorForm is immutable")

    @classmethod
    def identity(cls) -> "OperatorForm":
        return cls([OperatorTerm(ComplexPolynomial2D.constant(1.0), 0j, 0j)])

    @classmethod
    def from_poly(cls, poly: ComplexPolynomial2D) -> "OperatorForm":
        return cls([OperatorTerm(poly, 0j, 0j)])

    def __add__(self, other: "OperatorForm") -> "OperatorForm":
        if not isinstance(other, OperatorForm):
            return NotImplemented
        merged: list[OperatorTerm] = []
        for t in list(self.terms) + list(other.terms):
            for i, u in enumerate(merged):
                if u.rate == t.rate and u.shift == t.shift:
                    merged[i] = OperatorTerm(u.poly + t.poly, u.rate, u.shift)
                    break
            else:
                merged.append(t)
        return OperatorForm(merged)

    def __mul__(self, other) -> "OperatorForm":
        if isinstance(other, OperatorForm):
            out: list[OperatorTerm] = []
            for t in self.terms:
                for u in other.terms:
                    out.append(
                        OperatorTerm(
                            t.poly * u.poly, t.rate + u.rate, t.shift + u.shift
                        )
                    )
            return OperatorForm(out)
        z = complex(other)
        return OperatorForm(
            [OperatorTerm(z * t.poly, t.rate, t.shift) for t in self.terms]
        )

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "OperatorForm":
        if n < 0:
            raise ValueError("operator powers must be non-negative")
        acc = OperatorForm.identity()
        for _ in range(n):
            acc = acc * self
        return acc


def operator_polynomial(
    coeffs: Sequence[complex], base: OperatorForm
) -> OperatorForm:
    """sum_r coeffs[r] * base**r (Horner over the commuting algebra)."""
    acc = OperatorForm([])
    for c in reversed(list(coeffs)):
        acc = acc * base + complex(c) * OperatorForm.identity()
    return acc


def substitute_operator(
    terms: Sequence[WavefunctionTerm],
    sign: int,
    *,
    hbar: float,
    conjugated: bool = False,
) -> OperatorForm:
    """Operator image of phi under q -> q + sign * (i hbar / 2) d/dp.

    Each term (c, m, b) becomes

        c * (q + sign i hbar/2 d/dp)^m * exp(b q) * exp(sign i b hbar/2 d/dp)

    expanded binomially; with ``conjugated`` the coefficients and rates are
    conjugated first (the substitution itself is taken literally, which is
    what conj(phi) at a shifted argument requires).
    """
    if sign not in (-1, 1):
        raise ValueError("sign must be +1 or -1")
    factor = sign * 0.5j * hbar
    out: list[OperatorTerm] = []
    for t in terms:
        c = t.coeff.conjugate() if conjugated else t.coeff
        b = t.rate.conjugate() if conjugated else t.rate
        m = t.power
        arr = np.zeros((m + 1, m + 1), dtype=np.complex128)
        pw = 1.0 + 0j
        for alpha in range(m + 1):
            arr[m - alpha, alpha] = c * math.comb(m, alpha) * pw
            pw *= factor
        out.append(OperatorTerm(ComplexPolynomial2D(arr), b, sign * 0.5j * b * hbar))
    return OperatorForm(out)


# --------------------------------------------------------------------------
# Phase-space states


@dataclass(frozen=True)
class GaussianGroup:
    """poly(q, p) * exp(s q) * exp(-(p - mu)^2 / (2 a hbar^2))."""

    poly: ComplexPolynomial2D
    s: complex
    mu: complex


class PState:
    """Finite sum of GaussianGroup at fixed (a, hbar).

    The p-Gaussian variance parameter a hbar^2 is inherited from the
    wavefunction and never mutated; operators only touch polynomials,
    rates and centers.
    """

    __slots__ = ("a", "hbar", "groups")

    def __init__(self, a: float, hbar: float, groups: Iterable[GaussianGroup]):
        object.__setattr__(self, "a", float(a))
        object.__setattr__(self, "hbar", float(hbar))
        object.__setattr__(self, "groups", tuple(groups))

    def __setattr__(self, name, value):
        raise AttributeError("PState is immutable")

    @classmethod
    def seed(cls, a: float, hbar: float) -> "PState":
        """Unit polynomial times the centered Gaussian exp(-p^2/(2 a hbar^2))."""
        return cls(a, hbar, [GaussianGroup(ComplexPolynomial2D.constant(1.0), 0j, 0j)])

    @property
    def variance(self) -> float:
        return self.a * self.hbar * self.hbar

    def evaluate(self, q: float, p: float) -> complex:
        v = self.variance
        acc = 0j
        for g in self.groups:
            dp = p - g.mu
            acc += g.poly(q, p) * np.exp(g.s * q - dp * dp / (2.0 * v))
        return complex(acc)


def _close(x: complex, y: complex, tol: float = MERGE_TOL) -> bool:
    return abs(x - y) <= tol * (1.0 + abs(y))


def _merge_groups(groups: Iterable[GaussianGroup]) -> tuple[GaussianGroup, ...]:
    merged: list[GaussianGroup] = []
    for g in groups:
        if g.poly.is_zero:
            continue
        for i, u in enumerate(merged):
            if _close(g.s, u.s) and _close(g.mu, u.mu):
                merged[i] = GaussianGroup(u.poly + g.poly, u.s, u.mu)
                break
        else:
            merged.append(g)
    kept = [g for g in merged if not g.poly.is_zero]
    kept.sort(key=lambda g: (g.s.real, g.s.imag, g.mu.real, g.mu.imag))
    return tuple(kept)


def _dp_action(
    f: ComplexPolynomial2D, mu: complex, variance: float
) -> ComplexPolynomial2D:
    # d/dp on poly * Gaussian: chain rule folds back into the polynomial.
    return f.deriv_y() + (-1.0 / variance) * (f.mul_y() + (-mu) * f)


def apply_operator(op: OperatorForm, state: PState) -> PState:
    """Act with an OperatorForm on a PState; exact, stays in the family."""
    v = state.variance
    out: list[GaussianGroup] = []
    for g in state.groups:
        for t in op.terms:
            mu = g.mu - t.shift
            base = g.poly.shift_y(t.shift)
            coeffs = t.poly.coeffs
            acc = ComplexPolynomial2D()
            f = base
            for j in range(coeffs.shape[1]):
                if j > 0:
                    f = _dp_action(f, mu, v)
                col = coeffs[:, j]
                if np.any(col != 0):
                    acc = acc + ComplexPolynomial2D.from_x_coeffs(col) * f
            out.append(GaussianGroup(acc, g.s + t.rate, mu))
    return PState(state.a, state.hbar, _merge_groups(out))


# --------------------------------------------------------------------------
# The assembled Wigner function


class PhaseSpaceForm:
    """Closed-form Wigner function: prefactor, q-Gaussian, group sum.

    W(q, p) = prefactor * exp(-2 a q^2)
              * sum_g P_g(q, p) exp(s_g q) exp(-(p - mu_g)^2 / (2 a hbar^2))

    Values are real; evaluation checks the imaginary residue against
    REALNESS_RTOL and raises RealnessViolation when it is exceeded.
    """

    __slots__ = ("a", "hbar", "groups", "__dict__")

    def __init__(self, a: float, hbar: float, groups: Iterable[GaussianGroup]):
        object.__setattr__(self, "a", float(a))
        object.__setattr__(self, "hbar", float(hbar))
        object.__setattr__(self, "groups", tuple(groups))

    def __setattr__(self, name, value):
        raise AttributeError("PhaseSpaceForm is immutable")

    @property
    def prefactor(self) -> float:
        return 1.0 / (self.hbar * math.sqrt(2.0 * math.pi * self.a))

    @property
    def variance(self) -> float:
        return self.a * self.hbar * self.hbar

    @cached_property
    def _arrays(self):
        groups = self.groups
        if not groups:
            return (
                np.zeros((0, 1, 1), dtype=np.complex128),
                np.zeros(0, dtype=np.complex128),
                np.zeros(0, dtype=np.complex128),
            )
        nx = max(g.poly.coeffs.shape[0] for g in groups)
        ny = max(g.poly.coeffs.shape[1] for g in groups)
        coeffs = np.zeros((len(groups), nx, ny), dtype=np.complex128)
        s = np.zeros(len(groups), dtype=np.complex128)
        mu = np.zeros(len(groups), dtype=np.complex128)
        for i, g in enumerate(groups):
            c = g.poly.coeffs
            coeffs[i, : c.shape[0], : c.shape[1]] = c
            s[i] = g.s
            mu[i] = g.mu
        return coeffs, s, mu

    def evaluate_points_complex(self, qs, ps) -> np.ndarray:
        """Raw complex values at paired points (no realness policy)."""
        qs = np.ascontiguousarray(qs, dtype=np.float64)
        ps = np.ascontiguousarray(ps, dtype=np.float64)
        if qs.shape != ps.shape or qs.ndim != 1:
            raise ValueError("qs and ps must be 1-D arrays of equal length")
        coeffs, s, mu = self._arrays
        return kernels.eval_groups(
            qs,
            ps,
            coeffs,
            s,
            mu,
            1.0 / (2.0 * self.variance),
            2.0 * self.a,
            self.prefactor,
        )

    def evaluate_points(self, qs, ps) -> np.ndarray:
        vals = self.evaluate_points_complex(qs, ps)
        _require_real(vals, qs, ps)
        return vals.real.copy()

    def evaluate(self, q: float, p: float) -> float:
        return float(
            self.evaluate_points(
                np.array([q], dtype=np.float64), np.array([p], dtype=np.float64)
            )[0]
        )

    def evaluate_grid(self, qs, ps) -> np.ndarray:
        """Values on the tensor grid; out[i, j] = W(qs[i], ps[j])."""
        qs = np.asarray(qs, dtype=np.float64)
        ps = np.asarray(ps, dtype=np.float64)
        qq, pp = np.meshgrid(qs, ps, indexing="ij")
        flat = self.evaluate_points(qq.ravel(), pp.ravel())
        return flat.reshape(len(qs), len(ps))


def _require_real(values: np.ndarray, qs, ps) -> None:
    bad = np.abs(values.imag) > REALNESS_RTOL * (1.0 + np.abs(values.real))
    if np.any(bad):
        k = int(np.argmax(np.abs(values.imag) - REALNESS_RTOL * (1.0 + np.abs(values.real))))
        raise RealnessViolation(
            "imaginary residue "
            f"{values.imag.flat[k]:.3e} at (q={np.asarray(qs).flat[k]:g}, "
            f"p={np.asarray(ps).flat[k]:g}) exceeds tolerance; "
            "this indicates an engine defect"
        )


_PROBE = np.linspace(-3.0, 3.0, 5)


def wigner_closed_form(psi: GaussExpPolyWavefunction) -> PhaseSpaceForm:
    """Build the closed-form Wigner function of ``psi``.

    Applies the two substituted copies of phi (order is immaterial, the
    operators commute) to the Gaussian seed, then checks realness on a
    fixed probe grid.
    """
    forward = substitute_operator(psi.terms, +1, hbar=psi.hbar)
    backward = substitute_operator(psi.terms, -1, hbar=psi.hbar, conjugated=True)
    state = apply_operator(backward, apply_operator(forward, PState.seed(psi.a, psi.hbar)))
    w = PhaseSpaceForm(psi.a, psi.hbar, state.groups)
    qq, pp = np.meshgrid(_PROBE, _PROBE, indexing="ij")
    _require_real(w.evaluate_points_complex(qq.ravel(), pp.ravel()), qq.ravel(), pp.ravel())
    return w


# --------------------------------------------------------------------------
# Gaussian moment integrals (exact, complex-parameter safe)


def _double_factorial_odd(r: int) -> int:
    # (r-1)!! for even r >= 0
    out = 1
    for k in range(r - 1, 0, -2):
        out *= k
    return out


def gaussian_moment(n: int, mean: complex, variance: complex) -> complex:
    """E[(mean + sqrt(variance) Z)^n] for standard normal Z.

    Only even central moments survive: sum over even r of
    C(n, r) mean^(n-r) variance^(r/2) (r-1)!!.  Valid for complex mean.
    """
    acc = 0j
    for r in range(0, n + 1, 2):
        acc += (
            math.comb(n, r)
            * mean ** (n - r)
            * variance ** (r // 2)
            * _double_factorial_odd(r)
        )
    return acc


def gauss_linear_integral(n: int, cquad: float, lin: complex) -> complex:
    """integral x^n exp(-cquad x^2 + lin x) dx over the real line.

    Complete the square: equals exp(lin^2/(4 cquad)) sqrt(pi/cquad) times
    the n-th moment of a normal with mean lin/(2 cquad), variance
    1/(2 cquad).  Requires cquad > 0.
    """
    if not cquad > 0:
        raise ValueError("quadratic coefficient must be positive")
    return (
        np.exp(lin * lin / (4.0 * cquad))
        * math.sqrt(math.pi / cquad)
        * gaussian_moment(n, lin / (2.0 * cquad), 1.0 / (2.0 * cquad))
    )


def analytic_integral(w: PhaseSpaceForm) -> float:
    """integral of W over the whole (q, p) plane, term by term."""
    v = w.variance
    total = 0j
    for g in w.groups:
        c = g.poly.coeffs
        pfac = math.sqrt(2.0 * math.pi * v)
        for i in range(c.shape[0]):
            iq = None
            for j in range(c.shape[1]):
                if c[i, j] == 0:
                    continue
                if iq is None:
                    iq = gauss_linear_integral(i, 2.0 * w.a, g.s)
                ip = pfac * gaussian_moment(j, g.mu, v)
                total += c[i, j] * iq * ip
    total *= w.prefactor
    if abs(total.imag) > REALNESS_RTOL * (1.0 + abs(total.real)):
        raise RealnessViolation(
            f"phase-space integral has imaginary residue {total.imag:.3e}"
        )
    return float(total.real)


def marginal_q(w: PhaseSpaceForm, q: float) -> float:
    """integral of W over p at fixed q; equals |psi(q)|^2 for a Wigner form."""
    v = w.variance
    pfac = math.sqrt(2.0 * math.pi * v)
    total = 0j
    for g in w.groups:
        c = g.poly.coeffs
        qpows = np.power(float(q), np.arange(c.shape[0]))
        gauss = np.exp(g.s * q)
        for j in range(c.shape[1]):
            col = c[:, j]
            if np.all(col == 0):
                continue
            qval = complex(np.dot(col, qpows))
            total += qval * gauss * pfac * gaussian_moment(j, g.mu, v)
    total *= w.prefactor * math.exp(-2.0 * w.a * q * q)
    if abs(total.imag) > REALNESS_RTOL * (1.0 + abs(total.real)):
        raise RealnessViolation(
            f"q-marginal has imaginary residue {total.imag:.3e} at q={q:g}"
        )
    return float(total.real)


def norm_squared(psi: GaussExpPolyWavefunction) -> float:
    """<psi|psi> via the same Gaussian moment formulas, no quadrature."""
    total = 0j
    for tj in psi.terms:
        for tk in psi.terms:
            total += (
                tj.coeff.conjugate()
                * tk.coeff
                * gauss_linear_integral(
                    tj.power + tk.power,
                    2.0 * psi.a,
                    tj.rate.conjugate() + tk.rate,
                )
            )
    if abs(total.imag) > REALNESS_RTOL * (1.0 + abs(total.real)):
        raise RealnessViolation(
            f"norm computation has imaginary residue {total.imag:.3e}"
        )
    return float(total.real)


def chi_closed_form(k: int, p: float, a: float, hbar: float = 1.0) -> complex:
    """k-th moment of the damped Fourier kernel, in closed form.

    chi_k(p) = integral y^k exp(-(a hbar^2 / 2) y^2 - i y p) dy
             = sqrt(2 pi / a)/hbar * (i d/dp)^k exp(-p^2 / (2 a hbar^2))

    computed through the same derivative bookkeeping the engine uses for
    its Gaussian groups.  Even k gives real values, odd k purely
    imaginary ones.
    """
    if k < 0:
        raise ValueError("power must be non-negative")
    if not a > 0 or not hbar > 0:
        raise ValueError("a and hbar must be positive")
    v = a * hbar * hbar
    f = ComplexPolynomial2D.constant(1.0)
    for _ in range(k):
        f = _dp_action(f, 0j, v)
    pref = math.sqrt(2.0 * math.pi / a) / hbar
    return (
        (1j**k)
        * pref
        * f(0.0, p)
        * math.exp(-p * p / (2.0 * v))
    )


# --------------------------------------------------------------------------
# Structural comparison helpers


def groups_allclose(
    g1: Sequence[GaussianGroup], g2: Sequence[GaussianGroup], rtol: float = 1e-12
) -> bool:
    if len(g1) != len(g2):
        return False
    for u, w_ in zip(g1, g2):
        if not (_close(u.s, w_.s, rtol) and _close(u.mu, w_.mu, rtol)):
            return False
        if not u.poly.allclose(w_.poly, rtol):
            return False
    return True


def phase_space_allclose(
    w1: PhaseSpaceForm, w2: PhaseSpaceForm, rtol: float = 1e-12
) -> bool:
    """Structural comparison after canonical ordering, per-coefficient."""
    if w1.a != w2.a or w1.hbar != w2.hbar:
        return False
    return groups_allclose(
        _merge_groups(w1.groups), _merge_groups(w2.groups), rtol
    )
