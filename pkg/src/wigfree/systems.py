"""Worked physical systems and their closed-form reference answers.

Three families: the translated Gaussian packet, harmonic-oscillator
eigenstates, and singular-oscillator eigenstates (integer exponent).
Each comes with the textbook phase-space answer so the engine can be
tested against an independent formula rather than against itself.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .engine import (
    GaussExpPolyWavefunction,
    OperatorForm,
    PhaseSpaceForm,
    PState,
    apply_operator,
    operator_polynomial,
    substitute_operator,
)
from .errors import FractionalPowerUnsupported, InvalidWavefunction
from .polyalg import (
    ComplexPolynomial2D,
    gamma_half_integer,
    hermite,
    laguerre,
)


@dataclass(frozen=True)
class PacketParams:
    """Gaussian packet centered at (q0, p0) with position width dq."""

    q0: float = 0.0
    p0: float = 0.0
    dq: float = 1.0
    hbar: float = 1.0

    def __post_init__(self):
        if not self.dq > 0:
            raise InvalidWavefunction(f"packet width must be positive, got {self.dq}")
        if not self.hbar > 0:
            raise InvalidWavefunction(f"hbar must be positive, got {self.hbar}")

    @property
    def dp(self) -> float:
        """Momentum width; the packet is minimum-uncertainty, dq*dp = hbar/2."""
        return self.hbar / (2.0 * self.dq)


def gaussian_packet(params: PacketParams) -> GaussExpPolyWavefunction:
    """psi(q) = C exp(-(q-q0)^2/(4 dq^2) + i p0 q / hbar) as a single term.

    Expanding the square gives a = 1/(4 dq^2), rate
    b = q0/(2 dq^2) + i p0/hbar, and the constant piece folds into the
    amplitude together with C = (2 pi dq^2)^(-1/4).
    """
    a = 1.0 / (4.0 * params.dq**2)
    amp = (2.0 * math.pi * params.dq**2) ** -0.25 * math.exp(
        -params.q0**2 / (4.0 * params.dq**2)
    )
    b = params.q0 / (2.0 * params.dq**2) + 1j * params.p0 / params.hbar
    return GaussExpPolyWavefunction(a, [(amp, 0, b)], params.hbar)


def packet_reference(params: PacketParams, q: float, p: float) -> float:
    """Product-Gaussian Wigner function of the packet, peak 1/(pi hbar)."""
    return (
        1.0
        / (math.pi * params.hbar)
        * math.exp(-((q - params.q0) ** 2) / (2.0 * params.dq**2))
        * math.exp(-((p - params.p0) ** 2) / (2.0 * params.dp**2))
    )


def harmonic_oscillator_state(
    n: int, hbar: float = 1.0
) -> GaussExpPolyWavefunction:
    """n-th oscillator eigenstate: a = 1/(2 hbar), phi = C_n H_n(q/sqrt(hbar)).

    C_n = (pi hbar)^(-1/4) / sqrt(2^n n!), so the state is unit-normalized.
    """
    if n < 0:
        raise ValueError("oscillator index must be non-negative")
    if not hbar > 0:
        raise InvalidWavefunction(f"hbar must be positive, got {hbar}")
    cn = (math.pi * hbar) ** -0.25 / math.sqrt(2.0**n * math.factorial(n))
    h = hermite(n)
    rt = math.sqrt(hbar)
    terms = [
        (cn * c / rt**k, k, 0j) for k, c in enumerate(h.coeffs) if c != 0
    ]
    return GaussExpPolyWavefunction(1.0 / (2.0 * hbar), terms, hbar)


def harmonic_oscillator_reference(
    n: int, q: float, p: float, hbar: float = 1.0
) -> float:
    """W_n = ((-1)^n / (pi hbar)) exp(-2H/hbar) L_n(4H/hbar), H = (q^2+p^2)/2."""
    two_h = q * q + p * p
    lag = laguerre(n)
    return float(
        (-1.0) ** n
        / (math.pi * hbar)
        * math.exp(-two_h / hbar)
        * lag(2.0 * two_h / hbar).real
    )


def hermite_product_identity_check(
    n: int, sample_points=None, hbar: float = 1.0
) -> float:
    """Operator product of two substituted H_n against its Laguerre form.

    Applies H_n at the backward-substituted argument times H_n at the
    forward one to the seed Gaussian exp(-p^2/hbar) (that is, a = 1/(2
    hbar)) and compares with

        (-1)^n 2^n n! L_n(2 (q^2 + p^2)/hbar) exp(-p^2/hbar).

    Returns the maximum of |left - right| / (1 + |right|) over the sample
    points (default: 9x9 grid on [-2, 2]^2).  Factorial growth keeps this
    meaningful for n up to about 8.
    """
    if n < 0 or n > 8:
        raise ValueError("identity check supports 0 <= n <= 8")
    if sample_points is None:
        axis = np.linspace(-2.0, 2.0, 9)
        sample_points = [(q, p) for q in axis for p in axis]
    a = 1.0 / (2.0 * hbar)
    h = hermite(n)
    rt = math.sqrt(hbar)
    terms = [(c / rt**k, k, 0j) for k, c in enumerate(h.coeffs) if c != 0]
    psi = GaussExpPolyWavefunction(a, terms, hbar)
    forward = substitute_operator(psi.terms, +1, hbar=hbar)
    backward = substitute_operator(psi.terms, -1, hbar=hbar, conjugated=True)
    state = apply_operator(
        backward, apply_operator(forward, PState.seed(a, hbar))
    )
    lag = laguerre(n)
    scale = (-1.0) ** n * 2.0**n * math.factorial(n)
    worst = 0.0
    for q, p in sample_points:
        left = state.evaluate(q, p)
        right = (
            scale
            * lag(2.0 * (q * q + p * p) / hbar).real
            * math.exp(-p * p / hbar)
        )
        worst = max(worst, abs(left - right) / (1.0 + abs(right)))
    return worst


@dataclass(frozen=True)
class SingularParams:
    """Singular-oscillator eigenstate labels.

    The potential carries a repulsive 1/q^2 term whose strength is tied to
    the exponent: g^2 = alpha (alpha - 1) / 2.  Only integer alpha >= 1 is
    representable; the fractional case (including the alpha = 1/2 anyon
    state) falls outside the polynomial class.
    """

    n: int = 0
    alpha: int = 1
    hbar: float = 1.0

    def __post_init__(self):
        if not isinstance(self.n, int) or self.n < 0:
            raise InvalidWavefunction(f"n must be a non-negative integer, got {self.n}")
        raw = self.alpha
        if isinstance(raw, float):
            if not raw.is_integer():
                raise FractionalPowerUnsupported(
                    f"fractional exponent alpha={raw} rejected: the factor "
                    "q^alpha breaks the smoothness condition the closed-form "
                    "construction requires"
                )
            object.__setattr__(self, "alpha", int(raw))
        elif not isinstance(raw, int):
            raise InvalidWavefunction(f"alpha must be an integer, got {raw!r}")
        if self.alpha < 1:
            raise InvalidWavefunction(f"alpha must be >= 1, got {self.alpha}")
        if not self.hbar > 0:
            raise InvalidWavefunction(f"hbar must be positive, got {self.hbar}")

    @property
    def g_squared(self) -> float:
        return self.alpha * (self.alpha - 1) / 2.0

    @property
    def coupling_alpha(self) -> float:
        """Inverse relation alpha = 1/2 + sqrt(1/4 + 2 g^2); sanity hook."""
        return 0.5 + math.sqrt(0.25 + 2.0 * self.g_squared)


def singular_oscillator_state(params: SingularParams) -> GaussExpPolyWavefunction:
    """phi = C_n q^alpha L_n^{alpha - 1/2}(q^2 / hbar), a = 1/(2 hbar).

    C_n^2 = n! / (Gamma(n + alpha + 1/2) hbar^(alpha+1)).  With this
    constant the half-line norm is hbar-independent; over the full line
    the square integral comes out as hbar^(-1/2) times that (see
    norm_discrepancy_factor), so tests treat normalization as a
    self-consistency statement rather than asserting 1.
    """
    n, alpha, hbar = params.n, params.alpha, params.hbar
    cn = math.sqrt(
        math.factorial(n)
        / (gamma_half_integer(2 * (n + alpha) + 1) * hbar ** (alpha + 1))
    )
    lag = laguerre(n, alpha - 0.5)
    terms = [
        (cn * c / hbar**r, alpha + 2 * r, 0j)
        for r, c in enumerate(lag.coeffs)
        if c != 0
    ]
    return GaussExpPolyWavefunction(1.0 / (2.0 * hbar), terms, hbar)


def norm_discrepancy_factor(params: SingularParams) -> float:
    """Full-line <psi|psi> of the singular state divided by 1.

    Documents the normalization-domain ambiguity: with C_n as above the
    full-line square integral equals hbar^(-1/2).
    """
    from .engine import norm_squared

    return norm_squared(singular_oscillator_state(params))


def singular_reference_operator_form(params: SingularParams) -> PhaseSpaceForm:
    """Alternative construction of the singular-state Wigner function.

    Instead of expanding phi into monomials first, build the operator

        C_n^2 (q^2 + hbar^2 D^2/4)^alpha
            L_n^{alpha-1/2}((q - i hbar D/2)^2 / hbar)
            L_n^{alpha-1/2}((q + i hbar D/2)^2 / hbar)

    with D = d/dp, apply it to the seed, and wrap the result.  All factors
    commute, so this must coincide exactly with the generic engine path;
    it is kept as a structural cross-check of the operator algebra.
    """
    n, alpha, hbar = params.n, params.alpha, params.hbar
    a = 1.0 / (2.0 * hbar)
    cn2 = math.factorial(n) / (
        gamma_half_integer(2 * (n + alpha) + 1) * hbar ** (alpha + 1)
    )
    # q^2 + (hbar^2/4) D^2  ==  (q - i hbar D/2)(q + i hbar D/2)
    quad = np.zeros((3, 3), dtype=np.complex128)
    quad[2, 0] = 1.0
    quad[0, 2] = hbar * hbar / 4.0
    radial = OperatorForm.from_poly(ComplexPolynomial2D(quad))
    lag = laguerre(n, alpha - 0.5)
    scaled = [c / hbar**r for r, c in enumerate(lag.coeffs)]
    sides = []
    for sign in (-1, +1):
        arr = np.zeros((2, 2), dtype=np.complex128)
        arr[1, 0] = 1.0
        arr[0, 1] = sign * 0.5j * hbar
        shifted_q = OperatorForm.from_poly(ComplexPolynomial2D(arr))
        sides.append(operator_polynomial(scaled, shifted_q**2))
    full = cn2 * (radial**alpha) * sides[0] * sides[1]
    state = apply_operator(full, PState.seed(a, hbar))
    return PhaseSpaceForm(a, hbar, state.groups)
