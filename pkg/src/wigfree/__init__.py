"""Closed-form Wigner functions for Gaussian-enveloped wavefunctions.

For psi(q) = exp(-a q^2) * sum_j c_j q^{m_j} exp(b_j q) the phase-space
transform is computed exactly by operator substitution (no numerical
integration), and cross-validated against an independent Gauss-Hermite
quadrature oracle.
"""

from .engine import (
    GaussExpPolyWavefunction,
    PhaseSpaceForm,
    WavefunctionTerm,
    analytic_integral,
    chi_closed_form,
    marginal_q,
    norm_squared,
    phase_space_allclose,
    wigner_closed_form,
)
from .errors import (
    DegreeCapExceeded,
    FractionalPowerUnsupported,
    InvalidWavefunction,
    NoConvergence,
    RealnessViolation,
    WigfreeError,
)
from .oracle import (
    condition_check,
    gauss_hermite_rule,
    wigner_quadrature,
    wigner_quadrature_adaptive,
    wigner_quadrature_grid,
)
from .systems import (
    PacketParams,
    SingularParams,
    gaussian_packet,
    harmonic_oscillator_reference,
    harmonic_oscillator_state,
    hermite_product_identity_check,
    packet_reference,
    singular_oscillator_state,
)

__version__ = "0.1.0"

__all__ = [
    "GaussExpPolyWavefunction",
    "PhaseSpaceForm",
    "WavefunctionTerm",
    "analytic_integral",
    "chi_closed_form",
    "marginal_q",
    "norm_squared",
    "phase_space_allclose",
    "wigner_closed_form",
    "DegreeCapExceeded",
    "FractionalPowerUnsupported",
    "InvalidWavefunction",
    "NoConvergence",
    "RealnessViolation",
    "WigfreeError",
    "condition_check",
    "gauss_hermite_rule",
    "wigner_quadrature",
    "wigner_quadrature_adaptive",
    "wigner_quadrature_grid",
    "PacketParams",
    "SingularParams",
    "gaussian_packet",
    "harmonic_oscillator_reference",
    "harmonic_oscillator_state",
    "hermite_product_identity_check",
    "packet_reference",
    "singular_oscillator_state",
    "__version__",
]
