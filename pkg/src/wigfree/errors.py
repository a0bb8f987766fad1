"""Exception types shared across the package."""


class WigfreeError(Exception):
    """Base class for errors raised by this package."""


class DegreeCapExceeded(WigfreeError):
    """A polynomial grew past the configured degree cap.

    The cap defaults to 64 and can be overridden with the
    WIGFREE_DEGREE_CAP environment variable.
    """


class InvalidWavefunction(WigfreeError, ValueError):
    """The requested wavefunction is outside the admissible class."""


class FractionalPowerUnsupported(InvalidWavefunction):
    """A non-integer power of q was requested.

    Fractional powers break the smoothness condition the closed-form
    operator construction relies on, so they are rejected up front.
    """


class RealnessViolation(WigfreeError):
    """A phase-space value came out with a non-negligible imaginary part.

    The closed-form construction is real by conjugate-pair cancellation,
    so this signals an engine bug rather than bad input.
    """


class NoConvergence(WigfreeError):
    """Adaptive quadrature hit the order cap without stabilizing."""
