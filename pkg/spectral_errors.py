"""
Exception types raised by the specmoment library.

Library code raises these; only the command line front end maps them to exit codes.
"""
from __future__ import annotations


class SpecMomentError(Exception):
    """Base class for every error raised by specmoment."""


class DomainError(SpecMomentError, ValueError):
    """An argument lies outside the domain where a quantity is defined.

    Args:
        z: the offending argument (complex time, frequency, or scalar)
        domain: human readable description of the admissible domain
    """

    def __init__(self, z, domain: str, message: str | None = None):
        self.z = z
        self.domain = domain
        text = message or f"argument {z!r} is outside the domain: {domain}"
        super().__init__(text)


class InvalidAnnulus(DomainError):
    """Contour radii do not satisfy 0 < rho1 < 1 < rho2 or the analyticity annulus."""

    def __init__(self, message: str, z=None):
        super().__init__(z, "0 < rho1 < 1 < rho2 and B < rho1*tau < tau < rho2*tau < tau0", message)


class NoDensity(SpecMomentError):
    """The spectral model exposes only a correlation function."""


class ToleranceNotMet(SpecMomentError):
    """Quadrature refinement stalled before reaching the requested tolerance."""

    def __init__(self, achieved: float, requested: float, where: str = "quadrature"):
        self.achieved = achieved
        self.requested = requested
        super().__init__(
            f"{where}: estimated error {achieved:.3e} exceeds requested tolerance {requested:.3e}"
        )


class InvalidScale(SpecMomentError, ValueError):
    """Resolution sigma of a shift/scale transform must be positive."""


class OrderOutOfRange(SpecMomentError, ValueError):
    """Quadrature order outside the supported range."""


class NoValidRoute(SpecMomentError):
    """No route admits the (model, function) pair.

    Args:
        inequality: the failed inequality, e.g. "B=2.5 < 2*tau0=2"
        minimal_sigma: for delta-sequence kernels, the smallest admissible resolution
    """

    def __init__(self, inequality: str, minimal_sigma: float | None = None):
        self.inequality = inequality
        self.minimal_sigma = minimal_sigma
        text = f"no valid route: {inequality}"
        if minimal_sigma is not None:
            text += f"; sigma must exceed {minimal_sigma:.6g}"
        super().__init__(text)


class ConfigError(SpecMomentError, ValueError):
    """Malformed descriptor, config document, or command line."""
