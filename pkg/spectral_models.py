"""
Spectral measures dP(omega) described through their correlation functions.

A SpectralModel carries C(z) at complex times, the half-width tau0 of its
analyticity strip, the analyticity class beyond the strip and, when known,
the spectral density. Built-in fixtures have closed forms for both.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable

import numpy as np

from paley_wiener import PaleyWienerFunction, Sinc
from quadrature_core import adaptive_real_line, bessel_k1
from spectral_errors import DomainError, NoDensity


class AnalyticityClass(str, Enum):
    ENTIRE_PLANE = "EntirePlane"
    PLANE_MINUS_BRANCH_CUTS = "PlaneMinusBranchCuts"
    STRIP_ONLY = "StripOnly"


@dataclass(frozen=True)
class Support:
    """Compact(r) when radius is set, RealLine otherwise."""

    radius: float | None = None

    @property
    def is_compact(self) -> bool:
        return self.radius is not None

    def __str__(self):
        return f"Compact({self.radius:g})" if self.is_compact else "RealLine"


@dataclass(frozen=True)
class SpectralModel:
    name: str
    total_mass: float
    tau0: float
    analyticity_class: AnalyticityClass
    correlation: Callable[[np.ndarray], np.ndarray] = field(compare=False, repr=False)
    density: Callable[[np.ndarray], np.ndarray] | None = field(default=None, compare=False, repr=False)
    support: Support = Support()
    symmetric: bool = True
    parameters: tuple = ()

    def domain_description(self) -> str:
        if self.analyticity_class is AnalyticityClass.ENTIRE_PLANE:
            return "entire complex plane"
        if self.analyticity_class is AnalyticityClass.PLANE_MINUS_BRANCH_CUTS:
            return f"complex plane minus the cuts {{iy : |y| >= {self.tau0:g}}}"
        return f"strip |Im z| < {self.tau0:g}"

    def outside_domain(self, z: np.ndarray) -> np.ndarray:
        """Boolean mask of points where C cannot be evaluated."""
        z = np.asarray(z, dtype=np.complex128)
        if self.analyticity_class is AnalyticityClass.ENTIRE_PLANE:
            return np.zeros(z.shape, dtype=bool)
        beyond = np.abs(z.imag) >= self.tau0
        if self.analyticity_class is AnalyticityClass.PLANE_MINUS_BRANCH_CUTS:
            return beyond & (z.real == 0.0)
        return beyond

    def mgf(self, z):
        """Moment generating function C(-iz)."""
        return correlation_at(self, -1j * np.asarray(z, dtype=np.complex128))

    def describe(self) -> str:
        if not self.parameters:
            return self.name
        return self.name + ":" + ",".join(f"{k}={v:g}" for k, v in self.parameters)


# ============================================================================
# Operations
# ============================================================================

def correlation_at(model: SpectralModel, z):
    """C(z) for z inside the model's analyticity domain.

    Raises:
        DomainError: z lies on a branch cut or outside the strip
    """
    arr = np.asarray(z, dtype=np.complex128)
    bad = model.outside_domain(arr)
    if np.any(bad):
        offending = complex(arr[bad].ravel()[0]) if arr.ndim else complex(arr)
        raise DomainError(offending, model.domain_description())
    value = np.asarray(model.correlation(arr), dtype=np.complex128)
    return complex(value) if arr.ndim == 0 else value


def density_at(model: SpectralModel, omega):
    """Spectral density at real omega."""
    if model.density is None:
        raise NoDensity(f"model {model.name!r} exposes only a correlation function")
    value = np.asarray(model.density(np.asarray(omega, dtype=np.float64)), dtype=np.float64)
    return float(value) if np.ndim(omega) == 0 else value


def oracle_generalized_moment(model: SpectralModel, f: PaleyWienerFunction, tol: float = 1e-10):
    """Brute-force integral f(omega) density(omega) d omega on the real line.

    Returns:
        float when f is real on the real axis, complex otherwise
    """
    if model.density is None:
        raise NoDensity(f"model {model.name!r} exposes only a correlation function")
    points = ()
    if model.support.is_compact:
        points = (-model.support.radius, model.support.radius)

    if f.real_on_axis:
        def integrand(omega):
            return float(np.real(f(omega))) * float(model.density(np.float64(omega)))
    else:
        def integrand(omega):
            return complex(f(omega)) * float(model.density(np.float64(omega)))

    return adaptive_real_line(integrand, tol, points=points)


# ============================================================================
# Fixtures
# ============================================================================

def laplace(rate: float = 1.0, analyticity_class: AnalyticityClass = AnalyticityClass.PLANE_MINUS_BRANCH_CUTS,
            name: str = "laplace", parameters: tuple = ()) -> SpectralModel:
    """Laplace measure (rate/2) e^{-rate |omega|}, C(z) = rate^2/(rate^2 + z^2)."""
    if not rate > 0.0:
        raise DomainError(rate, "rate > 0")
    r2 = rate * rate

    def correlation(z):
        return r2 / (r2 + z * z)

    def density(omega):
        return 0.5 * rate * np.exp(-rate * np.abs(omega))

    return SpectralModel(name=name, total_mass=1.0, tau0=rate, analyticity_class=analyticity_class,
                         correlation=correlation, density=density, parameters=parameters)


def exponential() -> SpectralModel:
    """e^{-|omega|}/2 with C = 1/(1+z^2); poles at +-i, continuation everywhere else."""
    return laplace(1.0, AnalyticityClass.PLANE_MINUS_BRANCH_CUTS, name="exponential")


def strip(tau0: float = 1.0) -> SpectralModel:
    """Laplace measure whose correlation is only trusted inside |Im z| < tau0."""
    return laplace(tau0, AnalyticityClass.STRIP_ONLY, name="strip", parameters=(("tau0", tau0),))


def free_particle(beta: float = 2.0, hbar: float = 1.0) -> SpectralModel:
    """Flux-flux spectral function of a free particle at inverse temperature beta.

    C(z) = (1/(beta h)) a^2 / (z^2 + a^2)^{3/2} with a = beta hbar / 2 and h = 2 pi hbar,
    branch points at +-ia and cuts running outward along the imaginary axis.
    """
    if not (beta > 0.0 and hbar > 0.0):
        raise DomainError((beta, hbar), "beta > 0 and hbar > 0")
    h = 2.0 * math.pi * hbar
    a = 0.5 * beta * hbar
    prefactor = 1.0 / (beta * h)

    def correlation(z):
        # sqrt(a + iz) sqrt(a - iz) squares to z^2 + a^2 with cuts on the imaginary axis beyond +-ia
        root = np.sqrt(a + 1j * z) * np.sqrt(a - 1j * z)
        return prefactor * a * a / root ** 3

    def density(omega):
        x = np.abs(omega) * a
        positive = x > 0.0
        safe = np.where(positive, x, 1.0)
        x_k1 = np.where(positive, safe * bessel_k1(safe), 1.0)
        return prefactor * x_k1 / math.pi

    return SpectralModel(name="free_particle", total_mass=prefactor / a, tau0=a,
                         analyticity_class=AnalyticityClass.PLANE_MINUS_BRANCH_CUTS,
                         correlation=correlation, density=density,
                         parameters=(("beta", beta), ("hbar", hbar)))


def uniform(r: float = 1.0) -> SpectralModel:
    """Uniform density 1/(2r) on [-r, r]; C(z) = sin(rz)/(rz) is entire."""
    if not r > 0.0:
        raise DomainError(r, "r > 0")
    kernel = Sinc(r)

    def correlation(z):
        return kernel(z) / r

    def density(omega):
        return np.where(np.abs(omega) <= r, 0.5 / r, 0.0)

    return SpectralModel(name="uniform", total_mass=1.0, tau0=math.inf,
                         analyticity_class=AnalyticityClass.ENTIRE_PLANE,
                         correlation=correlation, density=density, support=Support(r),
                         parameters=(("r", r),))


def gaussian() -> SpectralModel:
    """Standard normal density; C(z) = e^{-z^2/2}."""

    def correlation(z):
        return np.exp(-0.5 * z * z)

    def density(omega):
        return np.exp(-0.5 * omega * omega) / math.sqrt(2.0 * math.pi)

    return SpectralModel(name="gaussian", total_mass=1.0, tau0=math.inf,
                         analyticity_class=AnalyticityClass.ENTIRE_PLANE,
                         correlation=correlation, density=density)


FIXTURES: dict[str, Callable[..., SpectralModel]] = {
    "exponential": exponential,
    "free_particle": free_particle,
    "uniform": uniform,
    "gaussian": gaussian,
    "strip": strip,
}
