"""
Paley-Wiener test functions.

Every band-limited kind is the Fourier-Laplace transform
f(z) = integral f_hat(kappa) e^{i kappa z} d kappa of a distribution supported
in [-B, B]. Besides point evaluation each kind exposes `pair(h)`, the action
of f_hat on a test map h, which drives both Phi_f and the transform-plane
route of the moment engine.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import Callable

import numpy as np
from numpy.polynomial import polynomial as npoly
from scipy import integrate

from quadrature_core import gauss_laguerre, gauss_legendre, trapezoid_interval
from spectral_errors import DomainError, InvalidScale

SINC_SERIES_RADIUS = 1e-2
SINC_LEGENDRE_NODES = 64
BUMP_REL_TOL = 1e-12
BLOCK = 256

KappaMap = Callable[[np.ndarray], np.ndarray]


def evaluate_blockwise(func: Callable[[np.ndarray], np.ndarray], z, block: int = BLOCK) -> np.ndarray:
    """Apply func to a flattened copy of z in blocks, keeping z's shape."""
    arr = np.asarray(z, dtype=np.complex128)
    flat = arr.ravel()
    if flat.size <= block:
        return np.asarray(func(flat), dtype=np.complex128).reshape(arr.shape)
    out = np.empty(flat.size, dtype=np.complex128)
    for start in range(0, flat.size, block):
        out[start:start + block] = func(flat[start:start + block])
    return out.reshape(arr.shape)


def _scalar_or_array(value, z):
    return complex(value) if np.ndim(z) == 0 else value


class PaleyWienerFunction:
    """Base class for entire test functions.

    Subclasses define `kind`, `band_limit`, `__call__`, `phi`, `growth` and,
    when the transform is available, `pair`.
    """

    kind = "abstract"
    paley_wiener = True
    transform_known = False

    @property
    def band_limit(self) -> float:
        raise NotImplementedError

    @property
    def real_on_axis(self) -> bool:
        return True

    @property
    def even_part_real(self) -> bool:
        return self.real_on_axis

    @property
    def transform(self) -> str:
        return ""

    def __call__(self, z):
        raise NotImplementedError

    def pair(self, h: KappaMap) -> np.ndarray:
        """integral f_hat(kappa) h(kappa) d kappa for h mapping (m,) -> (..., m)."""
        raise NotImplementedError(f"{self.kind}: transform pairing not available")

    def phi(self, z):
        raise NotImplementedError

    def growth(self) -> tuple[float, int]:
        raise NotImplementedError

    def describe(self) -> str:
        return self.kind

    def _check_strip(self, z):
        b = self.band_limit
        if b > 0.0 and np.any(np.abs(np.imag(z)) * b >= 1.0):
            raise DomainError(z, f"|Im z| < 1/B = {1.0 / b:.6g} (strip of analyticity of Phi_f)")

    def _phi_by_pairing(self, z):
        self._check_strip(z)

        def block(zb):
            return self.pair(lambda kappa: 1.0 / (1.0 - 1j * zb[:, None] * kappa[None, :]))

        return _scalar_or_array(evaluate_blockwise(block, z), z)


@dataclass(frozen=True)
class ComplexExponential(PaleyWienerFunction):
    """f(z) = e^{izt}; f_hat is a point mass at kappa = t."""

    t: float
    kind = "exp"
    transform_known = True

    @property
    def band_limit(self) -> float:
        return abs(self.t)

    @property
    def real_on_axis(self) -> bool:
        return self.t == 0.0

    @property
    def even_part_real(self) -> bool:
        return True

    @property
    def transform(self) -> str:
        return f"point mass at kappa={self.t:g}"

    def __call__(self, z):
        return np.exp(1j * np.asarray(z) * self.t)

    def pair(self, h):
        return np.asarray(h(np.array([self.t], dtype=np.float64)))[..., 0]

    def phi(self, z):
        self._check_strip(z)
        return 1.0 / (1.0 - 1j * np.asarray(z) * self.t)

    def growth(self):
        return 1.0, 0

    def describe(self):
        return f"exp(t={self.t:g})"


@dataclass(frozen=True)
class Sinc(PaleyWienerFunction):
    """f(z) = sin(Bz)/z; f_hat = 1/2 on [-B, B]."""

    B: float
    kind = "sinc"
    transform_known = True

    def __post_init__(self):
        if not self.B > 0.0:
            raise DomainError(self.B, "sinc band limit B > 0")

    @property
    def band_limit(self) -> float:
        return self.B

    @property
    def transform(self) -> str:
        return f"constant 1/2 on [-{self.B:g}, {self.B:g}]"

    def __call__(self, z):
        z = np.asarray(z, dtype=np.complex128)
        bz = self.B * z
        near = np.abs(bz) < SINC_SERIES_RADIUS
        safe = np.where(near, 1.0, z)
        far = np.sin(self.B * safe) / safe
        # sin(w)/w = sum_m (-1)^m w^{2m} / (2m+1)!
        w2 = bz * bz
        series = np.zeros_like(bz)
        for m in range(5, -1, -1):
            series = series * w2 + (-1.0) ** m / math.factorial(2 * m + 1)
        return np.where(near, self.B * series, far)

    def pair(self, h):
        x, w = gauss_legendre(SINC_LEGENDRE_NODES)
        kappa = self.B * x
        return np.sum(np.asarray(h(kappa)) * (0.5 * self.B * w), axis=-1)

    def phi(self, z):
        return self._phi_by_pairing(z)

    def phi_closed_form(self, z):
        """arctan(Bz)/z, the explicit form of the pairing with 1/(1 - iz kappa)."""
        z = np.asarray(z, dtype=np.complex128)
        safe = np.where(z == 0, 1.0, z)
        return np.where(z == 0, self.B, np.arctan(self.B * safe) / safe)

    def growth(self):
        return max(self.B, 2.0), 0

    def describe(self):
        return f"sinc(B={self.B:g})"


@dataclass(frozen=True)
class BumpTransform(PaleyWienerFunction):
    """Transform of the bump f_hat(kappa) = exp(-kappa^2/(B^2 - kappa^2)) on (-B, B)."""

    B: float
    kind = "bump"
    transform_known = True

    def __post_init__(self):
        if not self.B > 0.0:
            raise DomainError(self.B, "bump band limit B > 0")

    @property
    def band_limit(self) -> float:
        return self.B

    @property
    def transform(self) -> str:
        return f"exp(-k^2/({self.B:g}^2-k^2)) on (-{self.B:g}, {self.B:g})"

    def density(self, kappa: np.ndarray) -> np.ndarray:
        kappa = np.asarray(kappa, dtype=np.float64)
        gap = self.B * self.B - kappa * kappa
        inside = gap > 0.0
        safe = np.where(inside, gap, 1.0)
        return np.where(inside, np.exp(-kappa * kappa / safe), 0.0)

    def pair(self, h):
        return trapezoid_interval(lambda kappa: self.density(kappa) * np.asarray(h(kappa)),
                                  -self.B, self.B, rel_tol=BUMP_REL_TOL)

    @cached_property
    def mass(self) -> float:
        """I0 = f(0), the total integral of the bump."""
        value, _ = integrate.quad(lambda k: float(self.density(k)), -self.B, self.B,
                                  epsabs=0.0, epsrel=1e-14, limit=200)
        return value

    def __call__(self, z):
        def block(zb):
            return self.pair(lambda kappa: np.exp(1j * zb[:, None] * kappa[None, :]))

        return _scalar_or_array(evaluate_blockwise(block, z), z)

    def phi(self, z):
        return self._phi_by_pairing(z)

    def growth(self):
        return self.mass * (1.0 + 1e-9), 0

    def describe(self):
        return f"bump(B={self.B:g})"


@dataclass(frozen=True)
class Monomial(PaleyWienerFunction):
    """f(z) = z^k; f_hat is the k-th derivative of the delta at the origin (up to a constant)."""

    k: int
    kind = "monomial"

    def __post_init__(self):
        if int(self.k) != self.k or self.k < 0:
            raise DomainError(self.k, "monomial order k >= 0")

    @property
    def band_limit(self) -> float:
        return 0.0

    @property
    def transform(self) -> str:
        return f"delta derivative of order {self.k}"

    def __call__(self, z):
        return np.asarray(z, dtype=np.complex128) ** int(self.k)

    def phi(self, z):
        return math.factorial(int(self.k)) * np.asarray(z, dtype=np.complex128) ** int(self.k)

    def growth(self):
        return 1.0, int(self.k)

    def describe(self):
        return f"monomial(k={self.k})"


@dataclass(frozen=True)
class Polynomial(PaleyWienerFunction):
    """f(z) = sum a_k z^k, optionally carried in factorized form leading * prod (z - r_i)."""

    coefficients: tuple
    roots: tuple | None = field(default=None, compare=False)
    leading: complex = field(default=1.0, compare=False)
    kind = "poly"

    def __post_init__(self):
        coeffs = tuple(complex(c) if np.iscomplexobj(c) else float(c) for c in self.coefficients)
        if not coeffs:
            raise DomainError(self.coefficients, "at least one polynomial coefficient")
        object.__setattr__(self, "coefficients", coeffs)

    @classmethod
    def from_roots(cls, roots, leading: float = 1.0) -> "Polynomial":
        roots = tuple(np.asarray(roots).tolist())
        coeffs = leading * npoly.polyfromroots(roots) if roots else np.array([leading])
        coeffs = np.real_if_close(coeffs, tol=1000)
        return cls(tuple(coeffs.tolist()), roots=roots, leading=leading)

    @property
    def degree(self) -> int:
        return len(self.coefficients) - 1

    @property
    def band_limit(self) -> float:
        return 0.0

    @property
    def real_on_axis(self) -> bool:
        return all(np.imag(c) == 0 for c in self.coefficients)

    @property
    def even_part_real(self) -> bool:
        return all(np.imag(c) == 0 for c in self.coefficients[::2])

    @property
    def transform(self) -> str:
        return f"weighted delta derivatives up to order {self.degree}"

    def __call__(self, z):
        z = np.asarray(z, dtype=np.complex128)
        if self.roots is not None:
            out = np.full(z.shape, self.leading, dtype=np.complex128)
            for r in self.roots:
                out = out * (z - r)
            return out
        return npoly.polyval(z, np.asarray(self.coefficients))

    def phi(self, z):
        z = np.asarray(z, dtype=np.complex128)
        damped = np.array([c * math.factorial(k) for k, c in enumerate(self.coefficients)])
        return npoly.polyval(z, damped)

    def growth(self):
        return float(np.sum(np.abs(self.coefficients))), self.degree

    def describe(self):
        if self.roots is not None:
            return f"poly(degree={self.degree}, factorized)"
        return "poly(coeffs=" + ";".join(f"{c:g}" for c in self.coefficients) + ")"


@dataclass(frozen=True)
class GaussianEntire(PaleyWienerFunction):
    """f(z) = e^{-z^2/2}: entire of order two, not band-limited."""

    kind = "gaussian"
    paley_wiener = False

    @property
    def band_limit(self) -> float:
        return math.inf

    def __call__(self, z):
        z = np.asarray(z, dtype=np.complex128)
        return np.exp(-0.5 * z * z)

    def phi(self, z):
        raise DomainError(z, "Phi_f needs a Paley-Wiener function")

    def growth(self):
        return 1.0, 0

    def describe(self):
        return "gaussian"


@dataclass(frozen=True)
class ShiftScale(PaleyWienerFunction):
    """g(z) = base((z - center) / sigma), band limit base.B / sigma."""

    base: PaleyWienerFunction
    center: float
    sigma: float
    kind = "shift_scale"

    def __post_init__(self):
        if not self.sigma > 0.0:
            raise InvalidScale(f"resolution sigma must be positive, got {self.sigma}")

    @property
    def paley_wiener(self) -> bool:
        return self.base.paley_wiener

    @property
    def transform_known(self) -> bool:
        return self.base.transform_known

    @property
    def band_limit(self) -> float:
        return self.base.band_limit / self.sigma

    @property
    def real_on_axis(self) -> bool:
        return self.base.real_on_axis

    @property
    def even_part_real(self) -> bool:
        return self.real_on_axis or (self.center == 0.0 and self.base.even_part_real)

    @property
    def transform(self) -> str:
        return f"sigma*f_hat(sigma*kappa)*exp(-i*kappa*{self.center:g}) for f_hat: {self.base.transform}"

    def __call__(self, z):
        return self.base((np.asarray(z) - self.center) / self.sigma)

    def pair(self, h):
        # g_hat(kappa) = sigma f_hat(sigma kappa) e^{-i kappa omega0}, paired in the base variable
        shift = self.center / self.sigma
        return self.base.pair(
            lambda kappa: np.exp(-1j * kappa * shift) * np.asarray(h(kappa / self.sigma)))

    def phi(self, z):
        if self.base.transform_known:
            return self._phi_by_pairing(z)
        if isinstance(self.base, (Monomial, Polynomial)):
            degree = self.base.degree if isinstance(self.base, Polynomial) else int(self.base.k)
            rule = gauss_laguerre(degree // 2 + 1)
            z = np.asarray(z, dtype=np.complex128)
            s = rule.nodes
            values = self.base((z[..., None] * s - self.center) / self.sigma)
            return np.sum(values * rule.weights, axis=-1)
        raise DomainError(z, "Phi_f needs a Paley-Wiener function")

    def growth(self):
        c, n = self.base.growth()
        stretch = max(1.0 + abs(self.center) / self.sigma, 1.0 / self.sigma)
        return c * stretch ** n, n

    def describe(self):
        return f"{self.base.describe()} at omega0={self.center:g}, sigma={self.sigma:g}"


# ============================================================================
# Module-level operations
# ============================================================================

def pw_eval(f: PaleyWienerFunction, z):
    """Evaluate f at complex z (scalar or array)."""
    value = f(z)
    return complex(value) if np.ndim(z) == 0 else value


def band_limit(f: PaleyWienerFunction) -> float:
    """Radius of the support of f_hat."""
    return f.band_limit


def shift_scale(f: PaleyWienerFunction, omega0: float, sigma: float) -> ShiftScale:
    """g(z) = f((z - omega0)/sigma), with band limit B/sigma."""
    if not sigma > 0.0:
        raise InvalidScale(f"resolution sigma must be positive, got {sigma}")
    return ShiftScale(f, float(omega0), float(sigma))


def phi_eval(f: PaleyWienerFunction, z):
    """Phi_f(z) = integral_0^inf e^{-s} f(zs) ds, valid for |Im z| < 1/B."""
    value = f.phi(z)
    return complex(value) if np.ndim(z) == 0 else value


def growth_constants(f: PaleyWienerFunction) -> tuple[float, int, float]:
    """(C, N, B) with |f(z)| <= C (1+|z|)^N e^{B |Im z|}."""
    c, n = f.growth()
    return c, n, f.band_limit
