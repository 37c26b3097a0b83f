"""
Quadrature kernels used by the moment engine and the oracles.

Trapezoidal sums on circles, Gauss-Laguerre and Gauss-Legendre rules,
adaptive real-line integration with tail truncation, and the modified
Bessel function K1. Reductions run through numba kernels with a fixed
ascending summation order so repeated runs are bit-identical.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Sequence

import numpy as np
from numba import njit
from scipy import integrate, linalg, special

from spectral_errors import DomainError, InvalidAnnulus, OrderOutOfRange, ToleranceNotMet

MAX_LAGUERRE_ORDER = 128


@dataclass(frozen=True)
class ContourConfig:
    """Circle |z| = tau sampled at n_nodes points, with the annulus radii
    rho1*tau and rho2*tau used for the a-priori trapezoid bound."""

    tau: float
    n_nodes: int
    rho1: float = 0.5
    rho2: float = 2.0

    def __post_init__(self):
        if not (self.tau > 0.0 and math.isfinite(self.tau)):
            raise InvalidAnnulus(f"contour radius tau must be positive and finite, got {self.tau}")
        if int(self.n_nodes) < 1:
            raise InvalidAnnulus(f"n_nodes must be >= 1, got {self.n_nodes}")
        if not 0.0 < self.rho1 < 1.0:
            raise InvalidAnnulus(f"rho1 must lie in (0, 1), got {self.rho1}")
        if not self.rho2 > 1.0:
            raise InvalidAnnulus(f"rho2 must exceed 1, got {self.rho2}")

    def with_nodes(self, n_nodes: int) -> "ContourConfig":
        return ContourConfig(self.tau, int(n_nodes), self.rho1, self.rho2)

    def with_tau(self, tau: float) -> "ContourConfig":
        return ContourConfig(float(tau), self.n_nodes, self.rho1, self.rho2)


@dataclass(frozen=True)
class LaguerreRule:
    """Gauss-Laguerre rule for the weight e^{-s} on [0, inf)."""

    order: int
    nodes: np.ndarray
    weights: np.ndarray

    def integrate(self, values: np.ndarray) -> complex:
        """Sum weights * values in ascending node order."""
        return weighted_sum_nb(self.weights, np.asarray(values, dtype=np.complex128))


# ============================================================================
# Numba reductions
# ============================================================================

@njit(cache=True, fastmath=False)
def circle_mean_nb(values: np.ndarray) -> complex:
    """(1/n) * sum(values), accumulated in ascending index order."""
    n = values.shape[0]
    acc = 0.0 + 0.0j
    for k in range(n):
        acc += values[k]
    return acc / n


@njit(cache=True, fastmath=False)
def weighted_sum_nb(weights: np.ndarray, values: np.ndarray) -> complex:
    """sum(weights * values), accumulated in ascending index order."""
    acc = 0.0 + 0.0j
    for j in range(weights.shape[0]):
        acc += weights[j] * values[j]
    return acc


# ============================================================================
# Circle rules
# ============================================================================

def circle_nodes(tau: float, n: int, center: complex = 0.0) -> tuple[np.ndarray, np.ndarray]:
    """Equispaced points on |z - center| = tau, first node at angle 0.

    Returns:
        (z, offset) with z = center + offset and offset = tau * e^{i 2 pi k / n}
    """
    k = np.arange(int(n), dtype=np.float64)
    offset = tau * np.exp(2j * np.pi * k / n)
    return center + offset, offset


def trapezoid_circle(g: Callable[[np.ndarray], np.ndarray], tau: float, n: int,
                     center: complex = 0.0) -> complex:
    """Trapezoidal approximation of (1/2 pi i) * contour integral of g on |z - center| = tau.

    Args:
        g: vectorized map evaluated at all n nodes at once
        tau: circle radius
        n: node count
        center: circle centre (0 for the origin circle)

    Returns:
        (1/n) * sum_k g(z_k) * (z_k - center)
    """
    if n < 1:
        raise OrderOutOfRange(f"trapezoid node count must be >= 1, got {n}")
    z, offset = circle_nodes(tau, n, center)
    values = np.asarray(g(z), dtype=np.complex128) * offset
    return complex(circle_mean_nb(values))


def max_abs_on_circle(g: Callable[[np.ndarray], np.ndarray], radius: float, n_samples: int) -> float:
    """Sampled maximum of |g| on |z| = radius (half-step offset from the quadrature grid)."""
    k = np.arange(int(n_samples), dtype=np.float64) + 0.5
    z = radius * np.exp(2j * np.pi * k / n_samples)
    return float(np.max(np.abs(g(z))))


# ============================================================================
# Gaussian rules
# ============================================================================

@lru_cache(maxsize=None)
def gauss_laguerre(n: int) -> LaguerreRule:
    """Gauss-Laguerre rule of order n from the Jacobi matrix eigenproblem.

    Args:
        n: order, 1 <= n <= 128

    Returns:
        LaguerreRule with ascending nodes and positive weights summing to 1
    """
    n = int(n)
    if not 1 <= n <= MAX_LAGUERRE_ORDER:
        raise OrderOutOfRange(f"Laguerre order must be in [1, {MAX_LAGUERRE_ORDER}], got {n}")
    k = np.arange(n, dtype=np.float64)
    diagonal = 2.0 * k + 1.0
    off_diagonal = k[1:]
    nodes, vectors = linalg.eigh_tridiagonal(diagonal, off_diagonal)
    weights = vectors[0, :] ** 2
    return LaguerreRule(order=n, nodes=nodes, weights=weights)


@lru_cache(maxsize=None)
def gauss_legendre(n: int) -> tuple[np.ndarray, np.ndarray]:
    """Gauss-Legendre nodes and weights on [-1, 1]."""
    nodes, weights = np.polynomial.legendre.leggauss(int(n))
    return nodes, weights


def trapezoid_interval(h: Callable[[np.ndarray], np.ndarray], a: float, b: float,
                       rel_tol: float = 1e-12, n_start: int = 32, n_max: int = 2 ** 14) -> np.ndarray:
    """Trapezoidal rule on [a, b] with node doubling.

    h maps a 1-D array of abscissae of shape (m,) to values of shape (..., m);
    the rule is applied along the last axis. Doubling stops once every entry
    changes by at most rel_tol times the integral of |h|.
    """
    n = int(n_start)
    x = np.linspace(a, b, n + 1)
    step = (b - a) / n
    fx = np.asarray(h(x))
    total = step * (fx[..., 1:-1].sum(axis=-1) + 0.5 * (fx[..., 0] + fx[..., -1]))
    while n < n_max:
        mid = a + step * (np.arange(n, dtype=np.float64) + 0.5)
        fm = np.asarray(h(mid))
        refined = 0.5 * total + 0.5 * step * fm.sum(axis=-1)
        scale = 0.5 * step * np.abs(fm).sum(axis=-1) + 0.5 * np.abs(refined)
        change = np.abs(refined - total)
        total = refined
        n *= 2
        step *= 0.5
        if np.all(change <= rel_tol * np.maximum(scale, 1e-300)):
            return total
    raise ToleranceNotMet(float(np.max(change)), rel_tol, where="trapezoid doubling")


# ============================================================================
# Special functions
# ============================================================================

def bessel_k1(x):
    """Modified Bessel function of the second kind, order one.

    Args:
        x: positive real scalar or array

    Returns:
        K1(x) with the same shape as x
    """
    arr = np.asarray(x, dtype=np.float64)
    if np.any(~(arr > 0.0)):
        raise DomainError(x, "x > 0")
    out = special.k1(arr)
    return float(out) if np.ndim(out) == 0 else out


def bessel_k1_integral(x: float) -> float:
    """K1(x) from its integral representation, integral_0^inf e^{-x cosh u} cosh u du."""
    if not x > 0.0:
        raise DomainError(x, "x > 0")
    value, _ = integrate.quad(lambda u: math.exp(-x * math.cosh(u)) * math.cosh(u),
                              0.0, np.inf, epsabs=0.0, epsrel=1e-13, limit=400)
    return value


# ============================================================================
# Adaptive real-line quadrature
# ============================================================================

def _tail_width(h: Callable[[float], float], tol: float, start: float, max_width: float) -> float:
    """Smallest W = start * 2^k with max|h| on W/2 <= |x| <= W times W below tol/10."""
    width = start
    while True:
        offsets = np.linspace(0.5 * width, width, 33)
        peak = max(max(abs(h(p)) for p in offsets), max(abs(h(-p)) for p in offsets))
        if peak * width <= 0.1 * tol:
            return width
        if width >= max_width:
            raise ToleranceNotMet(peak * width, tol, where="tail truncation")
        width *= 2.0


def _integrate_real(h: Callable[[float], float], edges: np.ndarray, tol: float) -> tuple[float, float]:
    per_chunk = tol / max(4 * (len(edges) - 1), 1)
    total = 0.0
    error = 0.0
    for lo, hi in zip(edges[:-1], edges[1:]):
        value, abserr = integrate.quad(h, lo, hi, epsabs=per_chunk, epsrel=0.0, limit=200)
        total += value
        error += abserr
    return total, error


def adaptive_real_line(h: Callable[[float], complex], tol: float = 1e-10,
                       points: Sequence[float] = (), chunk: float = 8.0,
                       max_width: float = 8.0 * 2 ** 10):
    """Integral of h over the real line to absolute tolerance tol.

    The line is truncated to |x| <= W where the sampled envelope of h times W
    falls below tol/10, then integrated chunk by chunk with QUADPACK.

    Args:
        h: scalar integrand, real or complex valued
        tol: absolute tolerance
        points: known breakpoints (discontinuities, support edges)
        chunk: maximal length of one QUADPACK interval
        max_width: largest admissible truncation half-width

    Returns:
        float, or complex when h is complex valued
    """
    if not tol > 0.0:
        raise DomainError(tol, "tol > 0")
    width = _tail_width(h, tol, chunk, max_width)
    n_chunks = int(math.ceil(2.0 * width / chunk))
    edges = np.linspace(-width, width, n_chunks + 1)
    inner = [p for p in points if -width < p < width]
    if inner:
        edges = np.unique(np.concatenate([edges, np.asarray(inner, dtype=np.float64)]))

    if np.iscomplexobj(np.asarray(h(0.0))):
        re, re_err = _integrate_real(lambda x: float(np.real(h(x))), edges, 0.5 * tol)
        im, im_err = _integrate_real(lambda x: float(np.imag(h(x))), edges, 0.5 * tol)
        if re_err + im_err > tol:
            raise ToleranceNotMet(re_err + im_err, tol, where="adaptive_real_line")
        return complex(re, im)

    value, error = _integrate_real(h, edges, tol)
    if error > tol:
        raise ToleranceNotMet(error, tol, where="adaptive_real_line")
    return float(value)
