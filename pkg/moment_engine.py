"""
Generalized moments integral f(omega) dP(omega) from the correlation function.

Routing picks the least restrictive admissible scheme for a (model, f) pair:

    FastPath            B < tau0: one trapezoidal sum of Phi_f(1/z) C(-iz)
    CompactSupport      compact spectral support, any entire f of low growth
    BranchCutAnalytic   C continues off two imaginary-axis cuts (or is entire)
    StripBandLimited    C only known in the strip, B < 2 tau0

The three iterated routes integrate P_f(s) against e^{-s} with a Gauss-Laguerre
rule. P_f(s) is evaluated on a circle about the origin when B < tau0 and on
the transform-plane circle centred at 1/2 otherwise.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, replace
from enum import Enum

import numpy as np

from execution_engine import run_parallel
from paley_wiener import Monomial, PaleyWienerFunction, Polynomial, evaluate_blockwise
from quadrature_core import (
    MAX_LAGUERRE_ORDER,
    ContourConfig,
    circle_mean_nb,
    circle_nodes,
    gauss_laguerre,
    max_abs_on_circle,
    trapezoid_circle,
)
from spectral_errors import DomainError, InvalidAnnulus, NoValidRoute, ToleranceNotMet
from spectral_models import AnalyticityClass, SpectralModel, correlation_at

DEFAULT_FAST_NODES = 64
DEFAULT_CIRCLE_NODES = 512
DEFAULT_LAGUERRE_ORDER = 64
MAX_FAST_NODES = 4096
MIN_PLANE_NODES = 256
MAX_PLANE_NODES = 8192
REALNESS_TOL = 1e-10
BOUND_INFLATION = 1.5
BOUND_SAMPLES = 1024
EPS = float(np.finfo(np.float64).eps)

# radius search when C is entire
ROUNDING_HEADROOM = 1e4
FAST_RADIUS_CANDIDATES = 16
FAST_RADIUS_SAMPLES = 256
ORIGIN_RADIUS_CANDIDATES = 33
ORIGIN_RADIUS_SAMPLES = 64

ORIGIN = "origin"
TRANSFORM_PLANE = "transform-plane"


class Route(str, Enum):
    COMPACT_SUPPORT = "CompactSupport"
    BRANCH_CUT_ANALYTIC = "BranchCutAnalytic"
    STRIP_BAND_LIMITED = "StripBandLimited"
    FAST_PATH = "FastPath"


@dataclass(frozen=True)
class ExecutionPlan:
    """Router verdict.

    For the transform-plane geometry contour.tau is the radius of the circle
    centred at 1/2 on which P_f(s) is evaluated. With adaptive_radius the
    origin circle is re-chosen for every Laguerre node s.
    """

    route: Route
    justification: str
    contour: ContourConfig
    geometry: str = ORIGIN
    adaptive_radius: bool = False

    def _circle(self) -> str:
        c = self.contour
        if self.geometry == TRANSFORM_PLANE:
            return f"transform-plane circle: center=0.5, radius={c.tau:.6g}, n_nodes={c.n_nodes}"
        if self.adaptive_radius:
            return f"contour: tau chosen per node (start {c.tau:.6g}), n_nodes={c.n_nodes}"
        return f"contour: tau={c.tau:.6g}, n_nodes={c.n_nodes}, rho1={c.rho1:.6g}, rho2={c.rho2:.6g}"

    def describe(self) -> str:
        return f"route: {self.route.value}\njustification: {self.justification}\n{self._circle()}"

    def summary(self) -> str:
        return f"{self.route.value}; {self._circle()}"


@dataclass(frozen=True)
class MomentResult:
    """Moment value with its diagnostics.

    a_priori_bound is set on the fast path (truncation plus rounding);
    error_estimate on the iterated routes (Laguerre refinement, rounding and
    transform-plane aliasing).
    """

    value: float | complex
    a_priori_bound: float | None
    route_used: ExecutionPlan
    nodes_used: int
    imag_residue: float = 0.0
    error_estimate: float | None = None

    def to_record(self) -> dict:
        return {
            "n_nodes": self.nodes_used,
            "value": self.value,
            "apriori_bound": self.a_priori_bound,
            "route": self.route_used.route.value,
        }


# ============================================================================
# Routing
# ============================================================================

def _rounding_scales(g, radii, n_samples: int) -> np.ndarray:
    """tau * sampled max |g| on each circle |z| = tau; overflow maps to inf."""
    with np.errstate(over="ignore", invalid="ignore"):
        scales = np.array([r * max_abs_on_circle(g, r, n_samples) for r in radii], dtype=np.float64)
    return np.where(np.isfinite(scales), scales, np.inf)


def entire_fast_radius(model: SpectralModel, f: PaleyWienerFunction) -> float:
    """Fast-path radius in (B, max(1, 2B)] for a model with entire C.

    The largest candidate whose rounding scale tau * max|g| stays below
    ROUNDING_HEADROOM wins; when none does, the one with the smallest scale.
    """
    B = f.band_limit
    top = max(1.0, 2.0 * B)
    candidates = B + (top - B) * np.arange(1, FAST_RADIUS_CANDIDATES + 1) / FAST_RADIUS_CANDIDATES
    scales = _rounding_scales(_fast_integrand(model, f), candidates, FAST_RADIUS_SAMPLES)
    quiet = np.flatnonzero(scales <= ROUNDING_HEADROOM)
    best = quiet[-1] if quiet.size else int(np.argmin(scales))
    return float(candidates[best])


def entire_origin_radius(model: SpectralModel, f: PaleyWienerFunction, s: float) -> tuple[float, float]:
    """Origin-circle radius minimizing the rounding scale of P_f(s) for entire C.

    Returns:
        (tau, tau * max |f(s/z) C(-iz)/z|)
    """
    candidates = np.geomspace(1.0 / 16.0, max(16.0, float(s)), ORIGIN_RADIUS_CANDIDATES)
    scales = _rounding_scales(_pf_integrand(model, f, s), candidates, ORIGIN_RADIUS_SAMPLES)
    best = int(np.argmin(scales))
    return float(candidates[best]), float(scales[best])


def _fast_contour(model: SpectralModel, f: PaleyWienerFunction, tau, n_nodes, rho1, rho2) -> ContourConfig:
    B = f.band_limit
    tau0 = model.tau0
    if tau is None:
        tau = entire_fast_radius(model, f) if math.isinf(tau0) else 0.5 * (B + tau0)
    if not B < tau < tau0:
        raise InvalidAnnulus(f"fast path needs B={B:g} < tau={tau:g} < tau0={tau0:g}")
    if rho1 is None:
        rho1 = 0.5 * (B / tau + 1.0)
    if rho2 is None:
        rho2 = 2.0 if math.isinf(tau0) else 0.5 * (1.0 + tau0 / tau)
    contour = ContourConfig(float(tau), int(n_nodes or DEFAULT_FAST_NODES), float(rho1), float(rho2))
    if not (B < rho1 * tau and rho2 * tau < tau0):
        raise InvalidAnnulus(
            f"annulus must satisfy B={B:g} < rho1*tau={rho1 * tau:g} and rho2*tau={rho2 * tau:g} < tau0={tau0:g}")
    return contour


def _origin_contour(B: float, tau0: float, tau, n_nodes, rho1, rho2) -> ContourConfig:
    if tau is None:
        if math.isinf(tau0):
            tau = 1.0 if math.isinf(B) else max(1.0, 2.0 * B)
        else:
            tau = 0.5 * (B + tau0)
    if not tau < tau0:
        raise InvalidAnnulus(f"contour radius tau={tau:g} must stay inside tau0={tau0:g}")
    if rho1 is None:
        rho1 = 0.5 * (B / tau + 1.0) if B < tau else 0.5
    if rho2 is None:
        rho2 = 2.0 if math.isinf(tau0) else 0.5 * (1.0 + tau0 / tau)
    return ContourConfig(float(tau), int(n_nodes or DEFAULT_CIRCLE_NODES), float(rho1), float(rho2))


def plane_node_count(radius: float) -> int:
    """Smallest power of two >= 256 with (2 radius)^{-M} < 1e-16, capped at 8192."""
    growth = math.log(2.0 * radius)
    if growth <= 0.0:
        return MAX_PLANE_NODES
    needed = math.log(1e16) / growth
    n = MIN_PLANE_NODES
    while n < needed and n < MAX_PLANE_NODES:
        n *= 2
    return n


def plane_alias_factor(radius: float, n_nodes: int) -> float:
    """(2 radius)^{-M}: decay of the aliasing term from the singularity at z = 0."""
    with np.errstate(over="ignore"):
        return float(np.power(np.float64(2.0 * radius), -int(n_nodes)))


def _plane_plan(route: Route, f: PaleyWienerFunction, radius: float, n_nodes, justification: str) -> ExecutionPlan:
    if not f.transform_known:
        raise NoValidRoute(f"{f.describe()}: band limit beyond tau0 needs the transform of f")
    contour = ContourConfig(float(radius), int(n_nodes or plane_node_count(radius)))
    return ExecutionPlan(route, justification + f"; transform-plane circle radius {radius:.6g}",
                         contour, TRANSFORM_PLANE)


def route_validity(model: SpectralModel, f: PaleyWienerFunction, *, tau: float | None = None,
                   n_nodes: int | None = None, rho1: float | None = None, rho2: float | None = None,
                   iterated: bool = False) -> ExecutionPlan:
    """Choose the least restrictive admissible route.

    Args:
        model: spectral model
        f: test function (Paley-Wiener kind or the entire Gaussian marker)
        tau, n_nodes, rho1, rho2: contour overrides
        iterated: exclude the fast path (used by moment_iterated)

    Returns:
        ExecutionPlan with the default or overridden contour

    Raises:
        NoValidRoute: no route admits the pair; carries the failed inequality
    """
    B = f.band_limit
    tau0 = model.tau0
    cls = model.analyticity_class
    adaptive = tau is None and math.isinf(tau0)

    if f.paley_wiener and not iterated and B < tau0:
        contour = _fast_contour(model, f, tau, n_nodes, rho1, rho2)
        return ExecutionPlan(Route.FAST_PATH, f"B={B:g} < tau0={tau0:g}", contour)

    if model.support.is_compact:
        contour = _origin_contour(B, tau0, tau, n_nodes, rho1, rho2)
        return ExecutionPlan(Route.COMPACT_SUPPORT, f"support {model.support} is compact", contour,
                             adaptive_radius=adaptive)

    if not f.paley_wiener:
        raise NoValidRoute(f"{f.describe()} is not band-limited and support {model.support} is not compact")

    if cls in (AnalyticityClass.PLANE_MINUS_BRANCH_CUTS, AnalyticityClass.ENTIRE_PLANE):
        why = f"analyticity class {cls.value} admits any band limit (B={B:g}, tau0={tau0:g})"
        if B < tau0:
            contour = _origin_contour(B, tau0, tau, n_nodes, rho1, rho2)
            return ExecutionPlan(Route.BRANCH_CUT_ANALYTIC, why, contour, adaptive_radius=adaptive)
        radius = 0.5 * math.sqrt(1.0 + (tau0 / B) ** 2)
        return _plane_plan(Route.BRANCH_CUT_ANALYTIC, f, radius, n_nodes, why)

    if B < 2.0 * tau0:
        why = f"B={B:g} < 2*tau0={2.0 * tau0:g} ({cls.value})"
        if B < tau0:
            contour = _origin_contour(B, tau0, tau, n_nodes, rho1, rho2)
            return ExecutionPlan(Route.STRIP_BAND_LIMITED, why, contour)
        radius = 0.5 * (0.5 + tau0 / B)
        return _plane_plan(Route.STRIP_BAND_LIMITED, f, radius, n_nodes, why)

    raise NoValidRoute(f"B={B:g} < 2*tau0={2.0 * tau0:g} fails for {cls.value} analyticity")


# ============================================================================
# Contour functional P_f(s)
# ============================================================================

def _pf_integrand(model: SpectralModel, f: PaleyWienerFunction, s: float):
    def integrand(z):
        return f(s / z) * model.mgf(z) / z

    return integrand


def pf_at(model: SpectralModel, f: PaleyWienerFunction, s: float, contour: ContourConfig) -> complex:
    """Trapezoidal P_f(s) = (1/2 pi i) contour integral of f(s/z) C(-iz)/z on |z| = tau."""
    return trapezoid_circle(_pf_integrand(model, f, s), contour.tau, contour.n_nodes)


def generalized_characteristic(model: SpectralModel, f: PaleyWienerFunction, theta):
    """F(theta) = integral f_hat(kappa) C(theta kappa) d kappa."""
    if not f.transform_known:
        raise NoValidRoute(f"{f.describe()}: transform of f is not available")

    def block(tb):
        return f.pair(lambda kappa: correlation_at(model, tb[:, None] * kappa[None, :]))

    value = evaluate_blockwise(block, theta)
    return complex(value) if np.ndim(theta) == 0 else value


def _plane_base(model: SpectralModel, f: PaleyWienerFunction, radius: float, n_nodes: int):
    z, offset = circle_nodes(radius, n_nodes, center=0.5)
    return z, generalized_characteristic(model, f, z) * offset / z


def _plane_sums(z: np.ndarray, base: np.ndarray, s: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Circle means of base * e^{s/z} and the largest summand for every s."""
    out = np.empty(s.shape[0], dtype=np.complex128)
    peaks = np.empty(s.shape[0], dtype=np.float64)
    for j in range(s.shape[0]):
        terms = base * np.exp(s[j] / z)
        out[j] = circle_mean_nb(terms)
        peaks[j] = np.max(np.abs(terms))
    return out, peaks


def pf_via_transform(model: SpectralModel, f: PaleyWienerFunction, s, radius: float, n_nodes: int):
    """P_f(s) = (1/2 pi i) contour integral of F(z) e^{s/z} / z on |z - 1/2| = radius."""
    z, base = _plane_base(model, f, radius, n_nodes)
    out, _ = _plane_sums(z, base, np.atleast_1d(np.asarray(s, dtype=np.float64)))
    return complex(out[0]) if np.ndim(s) == 0 else out


def _origin_sums(model: SpectralModel, f: PaleyWienerFunction, plan: ExecutionPlan,
                 s: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """P_f at every s on the origin circle, with the rounding scale of each sum."""
    out = np.empty(s.shape[0], dtype=np.complex128)
    peaks = np.empty(s.shape[0], dtype=np.float64)
    for j, sj in enumerate(s):
        if plan.adaptive_radius:
            tau, scale = entire_origin_radius(model, f, sj)
            contour = plan.contour.with_tau(tau)
        else:
            contour = plan.contour
            scale = _rounding_scales(_pf_integrand(model, f, sj), [contour.tau], ORIGIN_RADIUS_SAMPLES)[0]
        out[j] = pf_at(model, f, sj, contour)
        peaks[j] = scale
    return out, peaks


def _settle_realness(raw: complex, model: SpectralModel, f: PaleyWienerFunction,
                     tol: float | None = None) -> tuple[float | complex, float]:
    """Real part of a moment that must be real, once its imaginary residue is within tolerance."""
    raw = complex(raw)
    residue = abs(raw.imag)
    if not (f.real_on_axis or (model.symmetric and f.even_part_real)):
        return raw, residue
    limit = max(REALNESS_TOL * (1.0 + abs(raw)), tol or 0.0)
    if not residue <= limit:
        raise ToleranceNotMet(residue, limit, where="imaginary residue of a real moment")
    return raw.real, residue


def _contour_overrides(contour: ContourConfig | None) -> dict:
    if contour is None:
        return {}
    return {"tau": contour.tau, "n_nodes": contour.n_nodes, "rho1": contour.rho1, "rho2": contour.rho2}


# ============================================================================
# Iterated and fast paths
# ============================================================================

def laguerre_orders(order: int) -> tuple[int, int, int]:
    """Coarse, requested and refined Gauss-Laguerre orders.

    The refined order doubles the requested one up to 128; at 128 the
    requested order is the refined one and the ladder steps down instead.
    """
    n = gauss_laguerre(int(order)).order
    top = min(2 * n, MAX_LAGUERRE_ORDER)
    mid = n if top > n else top // 2
    return max(1, mid // 2), mid, top


def moment_iterated(model: SpectralModel, f: PaleyWienerFunction, contour: ContourConfig | None = None,
                    laguerre_order: int = DEFAULT_LAGUERRE_ORDER, plan: ExecutionPlan | None = None,
                    tol: float | None = None) -> MomentResult:
    """Outer Gauss-Laguerre sum of P_f(s_j) over an iterated route.

    The sum is taken at three orders; the value comes from the refined one
    and the error estimate from the last two differences, plus the rounding
    scale of the inner sums and, on the transform plane, the aliasing term.

    Raises:
        ToleranceNotMet: tol is given and the estimate exceeds it
    """
    if plan is None:
        plan = route_validity(model, f, iterated=True, **_contour_overrides(contour))
    low, mid, top = laguerre_orders(laguerre_order)

    if plan.geometry == TRANSFORM_PLANE:
        z, base = _plane_base(model, f, plan.contour.tau, plan.contour.n_nodes)

        def evaluate(nodes):
            return _plane_sums(z, base, nodes)
    else:
        def evaluate(nodes):
            return _origin_sums(model, f, plan, nodes)

    sums = {}
    for order in sorted({low, mid, top}):
        rule = gauss_laguerre(order)
        values, peaks = evaluate(rule.nodes)
        sums[order] = rule.integrate(values)

    coarse = abs(sums[mid] - sums[low])
    fine = abs(sums[top] - sums[mid])
    refinement = fine * min(1.0, fine / coarse) if coarse > 0.0 else fine
    weighted_peak = float(np.dot(rule.weights, peaks))
    estimate = refinement + BOUND_INFLATION * EPS * weighted_peak
    if plan.geometry == TRANSFORM_PLANE:
        estimate += plane_alias_factor(plan.contour.tau, plan.contour.n_nodes) * weighted_peak
    if tol is not None and not estimate <= tol:
        raise ToleranceNotMet(estimate, tol, where=f"{plan.route.value} Laguerre sum")

    value, residue = _settle_realness(sums[top], model, f, tol)
    return MomentResult(value, None, plan, top * plan.contour.n_nodes, residue, estimate)


def _fast_integrand(model: SpectralModel, f: PaleyWienerFunction):
    def g(z):
        return f.phi(1.0 / z) * model.mgf(z) / z

    return g


def annulus_maxima(model: SpectralModel, f: PaleyWienerFunction, contour: ContourConfig,
                   n_samples: int) -> tuple[float, float]:
    """Sampled max |g| on |z| = rho1*tau and rho2*tau, inflated by 1.5."""
    g = _fast_integrand(model, f)
    m1 = max_abs_on_circle(g, contour.rho1 * contour.tau, n_samples)
    m2 = max_abs_on_circle(g, contour.rho2 * contour.tau, n_samples)
    return BOUND_INFLATION * m1, BOUND_INFLATION * m2


def error_bound(M1: float, M2: float, tau: float, rho1: float, rho2: float, N: int) -> float:
    """A-priori error of the (N+1)-node trapezoidal sum for an integrand analytic
    in rho1*tau <= |z| <= rho2*tau with maxima M1 (inner) and M2 (outer)."""
    if not (0.0 < rho1 < 1.0 < rho2):
        raise InvalidAnnulus(f"need 0 < rho1 < 1 < rho2, got rho1={rho1}, rho2={rho2}")
    if N < 1 or M1 < 0.0 or M2 < 0.0 or not tau > 0.0:
        raise InvalidAnnulus(f"need N >= 1, M1, M2 >= 0 and tau > 0, got N={N}, M1={M1}, M2={M2}, tau={tau}")
    with np.errstate(over="ignore", under="ignore"):
        grow = np.power(np.float64(rho2), N + 1)
        inner = np.power(np.float64(rho1), N)
        inner_next = np.power(np.float64(rho1), N + 1)
    outer_term = 0.0 if np.isinf(grow) else tau * M2 * rho2 / (grow - 1.0)
    inner_term = tau * M1 * inner / (1.0 - inner_next)
    return float(outer_term + inner_term)


def rounding_bound(model: SpectralModel, f: PaleyWienerFunction, contour: ContourConfig) -> float:
    """Floating-point error of the fast sum: eps * tau * max |g| on |z| = tau, inflated by 1.5."""
    scale = _rounding_scales(_fast_integrand(model, f), [contour.tau], BOUND_SAMPLES)[0]
    return BOUND_INFLATION * EPS * scale


def select_n_nodes(model: SpectralModel, f: PaleyWienerFunction, contour: ContourConfig, tol: float) -> int:
    """Smallest power-of-two node count (8..4096) whose a-priori bound is below tol."""
    m1, m2 = annulus_maxima(model, f, contour, BOUND_SAMPLES)
    n = 8
    while n < MAX_FAST_NODES:
        if error_bound(m1, m2, contour.tau, contour.rho1, contour.rho2, n - 1) < tol:
            return n
        n *= 2
    return MAX_FAST_NODES


def moment_fast(model: SpectralModel, f: PaleyWienerFunction, contour: ContourConfig | None = None,
                tol: float | None = None, *, choose_nodes: bool = True) -> MomentResult:
    """Single-contour trapezoidal moment for B < tau0.

    Args:
        model: spectral model
        f: Paley-Wiener function with band limit below tau0
        contour: circle and annulus; defaults from route_validity
        tol: requested accuracy; with choose_nodes the node count is picked
            from the a-priori bound

    Returns:
        MomentResult whose a_priori_bound adds the rounding term to the
        truncation bound

    Raises:
        ToleranceNotMet: the rounding term alone exceeds tol
    """
    plan = route_validity(model, f, **_contour_overrides(contour))
    if plan.route is not Route.FAST_PATH:
        raise NoValidRoute(f"fast path needs B={f.band_limit:g} < tau0={model.tau0:g}")
    c = plan.contour
    rounding = rounding_bound(model, f, c)
    if tol is not None and not rounding <= tol:
        raise ToleranceNotMet(rounding, tol, where=f"fast path rounding on |z|={c.tau:.6g}")
    if tol is not None and choose_nodes:
        c = c.with_nodes(select_n_nodes(model, f, c, tol))
        plan = replace(plan, contour=c)

    raw = trapezoid_circle(_fast_integrand(model, f), c.tau, c.n_nodes)
    bound = None
    if c.n_nodes >= 2:
        m1, m2 = annulus_maxima(model, f, c, 4 * c.n_nodes)
        bound = error_bound(m1, m2, c.tau, c.rho1, c.rho2, c.n_nodes - 1) + rounding
    value, residue = _settle_realness(raw, model, f, tol)
    return MomentResult(value, bound, plan, c.n_nodes, residue)


def compute_moment(model: SpectralModel, f: PaleyWienerFunction, *, tol: float = 1e-10,
                   laguerre_order: int = DEFAULT_LAGUERRE_ORDER, tau: float | None = None,
                   n_nodes: int | None = None, rho1: float | None = None,
                   rho2: float | None = None) -> MomentResult:
    """Moment through the best admissible route, checked against tol."""
    plan = route_validity(model, f, tau=tau, n_nodes=n_nodes, rho1=rho1, rho2=rho2)
    if plan.route is Route.FAST_PATH:
        return moment_fast(model, f, plan.contour, tol=tol, choose_nodes=not n_nodes)
    return moment_iterated(model, f, laguerre_order=laguerre_order, plan=plan, tol=tol)

# ============================================================================
# Monomial and modified moments
# ============================================================================

def monomial_moment(model: SpectralModel, k: int, contour: ContourConfig | None = None) -> float:
    """mu_k = (k!/2 pi i) contour integral of C(-iz)/z^{k+1}."""
    k = int(k)
    if contour is None:
        tau = 0.5 * model.tau0 if math.isfinite(model.tau0) else 1.0
        contour = ContourConfig(tau, max(DEFAULT_FAST_NODES, 2 * k + 32))
    if not contour.tau < model.tau0:
        raise DomainError(contour.tau, f"contour radius below tau0={model.tau0:g}")

    def integrand(z):
        return model.mgf(z) / z ** (k + 1)

    return math.factorial(k) * trapezoid_circle(integrand, contour.tau, contour.n_nodes).real


def monomial_moment_laguerre(model: SpectralModel, k: int, contour: ContourConfig | None = None) -> float:
    """mu_k through the Laplace form: Gauss-Laguerre over P_{z^k}(s) = mu_k s^k / k!."""
    result = moment_iterated(model, Monomial(int(k)), contour, laguerre_order=int(k) // 2 + 1)
    return float(np.real(result.value))


MODIFIED_FAMILIES = {
    "hermite": np.polynomial.HermiteE,
    "legendre": np.polynomial.Legendre,
    "laguerre": np.polynomial.Laguerre,
}


def modified_moments(model: SpectralModel, family: str, degree: int,
                     contour: ContourConfig | None = None) -> np.ndarray:
    """Moments of the orthogonal polynomials p_0..p_degree of a classical family.

    Each p_j is carried in factorized form so P_f(s) is evaluated as a product
    of root factors rather than from power-basis coefficients.
    """
    try:
        series = MODIFIED_FAMILIES[family]
    except KeyError:
        raise DomainError(family, "one of " + ", ".join(MODIFIED_FAMILIES)) from None
    moments = np.empty(int(degree) + 1, dtype=np.float64)
    for j in range(int(degree) + 1):
        basis = series.basis(j)
        leading = float(basis.convert(kind=np.polynomial.Polynomial).coef[-1])
        poly = Polynomial.from_roots(basis.roots() if j else (), leading)
        result = moment_iterated(model, poly, contour, laguerre_order=j // 2 + 1)
        moments[j] = float(np.real(result.value))
    return moments


# ============================================================================
# Convergence study
# ============================================================================

@dataclass(frozen=True)
class ConvergenceStudy:
    results: list
    reference: float | complex
    errors: np.ndarray


def convergence_study(model: SpectralModel, f: PaleyWienerFunction, n_list, *, tau: float | None = None,
                      rho1: float | None = None, rho2: float | None = None,
                      laguerre_order: int = DEFAULT_LAGUERRE_ORDER, n_jobs: int | None = None) -> ConvergenceStudy:
    """Moment at each node count in n_list against a high-resolution reference."""
    n_list = [int(n) for n in n_list]
    plan = route_validity(model, f, tau=tau, rho1=rho1, rho2=rho2)
    n_ref = min(MAX_PLANE_NODES, max(4 * max(n_list), 1024))

    if plan.route is Route.FAST_PATH:
        def run(n):
            return moment_fast(model, f, plan.contour.with_nodes(n))
    else:
        def run(n):
            return moment_iterated(model, f, laguerre_order=laguerre_order,
                                   plan=replace(plan, contour=plan.contour.with_nodes(n)))

    results = run_parallel(run, n_list, n_jobs=n_jobs)
    reference = run(n_ref).value
    errors = np.array([abs(r.value - reference) for r in results], dtype=np.float64)
    return ConvergenceStudy(results, reference, errors)
