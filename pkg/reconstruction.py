"""
Spectral scans through delta sequences and pointwise correlation reconstruction.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from execution_engine import run_parallel
from moment_engine import MomentResult, compute_moment, DEFAULT_LAGUERRE_ORDER
from paley_wiener import ComplexExponential, PaleyWienerFunction, shift_scale
from quadrature_core import ContourConfig
from spectral_errors import DomainError, NoValidRoute, ToleranceNotMet
from spectral_models import AnalyticityClass, SpectralModel, correlation_at


@dataclass(frozen=True)
class SpectrumScan:
    grid: np.ndarray
    sigma: float
    values: np.ndarray
    kernel: PaleyWienerFunction
    routes: tuple = ()
    bounds: tuple = ()
    errors: tuple = ()
    plans: tuple = ()

    def __len__(self):
        return len(self.grid)

    def to_records(self) -> list[dict]:
        records = []
        for i, omega0 in enumerate(self.grid):
            records.append({
                "omega0": float(omega0),
                "sigma": self.sigma,
                "value": self.values[i],
                "route": self.routes[i],
                "bound": self.bounds[i],
                "error": self.errors[i],
            })
        return records


def minimal_sigma(model: SpectralModel, kernel: PaleyWienerFunction) -> float | None:
    """Smallest resolution admitted by the router, or None when any sigma works."""
    if model.support.is_compact or model.analyticity_class is not AnalyticityClass.STRIP_ONLY:
        return None
    return kernel.band_limit / (2.0 * model.tau0)


def smoothed_moment(model: SpectralModel, kernel: PaleyWienerFunction, omega0: float, sigma: float,
                    *, tol: float = 1e-10, laguerre_order: int = DEFAULT_LAGUERRE_ORDER) -> MomentResult:
    """Moment of kernel((omega - omega0)/sigma), without the 1/sigma normalization."""
    g = shift_scale(kernel, omega0, sigma)
    try:
        return compute_moment(model, g, tol=tol, laguerre_order=laguerre_order)
    except NoValidRoute as exc:
        raise NoValidRoute(exc.inequality, minimal_sigma=minimal_sigma(model, kernel)) from exc


def smoothed_spectrum(model: SpectralModel, kernel: PaleyWienerFunction, omega0: float, sigma: float,
                      *, tol: float = 1e-10, laguerre_order: int = DEFAULT_LAGUERRE_ORDER):
    """(1/sigma) integral kernel((omega - omega0)/sigma) dP(omega)."""
    result = smoothed_moment(model, kernel, omega0, sigma, tol=tol, laguerre_order=laguerre_order)
    return result.value / sigma


def spectrum_scan(model: SpectralModel, kernel: PaleyWienerFunction, grid, sigma: float, *,
                  tol: float = 1e-10, laguerre_order: int = DEFAULT_LAGUERRE_ORDER,
                  n_jobs: int | None = None, progress: bool = False) -> SpectrumScan:
    """Smoothed spectrum at every grid point; per-point failures are recorded, not raised."""
    grid = np.asarray(grid, dtype=np.float64).ravel()
    if grid.size > 1 and np.any(np.diff(grid) <= 0.0):
        raise DomainError(grid, "ascending frequency grid")

    def point(omega0):
        try:
            result = smoothed_moment(model, kernel, omega0, sigma, tol=tol, laguerre_order=laguerre_order)
        except (NoValidRoute, ToleranceNotMet) as exc:
            return np.nan, None, None, str(exc), None
        bound = None if result.a_priori_bound is None else result.a_priori_bound / sigma
        return result.value / sigma, result.route_used.route.value, bound, None, result.route_used

    rows = run_parallel(point, grid, n_jobs=n_jobs, desc="Scan", progress=progress)
    values = [r[0] for r in rows]
    dtype = np.complex128 if any(isinstance(v, complex) for v in values) else np.float64
    return SpectrumScan(
        grid=grid,
        sigma=float(sigma),
        values=np.array(values, dtype=dtype),
        kernel=kernel,
        routes=tuple(r[1] for r in rows),
        bounds=tuple(r[2] for r in rows),
        errors=tuple(r[3] for r in rows),
        plans=tuple(r[4] for r in rows),
    )


def correlation_reconstruct(model: SpectralModel, t: float, contour: ContourConfig | None = None,
                            *, tol: float = 1e-10, laguerre_order: int = DEFAULT_LAGUERRE_ORDER) -> complex:
    """C(t) recovered as the generalized moment of e^{i omega t}."""
    return complex(reconstruct_result(model, t, contour, tol=tol, laguerre_order=laguerre_order).value)


def reconstruct_result(model: SpectralModel, t: float, contour: ContourConfig | None = None,
                       *, tol: float = 1e-10, laguerre_order: int = DEFAULT_LAGUERRE_ORDER) -> MomentResult:
    overrides = {}
    if contour is not None:
        overrides = {"tau": contour.tau, "n_nodes": contour.n_nodes, "rho1": contour.rho1, "rho2": contour.rho2}
    return compute_moment(model, ComplexExponential(float(t)), tol=tol, laguerre_order=laguerre_order, **overrides)


def reconstruct_series(model: SpectralModel, times, *, tol: float = 1e-10,
                       laguerre_order: int = DEFAULT_LAGUERRE_ORDER, n_jobs: int | None = None,
                       progress: bool = False) -> list[dict]:
    """Reconstruct C at several times and compare with the closed form."""

    def one(t):
        result = reconstruct_result(model, t, tol=tol, laguerre_order=laguerre_order)
        value = complex(result.value)
        exact = correlation_at(model, complex(t))
        return {
            "t": float(t),
            "real": value.real,
            "imag": value.imag,
            "abs_error": abs(value - exact),
            "route": result.route_used.route.value,
            "n_nodes": result.nodes_used,
            "plan": result.route_used,
        }

    return run_parallel(one, list(times), n_jobs=n_jobs, desc="Reconstruct", progress=progress)
