"""
specmoment - generalized moments of spectral distributions from short-time correlation data.
Main application entry point.
"""
from __future__ import annotations

import argparse
import sys

from config_manager import ConfigManager, RunConfig
from execution_engine import ExecutionEngine
from moment_engine import compute_moment, convergence_study, route_validity
from paley_wiener import shift_scale
from reconstruction import minimal_sigma, reconstruct_series, spectrum_scan
from results_writer import ResultsWriter
from spectral_errors import ConfigError, NoValidRoute, SpecMomentError
from spectral_models import oracle_generalized_moment

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_NO_ROUTE = 2


class ArgumentParser(argparse.ArgumentParser):
    """argparse parser whose usage errors raise instead of exiting with status 2."""

    def error(self, message):
        raise ConfigError(f"{self.prog}: {message}")


def build_parser() -> ArgumentParser:
    common = ArgumentParser(add_help=False)
    common.add_argument("--config", help="JSON config document with the same fields as the flags")
    common.add_argument("--model", help="model descriptor, e.g. exponential or free_particle:beta=2,hbar=1")
    common.add_argument("--function", help="function descriptor, e.g. sinc, exp:t=0.5, poly:coeffs=1;0;1")
    common.add_argument("--band", type=float, help="band limit B for sinc and bump")
    common.add_argument("--time", type=float, help="time t for exp")
    common.add_argument("--order", type=int, help="order k for monomial")
    common.add_argument("--coeffs", help="polynomial coefficients a0;a1;...")
    common.add_argument("--tau", type=float, help="contour radius")
    common.add_argument("--n-nodes", dest="n_nodes", type=int, help="trapezoid node count")
    common.add_argument("--rho1", type=float, help="inner annulus radius relative to tau")
    common.add_argument("--rho2", type=float, help="outer annulus radius relative to tau")
    common.add_argument("--tol", type=float, help="requested absolute tolerance")
    common.add_argument("--laguerre-order", dest="laguerre_order", type=int, help="Gauss-Laguerre order")
    common.add_argument("--format", choices=("csv", "json", "plain"), help="output format")
    common.add_argument("--progress", action="store_true", default=None, help="progress bars on stderr")

    parser = ArgumentParser(prog="specmoment", description=__doc__.strip().splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    moment = sub.add_parser("moment", parents=[common], help="generalized moment of one function")
    moment.add_argument("--oracle", action="store_true", default=None,
                        help="compare with brute-force quadrature of the density")

    spectrum = sub.add_parser("spectrum", parents=[common], help="smoothed spectrum on a grid")
    spectrum.add_argument("--grid", help="a:b:step")
    spectrum.add_argument("--sigma", type=float, help="resolution")

    reconstruct = sub.add_parser("reconstruct", parents=[common], help="C(t) at given times")
    reconstruct.add_argument("--times", help="t1,t2,...")

    converge = sub.add_parser("converge", parents=[common], help="error against node count")
    converge.add_argument("--n-list", dest="n_list", help="n1,n2,...")

    sub.add_parser("validate", parents=[common], help="report the route without computing")
    return parser


def resolve_config(argv) -> RunConfig:
    args = build_parser().parse_args(argv)
    overrides = {k: v for k, v in vars(args).items() if k not in ("config", "command")}
    manager = ConfigManager(args.config)
    manager.update(overrides)
    return manager.resolve(args.command)


def _echo_plan(plan, err):
    print("=== Execution plan ===", file=err)
    print(plan.describe(), file=err)


def _run_moment(cfg: RunConfig, writer: ResultsWriter, err) -> str:
    model = cfg.build_model()
    f = cfg.build_function()
    result = compute_moment(model, f, tol=cfg.tol, laguerre_order=cfg.laguerre_order, **cfg.contour_overrides())
    _echo_plan(result.route_used, err)
    if result.error_estimate is not None:
        print(f"error estimate: {result.error_estimate:.3e}", file=err)
    record = result.to_record()
    record["abs_error"] = None
    if cfg.oracle:
        record["abs_error"] = abs(result.value - oracle_generalized_moment(model, f, tol=min(cfg.tol, 1e-8)))
    return writer.render(writer.moment_table([record]))


def _run_spectrum(cfg: RunConfig, writer: ResultsWriter, err, engine: ExecutionEngine) -> str:
    model = cfg.build_model()
    kernel = cfg.build_function()
    grid = cfg.grid_values()
    if len(grid):
        try:
            route_validity(model, shift_scale(kernel, grid[0], cfg.sigma))
        except NoValidRoute as exc:
            raise NoValidRoute(exc.inequality, minimal_sigma(model, kernel)) from exc
    scan = engine.timed(spectrum_scan, model, kernel, grid, cfg.sigma, tol=cfg.tol,
                        laguerre_order=cfg.laguerre_order, n_jobs=engine.n_jobs, progress=engine.progress)
    print("=== Execution plans ===", file=err)
    for omega0, plan, message in zip(scan.grid, scan.plans, scan.errors):
        print(f"omega0={omega0:g}: {plan.summary() if plan is not None else message}", file=err)
    print(engine.summary(), file=err)
    records = scan.to_records()
    return writer.render(writer.scan_table(records), extra=[{"error": r["error"]} for r in records])


def _run_reconstruct(cfg: RunConfig, writer: ResultsWriter, err, engine: ExecutionEngine) -> str:
    model = cfg.build_model()
    records = engine.timed(reconstruct_series, model, cfg.time_values(), tol=cfg.tol,
                           laguerre_order=cfg.laguerre_order, n_jobs=engine.n_jobs, progress=engine.progress)
    print("=== Execution plans ===", file=err)
    for record in records:
        print(f"t={record['t']:g}: {record.pop('plan').summary()}", file=err)
    print(engine.summary(), file=err)
    return writer.render(writer.reconstruct_table(records))


def _run_converge(cfg: RunConfig, writer: ResultsWriter, err, engine: ExecutionEngine) -> str:
    model = cfg.build_model()
    f = cfg.build_function()
    n_list = cfg.n_list_values()
    study = engine.timed(convergence_study, model, f, n_list, tau=cfg.tau, rho1=cfg.rho1, rho2=cfg.rho2,
                         laguerre_order=cfg.laguerre_order, n_jobs=engine.n_jobs)
    print("=== Execution plans ===", file=err)
    records = []
    for n, result, error in zip(n_list, study.results, study.errors):
        print(f"n={n}: {result.route_used.summary()}", file=err)
        record = result.to_record()
        record.update(n_nodes=n, abs_error=float(error))
        records.append(record)
    print(engine.summary(), file=err)
    return writer.render(writer.moment_table(records))


def _run_validate(cfg: RunConfig, writer: ResultsWriter, err) -> str:
    plan = route_validity(cfg.build_model(), cfg.build_function(), **cfg.contour_overrides())
    _echo_plan(plan, err)
    return plan.describe() + "\n"


def run_cli(argv=None, stdout=None, stderr=None) -> int:
    """Run one command; returns the process exit status."""
    out = stdout or sys.stdout
    err = stderr or sys.stderr
    try:
        cfg = resolve_config(sys.argv[1:] if argv is None else list(argv))
        writer = ResultsWriter(cfg.format)
        engine = ExecutionEngine(progress=cfg.progress)
        if cfg.command == "moment":
            text = _run_moment(cfg, writer, err)
        elif cfg.command == "spectrum":
            text = _run_spectrum(cfg, writer, err, engine)
        elif cfg.command == "reconstruct":
            text = _run_reconstruct(cfg, writer, err, engine)
        elif cfg.command == "converge":
            text = _run_converge(cfg, writer, err, engine)
        else:
            text = _run_validate(cfg, writer, err)
    except NoValidRoute as exc:
        print(f"error: {exc}", file=err)
        return EXIT_NO_ROUTE
    except SpecMomentError as exc:
        print(f"error: {exc}", file=err)
        return EXIT_ERROR
    out.write(text)
    out.flush()
    return EXIT_OK


def main():
    """Main entry point."""
    sys.exit(run_cli())


if __name__ == "__main__":
    main()
