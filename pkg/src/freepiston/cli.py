"""Command-line front end: ``freepiston simulate|optimize|sweep|calibrate``.

Exit codes: 0 success, 1 configuration or usage error, 2 numerical failure,
3 bore-scale search did not converge.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import replace

from . import csvio
from .config import RunConfig, load_config
from .dynamics import simulate_stroke
from .errors import ContractViolation, DomainError, NumericalFailure, ValidationError
from .optimizer import Strategy, calibrate_xm, optimize_bore_scale, sweep
from .plot import render_plot
from .report import render_report

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_NUMERICAL = 2
EXIT_NOT_CONVERGED = 3


def _summary(**items):
    parts = []
    for key, value in items.items():
        if isinstance(value, float):
            value = repr(value)
        parts.append(f"{key}={value}")
    return " ".join(parts)


def _write_text(path, text):
    try:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    except OSError as exc:
        raise OSError(exc.errno, f"cannot write {path}: {exc.strerror}") from exc


def _float_list(text):
    try:
        return [float(part) for part in text.split(",") if part.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}")


class _Parser(argparse.ArgumentParser):
    # usage errors share the configuration exit code; 2 means numerical failure
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_CONFIG, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(
        prog="freepiston",
        description="Simulate a free-piston stroke and identify the kickback bore scale.")
    parser.add_argument("command", choices=("simulate", "optimize", "sweep", "calibrate"))
    parser.add_argument("--config", required=True, metavar="FILE")
    parser.add_argument("--lambda", dest="lam", type=float, metavar="X",
                        help="bore scale for simulate, initial bore scale for optimize")
    parser.add_argument("--from", dest="lo", type=float, metavar="A",
                        help="lower end of the bore-scale grid (sweep) or x_m range (calibrate)")
    parser.add_argument("--to", dest="hi", type=float, metavar="B",
                        help="upper end of the bore-scale grid (sweep) or x_m range (calibrate)")
    parser.add_argument("--points", type=int, default=101, metavar="N")
    parser.add_argument("--target-lambda", type=float, metavar="X")
    parser.add_argument("--out", metavar="FILE.csv")
    parser.add_argument("--plot", metavar="FILE.svg")
    parser.add_argument("--strategy", choices=[s.value for s in Strategy])
    parser.add_argument("--report", metavar="FILE.md", help="calibrate: write a markdown report")
    parser.add_argument("--starts", type=_float_list, metavar="X,Y",
                        help="calibrate: initial bore scales for the report's search runs")
    parser.add_argument("--reference-bore", type=float, metavar="M",
                        help="calibrate: kickback bore to compare against in the report")
    parser.add_argument("--workers", type=int, default=1, help="sweep: process count")
    return parser


def _simulate(cfg: RunConfig, args):
    lam = args.lam if args.lam is not None else cfg.engine.lam
    p = cfg.engine.with_lambda(lam)
    result = simulate_stroke(p, cfg.integrator)
    if args.out:
        csvio.write_csv(args.out, result.trajectory.samples, csvio.TRAJECTORY)
    if args.plot:
        _write_text(args.plot, render_plot(result.trajectory.samples, "trajectory", x_s=p.x_s))
    print(_summary(command="simulate", termination=result.termination.value, **{"lambda": lam},
                   x_max=result.x_max, t_peak=result.t_peak, samples=len(result.trajectory)))
    return EXIT_OK


def _optimize(cfg: RunConfig, args):
    search = cfg.search
    if args.lam is not None:
        search = replace(search, lambda_init=args.lam)
    strategy = Strategy(args.strategy or Strategy.ODE)
    result = optimize_bore_scale(cfg.engine, search, strategy, cfg.integrator)
    if args.out:
        csvio.write_csv(args.out, result.trace, csvio.TRACE)
    if args.plot:
        _write_text(args.plot, render_plot(result.trace, "trace", x_s=cfg.engine.x_s))
    print(_summary(command="optimize", status=result.status.value, strategy=strategy.value,
                   lambda_star=result.lambda_star, x_max_star=result.x_max_star,
                   J=result.trace[-1].j_value, iterations=result.iterations,
                   bore_right_m=result.lambda_star * cfg.engine.bore_left))
    return EXIT_OK if result.converged else EXIT_NOT_CONVERGED


def _sweep(cfg: RunConfig, args):
    lo = args.lo if args.lo is not None else cfg.search.lambda_min
    hi = args.hi if args.hi is not None else cfg.search.lambda_max
    strategy = Strategy(args.strategy or Strategy.ENERGY)
    result = sweep(cfg.engine, lo, hi, args.points, strategy, cfg.integrator, args.workers)
    if args.out:
        csvio.write_csv(args.out, result.rows, csvio.SWEEP)
    if args.plot:
        _write_text(args.plot, render_plot(result.rows, "sweep", x_s=cfg.engine.x_s))
    best = result.argmin
    print(_summary(command="sweep", strategy=strategy.value, points=len(result.rows),
                   spacing=result.spacing, argmin_lambda=best.lam, argmin_x_max=best.x_max,
                   argmin_J=best.j_value))
    return EXIT_OK


def _calibrate(cfg: RunConfig, args):
    if args.target_lambda is None or args.lo is None or args.hi is None:
        raise ValidationError("calibrate needs --target-lambda, --from and --to (x_m range)")
    cal = calibrate_xm(cfg.engine, args.target_lambda, args.lo, args.hi,
                       integrator=cfg.integrator)
    if args.out:
        csvio.write_csv(args.out, cal.scan, csvio.CALIBRATION)
    if args.plot and cal.scan:
        _write_text(args.plot, render_plot(cal.scan, "calibration"))
    if args.report:
        strategy = Strategy(args.strategy or Strategy.ODE)
        engine = replace(cfg.engine, x_m=cal.x_m)
        runs = {}
        for lam0 in args.starts or [cfg.search.lambda_init]:
            search = replace(cfg.search, lambda_init=lam0)
            runs[lam0] = optimize_bore_scale(engine, search, strategy, cfg.integrator)
        _write_text(args.report, render_report(engine, cal, runs, args.reference_bore))
    print(_summary(command="calibrate", status=cal.status.value, target_lambda=cal.target_lambda,
                   x_m=cal.x_m, lambda_star=cal.lambda_star, residual=cal.residual))
    return EXIT_OK


_COMMANDS = {"simulate": _simulate, "optimize": _optimize, "sweep": _sweep,
             "calibrate": _calibrate}


def run_command(command: str, cfg: RunConfig, args) -> int:
    return _COMMANDS[command](cfg, args)


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = load_config(args.config)
        return run_command(args.command, cfg, args)
    except ValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (NumericalFailure, DomainError, ContractViolation) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL


if __name__ == "__main__":
    sys.exit(main())
