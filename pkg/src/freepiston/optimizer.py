"""Identification of the kickback bore scale that makes the stroke hit ``x_s``.

The search minimises ``J(lam) = |x_max(lam) - x_s|`` with a fixed-direction
walk whose step is contracted by a secant ratio whenever two consecutive
iterates bracket the target, and held otherwise.
"""

from __future__ import annotations

import enum
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from functools import partial

from .dynamics import IntegratorConfig, Termination, simulate_stroke
from .errors import NumericalFailure, ValidationError
from .model import EngineParams, starts_moving, work_integral

__all__ = [
    "Strategy",
    "StepRule",
    "SearchStatus",
    "CalibrationStatus",
    "SearchConfig",
    "IterationRecord",
    "OptimizationResult",
    "SweepRow",
    "SweepResult",
    "CalibrationResult",
    "x_max_energy",
    "evaluate_x_max",
    "search_direction",
    "update_step",
    "optimize_bore_scale",
    "sweep",
    "calibrate_xm",
]

# Below this, |x_max_j - x_max_next| is treated as flat and the step is held.
_FLAT_RESPONSE = 1e-15


class Strategy(str, enum.Enum):
    ODE = "ode"
    ENERGY = "energy"


class StepRule(str, enum.Enum):
    CONTRACTED = "Contracted"
    HELD = "Held"


class SearchStatus(str, enum.Enum):
    CONVERGED = "Converged"
    STEP_UNDERFLOW = "StepUnderflow"
    BOUND_STUCK = "BoundStuck"
    MAX_ITERATIONS = "MaxIterations"


class CalibrationStatus(str, enum.Enum):
    CALIBRATED = "Calibrated"
    NOT_ATTAINABLE = "NotAttainable"


@dataclass(frozen=True)
class SearchConfig:
    lambda_init: float = 1.0
    step_init: float = 0.1
    lambda_min: float = 0.1
    lambda_max: float = 5.0
    tol_j: float = 1e-6
    tol_s: float = 1e-9
    max_iter: int = 200

    def __post_init__(self):
        for name in ("lambda_init", "step_init", "lambda_min", "lambda_max", "tol_j", "tol_s"):
            value = getattr(self, name)
            if not isinstance(value, (int, float)) or not math.isfinite(value):
                raise ValidationError(f"{name} must be a finite number, got {value!r}")
        if not 0 < self.lambda_min <= self.lambda_init <= self.lambda_max:
            raise ValidationError(
                "bounds must satisfy 0 < lambda_min <= lambda_init <= lambda_max, got "
                f"{self.lambda_min!r}, {self.lambda_init!r}, {self.lambda_max!r}")
        for name in ("step_init", "tol_j", "tol_s"):
            if not getattr(self, name) > 0:
                raise ValidationError(f"{name} must be positive, got {getattr(self, name)!r}")
        if not isinstance(self.max_iter, int) or isinstance(self.max_iter, bool) or self.max_iter < 0:
            raise ValidationError(f"max_iter must be a non-negative integer, got {self.max_iter!r}")

    def clamp(self, lam: float) -> float:
        return min(max(lam, self.lambda_min), self.lambda_max)


@dataclass(frozen=True)
class IterationRecord:
    j: int
    lambda_j: float
    x_max_j: float
    p_j: int
    s_j: float
    j_value: float
    step_rule: StepRule
    clamped: bool


@dataclass
class OptimizationResult:
    trace: list[IterationRecord]
    lambda_star: float
    x_max_star: float
    status: SearchStatus

    @property
    def iterations(self) -> int:
        """Number of bore-scale updates performed."""
        return len(self.trace) - 1

    @property
    def converged(self) -> bool:
        return self.status is SearchStatus.CONVERGED


@dataclass(frozen=True)
class SweepRow:
    lam: float
    x_max: float
    j_value: float


@dataclass
class SweepResult:
    rows: list[SweepRow]
    spacing: float

    @property
    def argmin(self) -> SweepRow:
        return min(self.rows, key=lambda r: r.j_value)


@dataclass
class CalibrationResult:
    x_m: float
    lambda_star: float
    residual: float
    status: CalibrationStatus
    target_lambda: float
    xm_lo: float
    xm_hi: float
    scan: list[tuple[float, float]] = field(default_factory=list)


def x_max_energy(p: EngineParams, guard_eps: float = 1e-5, tol: float = 1e-12):
    """Stroke length from the first positive root of the closed-form work integral.

    Every force term decreases with ``x``, so the work integral is concave
    with positive slope at rest and has at most one positive root.

    Returns ``(x_max, Termination)``.
    """
    if not starts_moving(p):
        return 0.0, Termination.NO_MOTION
    x_lim = p.x_m - guard_eps
    if work_integral(x_lim, p) > 0.0:
        return x_lim, Termination.OVERTRAVEL
    lo, hi = 0.0, x_lim
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        if work_integral(mid, p) > 0.0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi), Termination.PEAK_FOUND


def evaluate_x_max(p: EngineParams, strategy: Strategy | str = Strategy.ODE,
                   integrator: IntegratorConfig | None = None) -> float:
    """Effective stroke length for the search direction rule.

    NoMotion maps to 0 and Overtravel to ``x_m - guard_eps``. A stroke that
    runs past the time horizon is reported as a numerical failure.
    """
    integrator = integrator or IntegratorConfig()
    if Strategy(strategy) is Strategy.ENERGY:
        integrator.check_against(p)
        x_max, _ = x_max_energy(p, integrator.guard_eps)
        return x_max
    try:
        result = simulate_stroke(p, integrator)
    except NumericalFailure as exc:
        raise NumericalFailure(f"evaluation failed at lambda={p.lam!r}: {exc}", x=exc.x) from exc
    if result.termination is Termination.HORIZON_EXCEEDED:
        raise NumericalFailure(
            f"stroke at lambda={p.lam!r} did not reach v = 0 within t_max={integrator.t_max!r}",
            x=result.x_max)
    return result.x_max


def search_direction(x_max: float, x_s: float) -> int:
    """+1 (stiffen the kickback) when the stroke reaches ``x_s``, else -1."""
    return 1 if x_s <= x_max else -1


def update_step(s_j: float, x_max_j: float, x_max_next: float, x_s: float):
    """Next search step and the rule that produced it.

    The step contracts by ``|x_s - x_max_next| / |x_max_j - x_max_next|``
    when the two strokes bracket ``x_s``, and is held otherwise.
    """
    bracket = (x_s - x_max_j) * (x_s - x_max_next)
    spread = abs(x_max_j - x_max_next)
    if bracket < 0 and spread >= _FLAT_RESPONSE:
        return s_j * abs(x_s - x_max_next) / spread, StepRule.CONTRACTED
    return s_j, StepRule.HELD


def optimize_bore_scale(p: EngineParams, sc: SearchConfig | None = None,
                        strategy: Strategy | str = Strategy.ODE,
                        integrator: IntegratorConfig | None = None) -> OptimizationResult:
    """Search for the bore scale whose stroke peaks at ``p.x_s``.

    ``p.lam`` is ignored; iterates start at ``sc.lambda_init`` and are
    clamped into ``[sc.lambda_min, sc.lambda_max]`` after each update.
    """
    sc = sc or SearchConfig()
    integrator = integrator or IntegratorConfig()
    evaluate = partial(evaluate_x_max, strategy=strategy, integrator=integrator)
    x_s = p.x_s

    lam, s = sc.lambda_init, sc.step_init
    rule, clamped = StepRule.HELD, False
    x_max = evaluate(p.with_lambda(lam))
    trace: list[IterationRecord] = []
    for j in range(sc.max_iter + 1):
        j_value = abs(x_max - x_s)
        direction = search_direction(x_max, x_s)
        trace.append(IterationRecord(j, lam, x_max, direction, s, j_value, rule, clamped))
        if j_value <= sc.tol_j:
            status = SearchStatus.CONVERGED
            break
        if s <= sc.tol_s:
            status = SearchStatus.STEP_UNDERFLOW
            break
        if (clamped and len(trace) > 1 and trace[-2].clamped
                and trace[-2].lambda_j == lam):
            status = SearchStatus.BOUND_STUCK
            break
        if j == sc.max_iter:
            status = SearchStatus.MAX_ITERATIONS
            break
        raw = lam + direction * s
        lam_next = sc.clamp(raw)
        clamped = lam_next != raw
        x_next = evaluate(p.with_lambda(lam_next))
        s, rule = update_step(s, x_max, x_next, x_s)
        lam, x_max = lam_next, x_next
    return OptimizationResult(trace, lam, x_max, status)


def _sweep_point(p, strategy, integrator, lam):
    return evaluate_x_max(p.with_lambda(lam), strategy, integrator)


def sweep(p: EngineParams, lambda_lo: float, lambda_hi: float, points: int,
          strategy: Strategy | str = Strategy.ENERGY,
          integrator: IntegratorConfig | None = None, workers: int = 1) -> SweepResult:
    """Brute-force evaluation of the stroke on a uniform bore-scale grid.

    With ``workers > 1`` the grid is evaluated in a process pool; rows keep
    grid order either way.
    """
    if not 0 < lambda_lo < lambda_hi:
        raise ValidationError(
            f"sweep needs 0 < lambda_lo < lambda_hi, got {lambda_lo!r}, {lambda_hi!r}")
    if not isinstance(points, int) or points < 2:
        raise ValidationError(f"points must be an integer >= 2, got {points!r}")
    spacing = (lambda_hi - lambda_lo) / (points - 1)
    grid = [lambda_lo + i * spacing for i in range(points - 1)] + [lambda_hi]
    fn = partial(_sweep_point, p, Strategy(strategy), integrator or IntegratorConfig())
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            xs = list(pool.map(fn, grid, chunksize=max(1, points // (4 * workers))))
    else:
        xs = [fn(lam) for lam in grid]
    rows = [SweepRow(lam, x, abs(x - p.x_s)) for lam, x in zip(grid, xs)]
    return SweepResult(rows, spacing)


def _calibration_search(target_lambda):
    return SearchConfig(lambda_init=target_lambda, step_init=0.1, lambda_min=1e-3,
                        lambda_max=100.0, tol_j=1e-10, tol_s=1e-14, max_iter=1000)


def calibrate_xm(p: EngineParams, target_lambda: float, xm_lo: float, xm_hi: float,
                 lambda_tol: float = 1e-4, scan_points: int = 50,
                 search: SearchConfig | None = None,
                 integrator: IntegratorConfig | None = None) -> CalibrationResult:
    """Find the ``x_m`` whose optimal bore scale equals ``target_lambda``.

    The optimal bore scale does not depend on the slider mass, so mass is
    fixed at 1 kg. When the target is not bracketed on ``[xm_lo, xm_hi]`` the
    result is NotAttainable and carries the scanned ``x_m`` with the closest
    bore scale and its residual.
    """
    if not p.x_s < xm_lo < xm_hi:
        raise ValidationError(
            f"calibration range must satisfy x_s < xm_lo < xm_hi, got x_s={p.x_s!r}, "
            f"[{xm_lo!r}, {xm_hi!r}]")
    if not target_lambda > 0:
        raise ValidationError(f"target_lambda must be positive, got {target_lambda!r}")
    base = replace(p, mass=1.0)
    search = search or _calibration_search(target_lambda)
    integrator = integrator or IntegratorConfig()

    def lambda_star(x_m):
        q = replace(base, x_m=x_m)
        guard = min(integrator.guard_eps, 0.25 * (x_m - q.x_s))
        res = optimize_bore_scale(q, search, Strategy.ENERGY, replace(integrator, guard_eps=guard))
        if not res.converged:
            raise NumericalFailure(
                f"inner bore-scale search ended {res.status.value} at x_m={x_m!r}")
        return res.lambda_star

    def done(x_m, lam, status, scan=()):
        return CalibrationResult(x_m, lam, lam - target_lambda, status, target_lambda,
                                 xm_lo, xm_hi, list(scan))

    f_lo = lambda_star(xm_lo) - target_lambda
    if abs(f_lo) <= lambda_tol:
        return done(xm_lo, f_lo + target_lambda, CalibrationStatus.CALIBRATED)
    f_hi = lambda_star(xm_hi) - target_lambda
    if abs(f_hi) <= lambda_tol:
        return done(xm_hi, f_hi + target_lambda, CalibrationStatus.CALIBRATED)

    step = (xm_hi - xm_lo) / (scan_points - 1)
    xs = [xm_lo + i * step for i in range(scan_points - 1)] + [xm_hi]
    scan = [(xm_lo, f_lo + target_lambda)]
    scan += [(x, lambda_star(x)) for x in xs[1:-1]]
    scan.append((xm_hi, f_hi + target_lambda))

    if f_lo * f_hi > 0:
        x_best, lam_best = min(scan, key=lambda row: abs(row[1] - target_lambda))
        return done(x_best, lam_best, CalibrationStatus.NOT_ATTAINABLE, scan)

    lo, hi = xm_lo, xm_hi
    x_mid, lam_mid = lo, f_lo + target_lambda
    for _ in range(200):
        x_mid = 0.5 * (lo + hi)
        lam_mid = lambda_star(x_mid)
        f_mid = lam_mid - target_lambda
        if abs(f_mid) <= lambda_tol or hi - lo <= 1e-12 * hi:
            break
        if (f_mid > 0) == (f_hi > 0):
            hi, f_hi = x_mid, f_mid
        else:
            lo, f_lo = x_mid, f_mid
    return done(x_mid, lam_mid, CalibrationStatus.CALIBRATED, scan)
