"""Single left-to-right stroke: integrate from rest at x = 0 to the first v = 0."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

from . import _dopri
from .errors import ContractViolation, NumericalFailure, ValidationError
from .model import EngineParams, acceleration, starts_moving

__all__ = [
    "IntegratorConfig",
    "Sample",
    "Trajectory",
    "Termination",
    "StrokeResult",
    "simulate_stroke",
    "locate_event",
]

_SAFETY = 0.9
_MAX_GROWTH = 5.0
_MIN_SHRINK = 0.2
# attempted steps per stroke before giving up
MAX_STEPS = 50_000


@dataclass(frozen=True)
class IntegratorConfig:
    dt_init: float = 1e-6
    rel_tol: float = 1e-9
    abs_tol: float = 1e-12
    t_max: float = 1.0
    guard_eps: float = 1e-5
    event_tol: float = 1e-9

    def __post_init__(self):
        for name in ("dt_init", "rel_tol", "abs_tol", "t_max", "guard_eps", "event_tol"):
            value = getattr(self, name)
            if not isinstance(value, (int, float)) or not (math.isfinite(value) and value > 0):
                raise ValidationError(f"{name} must be a positive finite number, got {value!r}")

    def check_against(self, p: EngineParams) -> None:
        if not self.guard_eps < (p.x_m - p.x_s) / 2:
            raise ValidationError(
                f"guard_eps={self.guard_eps!r} must be below (x_m - x_s)/2 = {(p.x_m - p.x_s) / 2!r}")


class Termination(str, enum.Enum):
    PEAK_FOUND = "PeakFound"
    NO_MOTION = "NoMotion"
    OVERTRAVEL = "Overtravel"
    HORIZON_EXCEEDED = "HorizonExceeded"


@dataclass(frozen=True)
class Sample:
    t: float
    x: float
    v: float
    a: float


@dataclass
class Trajectory:
    samples: list[Sample] = field(default_factory=list)

    def __len__(self):
        return len(self.samples)

    def __iter__(self):
        return iter(self.samples)

    def __getitem__(self, item):
        return self.samples[item]

    @property
    def t(self):
        return [s.t for s in self.samples]

    @property
    def x(self):
        return [s.x for s in self.samples]

    @property
    def v(self):
        return [s.v for s in self.samples]


@dataclass
class StrokeResult:
    x_max: float
    t_peak: float
    trajectory: Trajectory
    termination: Termination


def locate_event(interp, lo, hi, event_tol, max_iter=200):
    """Refine a ``v = 0`` crossing between two ``(t, x, v)`` states.

    ``interp(t)`` returns ``(x, v)`` inside the bracket. ``lo`` must have
    ``v > 0`` and ``hi`` must have ``v <= 0``. Uses regula falsi with the
    Illinois modification and stops once the bracket spans at most
    ``event_tol`` in ``x`` and the best end has ``|v| <= event_tol``.

    Returns ``(t_peak, x_max)``.
    """
    t0, x0, v0 = lo
    t1, x1, v1 = hi
    if not (v0 > 0 and v1 <= 0 and t0 < t1):
        raise ContractViolation(
            f"bracket does not straddle v = 0 from above: v({t0!r})={v0!r}, v({t1!r})={v1!r}")
    # secant weights, scaled down on the side retained twice in a row
    w0, w1 = v0, v1
    side = 0
    for _ in range(max_iter):
        if v1 == 0.0:
            return t1, x1
        best = (t0, x0) if abs(v0) < abs(v1) else (t1, x1)
        if abs(x1 - x0) <= event_tol and min(abs(v0), abs(v1)) <= event_tol:
            return best
        t = t1 - w1 * (t1 - t0) / (w1 - w0)
        if not t0 < t < t1:
            t = 0.5 * (t0 + t1)
            if not t0 < t < t1:
                return best
        x, v = interp(t)
        if v > 0:
            t0, x0, v0, w0 = t, x, v, v
            if side == -1:
                w1 *= 0.5
            side = -1
        else:
            t1, x1, v1, w1 = t, x, v, v
            if side == 1:
                w0 *= 0.5
            side = 1
    return (t0, x0) if abs(v0) < abs(v1) else (t1, x1)


def simulate_stroke(p: EngineParams, cfg: IntegratorConfig | None = None) -> StrokeResult:
    """Integrate the stroke from rest at ``x = 0`` until ``v`` returns to zero.

    Raises :class:`NumericalFailure` when the step size underflows or the
    step budget runs out.
    """
    cfg = cfg or IntegratorConfig()
    cfg.check_against(p)

    a0 = acceleration(0.0, p)
    traj = Trajectory([Sample(0.0, 0.0, 0.0, a0)])
    if not starts_moving(p):
        return StrokeResult(0.0, 0.0, traj, Termination.NO_MOTION)

    x_lim = p.x_m - cfg.guard_eps
    accel = lambda xs: acceleration(xs, p)  # noqa: E731
    rtol, atol = cfg.rel_tol, cfg.abs_tol

    t, x, v, a = 0.0, 0.0, 0.0, a0
    h = min(cfg.dt_init, cfg.t_max)
    for _ in range(MAX_STEPS):
        if t + h > cfg.t_max:
            h = cfg.t_max - t
        if h <= 4 * math.ulp(max(t, 1e-300)) or t + h == t:
            raise NumericalFailure(f"step size underflow at t={t!r}, x={x!r}", x=x)
        try:
            xn, vn, an, ex, ev, dense = _dopri.step(accel, x, v, a, h, -x_lim, x_lim)
        except _dopri.StageOutOfRange:
            h *= 0.5
            continue
        sx = atol + rtol * max(abs(x), abs(xn))
        sv = atol + rtol * max(abs(v), abs(vn))
        err = math.sqrt(0.5 * ((ex / sx) ** 2 + (ev / sv) ** 2))
        if err > 1.0 or (v == 0.0 and vn <= 0.0):
            # the first step must leave rest with v > 0 to open a bracket
            h *= max(_MIN_SHRINK, _SAFETY * err ** -0.2) if err > 1.0 else 0.1
            continue

        if v > 0.0 and vn <= 0.0:
            h_step, t_start = h, t

            def interp(tt):
                return _dopri.dense_eval(dense, (tt - t_start) / h_step)

            t_pk, x_pk = locate_event(interp, (t, x, v), (t + h, xn, vn), cfg.event_tol)
            _, v_pk = interp(t_pk)
            traj.samples.append(Sample(t_pk, x_pk, v_pk, acceleration(x_pk, p)))
            return StrokeResult(x_pk, t_pk, traj, Termination.PEAK_FOUND)

        t, x, v, a = t + h, xn, vn, an
        traj.samples.append(Sample(t, x, v, a))
        if x_lim - x <= cfg.event_tol:
            return StrokeResult(x_lim, t, traj, Termination.OVERTRAVEL)
        if t >= cfg.t_max:
            return StrokeResult(max(s.x for s in traj.samples), t, traj,
                                Termination.HORIZON_EXCEEDED)
        factor = _MAX_GROWTH if err == 0.0 else min(_MAX_GROWTH, _SAFETY * err ** -0.2)
        h *= max(_MIN_SHRINK, factor)
    raise NumericalFailure(f"no v = 0 crossing after {MAX_STEPS} step attempts, stalled at "
                           f"t={t!r}, x={x!r}", x=x)
