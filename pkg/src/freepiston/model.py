"""Position-dependent forces on the slider of a single-combustion-side linear engine.

The slider moves left to right with ``x`` measured from mid-stroke. The left
(combustion) cylinder expands and the right (kickback) cylinder compresses,
both polytropically with exponent ``n_poly``. Heat release in the combustion
cylinder adds a position-dependent force, and a constant Coulomb friction
opposes forward motion.

Every force depends on ``x`` only, so the ODE is conservative apart from
friction and its work integral has a closed form (:func:`work_integral`).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

from .errors import DomainError, ValidationError

__all__ = [
    "EngineParams",
    "ForceBreakdown",
    "piston_area",
    "pressure_left",
    "pressure_right",
    "net_force",
    "acceleration",
    "work_integral",
    "starts_moving",
]


@dataclass(frozen=True)
class EngineParams:
    """Physical parameters of the engine, strict SI units.

    ``p1_right`` is the kickback pressure with the piston at ``x = -x_s``.
    The kickback bore is derived as ``lam * bore_left``.
    """

    p1_left: float
    p1_right: float
    q_in: float
    x_s: float
    x_m: float
    bore_left: float
    n_poly: float
    mass: float
    friction: float = 0.0
    lam: float = 1.0

    def __post_init__(self):
        for name in ("p1_left", "p1_right", "q_in", "x_s", "x_m", "bore_left",
                     "n_poly", "mass", "friction", "lam"):
            value = getattr(self, name)
            if not isinstance(value, (int, float)) or not math.isfinite(value):
                raise ValidationError(f"{name} must be a finite number, got {value!r}")
        if not self.x_s > 0:
            raise ValidationError(f"x_s must be positive, got {self.x_s!r}")
        if not self.x_m > self.x_s:
            raise ValidationError(
                f"x_m must exceed x_s (x_m > x_s > 0), got x_m={self.x_m!r}, x_s={self.x_s!r}")
        for name in ("bore_left", "mass", "p1_left", "p1_right", "lam"):
            if not getattr(self, name) > 0:
                raise ValidationError(f"{name} must be positive, got {getattr(self, name)!r}")
        if not self.n_poly > 1:
            raise ValidationError(f"n_poly must exceed 1, got {self.n_poly!r}")
        if self.q_in < 0:
            raise ValidationError(f"q_in must be non-negative, got {self.q_in!r}")
        if self.friction < 0:
            raise ValidationError(f"friction must be non-negative, got {self.friction!r}")

    @property
    def bore_right(self) -> float:
        return self.lam * self.bore_left

    def with_lambda(self, lam: float) -> EngineParams:
        return replace(self, lam=lam)


@dataclass(frozen=True)
class ForceBreakdown:
    left_pressure_force: float
    right_pressure_force: float
    heat_force: float
    friction_force: float
    net: float

    @property
    def scale(self) -> float:
        """Sum of component magnitudes; the rounding scale of ``net``."""
        return (abs(self.left_pressure_force) + abs(self.right_pressure_force)
                + abs(self.heat_force) + abs(self.friction_force))


def piston_area(bore: float) -> float:
    if not bore > 0:
        raise ValidationError(f"bore must be positive, got {bore!r}")
    return math.pi * bore * bore / 4.0


def pressure_left(x: float, p: EngineParams) -> float:
    """Combustion-side pressure, equal to ``p1_left`` at ``x = 0``."""
    if x <= -p.x_m:
        raise DomainError(f"left cylinder volume vanishes at x={x!r} (x_m={p.x_m!r})")
    return p.p1_left * (p.x_m / (p.x_m + x)) ** p.n_poly


def pressure_right(x: float, p: EngineParams) -> float:
    """Kickback-side pressure, equal to ``p1_right`` at ``x = -x_s``."""
    if x >= p.x_m:
        raise DomainError(f"right cylinder volume vanishes at x={x!r} (x_m={p.x_m!r})")
    return p.p1_right * ((p.x_m + p.x_s) / (p.x_m - x)) ** p.n_poly


def _check_interior(x, p):
    if not -p.x_m < x < p.x_m:
        raise DomainError(f"x={x!r} outside the open interval (-x_m, x_m), x_m={p.x_m!r}")


def net_force(x: float, p: EngineParams) -> ForceBreakdown:
    """Force components on the slider at ``x`` during a left-to-right stroke."""
    _check_interior(x, p)
    area = piston_area(p.bore_left)
    n = p.n_poly
    left = pressure_left(x, p) * area
    right = p.lam ** 2 * pressure_right(x, p) * area
    heat = p.q_in * (n - 1.0) * (p.x_m - p.x_s) ** (n - 1.0) / (p.x_m + x) ** n
    fric = p.friction
    return ForceBreakdown(left, right, heat, fric, left - right + heat - fric)


def acceleration(x: float, p: EngineParams) -> float:
    return net_force(x, p).net / p.mass


def starts_moving(p: EngineParams) -> bool:
    """True when the net force at rest (``x = 0``) pushes the slider forward.

    A net force within rounding of zero counts as balanced; without this the
    analytically balanced bore scale would produce a spurious micro-stroke.
    """
    f = net_force(0.0, p)
    return f.net > 1e-12 * f.scale


def _shrink(u: float, m: float) -> float:
    # 1 - (1 + u)**m, accurate for small u
    return -math.expm1(m * math.log1p(u))


def work_integral(x: float, p: EngineParams) -> float:
    """Work done on the slider by the net force from 0 to ``x``.

    Equals the kinetic energy at ``x`` for a start from rest at ``x = 0``.
    """
    if not 0.0 <= x < p.x_m:
        raise DomainError(f"work integral needs 0 <= x < x_m, got x={x!r} (x_m={p.x_m!r})")
    n = p.n_poly
    xm, xs = p.x_m, p.x_s
    area = piston_area(p.bore_left)
    k = 1.0 - n
    # integral of (x_m + u)^-n over [0, x] = x_m^(1-n) * (1 - (1 + x/x_m)^(1-n)) / (n-1)
    expand = xm ** k * _shrink(x / xm, k) / (n - 1.0)
    # integral of (x_m - u)^-n over [0, x] = x_m^(1-n) * ((1 - x/x_m)^(1-n) - 1) / (n-1)
    compress = -xm ** k * _shrink(-x / xm, k) / (n - 1.0)
    left = p.p1_left * area * xm ** n * expand
    right = p.lam ** 2 * p.p1_right * area * (xm + xs) ** n * compress
    heat = p.q_in * (n - 1.0) * (xm - xs) ** (n - 1.0) * expand
    return left - right + heat - p.friction * x
