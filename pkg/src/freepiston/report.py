"""Markdown report for an ``x_m`` calibration against a reference bore scale."""

from __future__ import annotations

import math

from .model import EngineParams, piston_area
from .optimizer import CalibrationResult, CalibrationStatus, OptimizationResult

__all__ = ["limiting_bore_scale", "render_report"]


def limiting_bore_scale(p: EngineParams) -> float:
    """Optimal bore scale as ``x_m`` grows without bound.

    In that limit the heat work at ``x = x_s`` vanishes, each pressure work
    tends to ``p1 * A * x_s`` and friction keeps its ``-F * x_s``. Returns
    NaN when friction alone stalls the stroke.
    """
    ratio = (p.p1_left - p.friction / piston_area(p.bore_left)) / p.p1_right
    return math.sqrt(ratio) if ratio > 0 else math.nan


def render_report(p: EngineParams, cal: CalibrationResult,
                  runs: dict[float, OptimizationResult], reference_bore: float | None = None) -> str:
    lines = ["# Bore-scale reproduction report", ""]
    lines += [
        "## Physics",
        "",
        "| quantity | value |",
        "|---|---|",
        f"| p1_left | {p.p1_left:g} Pa |",
        f"| p1_right | {p.p1_right:g} Pa |",
        f"| q_in | {p.q_in:g} J |",
        f"| x_s | {p.x_s:g} m |",
        f"| bore_left | {p.bore_left:g} m |",
        f"| friction | {p.friction:g} N |",
        f"| polytropic exponent | {p.n_poly:g} |",
        "| mass | 1 kg (the optimal bore scale does not depend on it) |",
        "",
        "## Calibration of x_m",
        "",
        f"- target bore scale: {cal.target_lambda:.6g}",
        f"- x_m search range: [{cal.xm_lo:g}, {cal.xm_hi:g}] m",
        f"- status: **{cal.status.value}**",
    ]
    if cal.status is CalibrationStatus.CALIBRATED:
        lines += [f"- calibrated x_m: {cal.x_m:.9g} m",
                  f"- optimal bore scale at calibrated x_m: {cal.lambda_star:.9g}",
                  f"- residual: {cal.residual:+.3e}"]
    else:
        limit = limiting_bore_scale(p)
        lines += [f"- closest achievable optimal bore scale: {cal.lambda_star:.9g} "
                  f"at x_m = {cal.x_m:.9g} m",
                  f"- residual (achieved - target): {cal.residual:+.6g}",
                  f"- limiting bore scale for x_m -> infinity: {limit:.6g} "
                  f"(sqrt((p1_left - friction / area) / p1_right))"]
        if cal.target_lambda > limit and cal.residual < 0:
            lines.append("- the target lies above this limit as well as above every scanned value")
    lines.append("")

    if runs:
        lines += ["## Bore-scale search at the selected x_m", "",
                  "| initial bore scale | status | iterations | optimal bore scale | final J [m] |",
                  "|---|---|---|---|---|"]
        for lam0, res in sorted(runs.items()):
            lines.append(f"| {lam0:g} | {res.status.value} | {res.iterations} | "
                         f"{res.lambda_star:.9g} | {res.trace[-1].j_value:.3e} |")
        stars = [r.lambda_star for r in runs.values()]
        lines += ["", f"Spread of optimal bore scale across initialisations: "
                      f"{max(stars) - min(stars):.3e}", ""]

    lam = cal.target_lambda
    lines += ["## Kickback bore check", "",
              f"- target bore scale x bore_left = {lam:g} x {p.bore_left:g} m = "
              f"{lam * p.bore_left:.5f} m"]
    if reference_bore is not None:
        lines.append(f"- reference kickback bore: {reference_bore:g} m "
                     f"(difference {abs(lam * p.bore_left - reference_bore):.5f} m)")
    lines.append(f"- kickback bore at the achieved optimum: "
                 f"{cal.lambda_star * p.bore_left:.5f} m")

    if cal.scan:
        lines += ["", "## Scan of optimal bore scale over x_m", "",
                  "| x_m [m] | optimal bore scale |", "|---|---|"]
        lines += [f"| {x:.6g} | {lam_:.6g} |" for x, lam_ in cal.scan]
    return "\n".join(lines) + "\n"
