"""Self-contained SVG line charts for traces, trajectories, sweeps and scans."""

from __future__ import annotations

import math
from xml.sax.saxutils import escape

from .errors import ValidationError

__all__ = ["render_plot", "nice_ticks"]

WIDTH = 640
PANEL_HEIGHT = 220
MARGIN_LEFT, MARGIN_RIGHT, MARGIN_TOP, MARGIN_BOTTOM = 78, 20, 34, 44
COLORS = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd")


def nice_ticks(lo, hi, target=5):
    """Round tick positions covering ``[lo, hi]``; returns ``(ticks, lo, hi)``."""
    if not (math.isfinite(lo) and math.isfinite(hi)):
        raise ValidationError("cannot scale non-finite data")
    if hi == lo:
        pad = abs(lo) * 0.05 or 1.0
        lo, hi = lo - pad, hi + pad
    raw = (hi - lo) / target
    mag = 10 ** math.floor(math.log10(raw))
    step = next(m * mag for m in (1, 2, 2.5, 5, 10) if m * mag >= raw)
    first = math.floor(lo / step + 1e-9) * step
    last = math.ceil(hi / step - 1e-9) * step
    count = int(round((last - first) / step))
    ticks = [first + i * step for i in range(count + 1)]
    return ticks, first, last


def _fmt(value):
    if value == 0:
        return "0"
    return f"{value:.4g}"


class _Panel:
    def __init__(self, top, xlabel, ylabel):
        self.top = top
        self.xlabel = xlabel
        self.ylabel = ylabel
        self.series = []  # (xs, ys, label, color)
        self.references = []  # (y, label)

    def add(self, xs, ys, label, color):
        self.series.append((list(xs), list(ys), label, color))

    def render(self):
        x0, x1 = MARGIN_LEFT, WIDTH - MARGIN_RIGHT
        y0, y1 = self.top + MARGIN_TOP, self.top + PANEL_HEIGHT - MARGIN_BOTTOM
        all_x = [x for xs, *_ in self.series for x in xs]
        all_y = [y for _, ys, *_ in self.series for y in ys] + [r[0] for r in self.references]
        xticks, xlo, xhi = nice_ticks(min(all_x), max(all_x))
        yticks, ylo, yhi = nice_ticks(min(all_y), max(all_y))

        def sx(x):
            return x0 + (x - xlo) / (xhi - xlo) * (x1 - x0)

        def sy(y):
            return y1 - (y - ylo) / (yhi - ylo) * (y1 - y0)

        out = [f'<g class="panel">',
               f'<rect x="{x0}" y="{y0}" width="{x1 - x0}" height="{y1 - y0}" '
               f'fill="none" stroke="#444" stroke-width="1"/>']
        for t in xticks:
            px = sx(t)
            out.append(f'<line x1="{px:.2f}" y1="{y1}" x2="{px:.2f}" y2="{y1 + 5}" stroke="#444"/>')
            out.append(f'<text x="{px:.2f}" y="{y1 + 18}" font-size="11" '
                       f'text-anchor="middle">{_fmt(t)}</text>')
        for t in yticks:
            py = sy(t)
            out.append(f'<line x1="{x0 - 5}" y1="{py:.2f}" x2="{x0}" y2="{py:.2f}" stroke="#444"/>')
            out.append(f'<text x="{x0 - 8}" y="{py + 4:.2f}" font-size="11" '
                       f'text-anchor="end">{_fmt(t)}</text>')
        out.append(f'<text x="{(x0 + x1) / 2:.1f}" y="{y1 + 36}" font-size="12" '
                   f'text-anchor="middle">{escape(self.xlabel)}</text>')
        cy = (y0 + y1) / 2
        out.append(f'<text x="16" y="{cy:.1f}" font-size="12" text-anchor="middle" '
                   f'transform="rotate(-90 16 {cy:.1f})">{escape(self.ylabel)}</text>')

        for y, label in self.references:
            py = sy(y)
            out.append(f'<line x1="{x0}" y1="{py:.2f}" x2="{x1}" y2="{py:.2f}" stroke="#888" '
                       f'stroke-dasharray="5,4"><title>{escape(label)}</title></line>')

        legend = []
        for xs, ys, label, color in self.series:
            if len(xs) == 1:
                out.append(f'<circle cx="{sx(xs[0]):.2f}" cy="{sy(ys[0]):.2f}" r="3.5" '
                           f'fill="{color}"/>')
            else:
                pts = " ".join(f"{sx(x):.2f},{sy(y):.2f}" for x, y in zip(xs, ys))
                out.append(f'<polyline fill="none" stroke="{color}" stroke-width="1.6" '
                           f'points="{pts}"/>')
            legend.append((label, color))
        for y, label in self.references:
            legend.append((label, "#888"))
        for i, (label, color) in enumerate(legend):
            lx, ly = x1 - 150, y0 + 8 + 16 * i
            out.append(f'<rect x="{lx}" y="{ly}" width="12" height="4" fill="{color}"/>')
            out.append(f'<text x="{lx + 18}" y="{ly + 6}" font-size="11">{escape(label)}</text>')
        out.append("</g>")
        return out


def _document(title, panels):
    height = PANEL_HEIGHT * len(panels) + 10
    body = [f'<?xml version="1.0" encoding="UTF-8"?>',
            f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{height}" '
            f'viewBox="0 0 {WIDTH} {height}" font-family="sans-serif">',
            f'<rect width="{WIDTH}" height="{height}" fill="white"/>',
            f'<text x="{WIDTH / 2}" y="20" font-size="14" text-anchor="middle">'
            f'{escape(title)}</text>']
    for panel in panels:
        body.extend(panel.render())
    body.append("</svg>")
    return "\n".join(body) + "\n"


def render_plot(series, kind, x_s=None, title=None):
    """Render ``series`` as an SVG document string.

    ``kind`` selects the layout:

    * ``"trace"``: iteration records; stroke length and bore scale versus
      iteration in two stacked panels.
    * ``"trajectory"``: trajectory samples; position and velocity versus time.
    * ``"sweep"``: sweep rows; stroke length versus bore scale.
    * ``"calibration"``: ``(x_m, lambda_star)`` pairs.

    ``x_s``, when given, is drawn as a dashed reference on stroke-length axes.
    """
    rows = list(series)
    if not rows:
        raise ValidationError("cannot plot an empty series")
    if kind == "trace":
        it = [r.j for r in rows]
        top = _Panel(0, "iteration", "max x [m]")
        top.add(it, [r.x_max_j for r in rows], "max x", COLORS[0])
        bottom = _Panel(PANEL_HEIGHT, "iteration", "bore scale [-]")
        bottom.add(it, [r.lambda_j for r in rows], "bore scale", COLORS[1])
        panels = [top, bottom]
        default_title = "Stroke length and bore scale vs iteration"
    elif kind == "trajectory":
        ts = [s.t for s in rows]
        top = _Panel(0, "time [s]", "position [m]")
        top.add(ts, [s.x for s in rows], "x", COLORS[0])
        bottom = _Panel(PANEL_HEIGHT, "time [s]", "velocity [m/s]")
        bottom.add(ts, [s.v for s in rows], "v", COLORS[1])
        panels = [top, bottom]
        default_title = "Piston position and velocity"
    elif kind == "sweep":
        top = _Panel(0, "bore scale [-]", "max x [m]")
        top.add([r.lam for r in rows], [r.x_max for r in rows], "max x", COLORS[0])
        panels = [top]
        default_title = "Stroke length vs bore scale"
    elif kind == "calibration":
        top = _Panel(0, "x_m [m]", "optimal bore scale [-]")
        top.add([r[0] for r in rows], [r[1] for r in rows], "optimal bore scale", COLORS[2])
        panels = [top]
        default_title = "Optimal bore scale vs maximum half-stroke"
    else:
        raise ValidationError(f"unknown plot kind {kind!r}")
    if x_s is not None and kind in ("trace", "trajectory", "sweep"):
        panels[0].references.append((x_s, "x_s"))
    return _document(title or default_title, panels)
