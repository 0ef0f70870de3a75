"""Hand-written SVG for the base diagram and the annulus view of a path.

Layout: every panel is 360 x 360 user units with a 40-unit margin, placed
side by side in a viewBox of width 360 * panels and height 360. Panel 0 is
the base B with s to the right and lam upwards; panel 1 (only with a path)
is the z-plane, centred on the origin. Numbers are written with three
decimals so output is byte-stable.
"""
from __future__ import annotations

import math
from typing import Sequence

import numpy as np

from .branes import LiftedPath, reference_path
from .geometry_core import SurfaceSpec

__all__ = ["PANEL", "MARGIN", "base_diagram_svg"]

PANEL = 360
MARGIN = 40


def _f(x: float) -> str:
    out = f"{x:.3f}"
    return "0.000" if out == "-0.000" else out


class _Canvas:
    def __init__(self, panels: int):
        self.width = PANEL * panels
        self.items: list[str] = []

    def line(self, x1, y1, x2, y2, stroke="#000", width=1.0, dash=None, cls=None):
        extra = f' stroke-dasharray="{dash}"' if dash else ""
        extra += f' class="{cls}"' if cls else ""
        self.items.append(
            f'<line x1="{_f(x1)}" y1="{_f(y1)}" x2="{_f(x2)}" y2="{_f(y2)}" '
            f'stroke="{stroke}" stroke-width="{_f(width)}"{extra}/>'
        )

    def text(self, x, y, s, size=12, anchor="middle"):
        self.items.append(
            f'<text x="{_f(x)}" y="{_f(y)}" font-size="{size}" text-anchor="{anchor}" '
            f'font-family="serif">{s}</text>'
        )

    def cross(self, x, y, r=5.0):
        self.items.append(
            f'<g class="node"><line x1="{_f(x - r)}" y1="{_f(y - r)}" x2="{_f(x + r)}" y2="{_f(y + r)}" '
            f'stroke="#c00" stroke-width="2.000"/><line x1="{_f(x - r)}" y1="{_f(y + r)}" '
            f'x2="{_f(x + r)}" y2="{_f(y - r)}" stroke="#c00" stroke-width="2.000"/></g>'
        )

    def circle(self, cx, cy, r, stroke="#000", fill="none", dash=None, cls=None):
        extra = f' stroke-dasharray="{dash}"' if dash else ""
        extra += f' class="{cls}"' if cls else ""
        self.items.append(
            f'<circle cx="{_f(cx)}" cy="{_f(cy)}" r="{_f(r)}" stroke="{stroke}" fill="{fill}"{extra}/>'
        )

    def polyline(self, pts: Sequence[tuple[float, float]], stroke="#000", width=1.5, cls=None):
        coords = " ".join(f"{_f(x)},{_f(y)}" for x, y in pts)
        extra = f' class="{cls}"' if cls else ""
        self.items.append(
            f'<polyline points="{coords}" fill="none" stroke="{stroke}" stroke-width="{_f(width)}"{extra}/>'
        )

    def render(self) -> str:
        head = (
            '<?xml version="1.0" encoding="UTF-8"?>\n'
            f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{self.width}" '
            f'height="{PANEL}" viewBox="0 0 {self.width} {PANEL}">\n'
            f'<rect x="0" y="0" width="{self.width}" height="{PANEL}" fill="#fff"/>\n'
        )
        return head + "\n".join(self.items) + "\n</svg>\n"


def _base_panel(canvas: _Canvas, spec: SurfaceSpec) -> None:
    s = spec.log_moduli
    span = max(s[-1] - s[0], 1.0)
    s_lo, s_hi = s[0] - 0.25 * span, s[-1] + 0.25 * span
    lam_hi = 0.5 * span
    inner = PANEL - 2 * MARGIN

    def to_xy(sv: float, lam: float) -> tuple[float, float]:
        x = MARGIN + (sv - s_lo) / (s_hi - s_lo) * inner
        y = PANEL / 2 - lam / lam_hi * (inner / 2)
        return x, y

    x0, y0 = to_xy(s_lo, 0.0)
    x1, _ = to_xy(s_hi, 0.0)
    canvas.line(x0, y0, x1, y0, cls="axis-s")
    ax, _ = to_xy(max(s_lo, min(0.0, s_hi)), 0.0)
    canvas.line(ax, MARGIN, ax, PANEL - MARGIN, cls="axis-lambda")
    canvas.text(x1 + 12, y0 + 4, "s")
    canvas.text(ax, MARGIN - 8, "λ")
    for k, sk in enumerate(s):
        x, y = to_xy(sk, 0.0)
        canvas.line(x, MARGIN, x, PANEL - MARGIN, stroke="#555", dash="6,4", cls="wall")
        canvas.cross(x, y)
        canvas.text(x, y + 20, f"s<tspan baseline-shift=\"sub\" font-size=\"9\">{k}</tspan>")


def _annulus_panel(canvas: _Canvas, spec: SurfaceSpec, path: LiftedPath, samples: int) -> None:
    i = path.index
    s = spec.log_moduli
    radius = math.exp(max(s[i], path.s.max()))
    scale = (PANEL / 2 - MARGIN) / radius
    cx, cy = PANEL + PANEL / 2, PANEL / 2

    def to_xy(z: complex) -> tuple[float, float]:
        return cx + z.real * scale, cy - z.imag * scale

    canvas.line(PANEL + MARGIN / 2, cy, 2 * PANEL - MARGIN / 2, cy, stroke="#999")
    canvas.line(cx, MARGIN / 2, cx, PANEL - MARGIN / 2, stroke="#999")
    for k in (i - 1, i):
        canvas.circle(cx, cy, math.exp(s[k]) * scale, stroke="#555", dash="4,3", cls="annulus")
    for k, a in enumerate(spec.roots):
        if abs(a) <= radius * 1.0001:
            x, y = to_xy(a)
            canvas.circle(x, y, 3.0, stroke="#000", fill="#000", cls="root")
            canvas.text(x + 10, y - 6, f"a<tspan baseline-shift=\"sub\" font-size=\"9\">{k}</tspan>", anchor="start")
    t = np.linspace(0.0, path.num_segments, samples * path.num_segments + 1)
    ref = reference_path(spec, i)
    tr = np.linspace(0.0, ref.num_segments, samples + 1)
    canvas.polyline([to_xy(complex(z)) for z in ref.z(tr)], stroke="#888", width=1.0, cls="reference")
    canvas.polyline([to_xy(complex(z)) for z in path.z(t)], stroke="#06c", width=1.5, cls="path")


def base_diagram_svg(spec: SurfaceSpec, path: LiftedPath | None = None, samples: int = 200) -> str:
    """SVG of the base with nodes and walls, plus the annulus view when ``path`` is given."""
    canvas = _Canvas(2 if path is not None else 1)
    _base_panel(canvas, spec)
    if path is not None:
        _annulus_panel(canvas, spec, path, samples)
    return canvas.render()
