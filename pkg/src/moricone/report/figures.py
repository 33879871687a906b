"""Fan diagrams of a decomposition: SVG through matplotlib, and plain ASCII.

Rays are drawn along their exact directions scaled to unit length.  Float
coordinates here are for display only and never feed back into the engine.
"""

from __future__ import annotations

import io
import math

import matplotlib
from matplotlib.figure import Figure
from matplotlib.patches import Wedge

from .. import cone2
from ..cone2 import Ray
from ..engine import DecompositionReport
from .render import format_class

SHADES = ("#dbe8f6", "#f6e7d2")
SVG_RC = {
    "svg.hashsalt": "moricone",
    "svg.fonttype": "none",
    "font.family": "DejaVu Sans",
    "path.simplify": False,
}


def _angle(r: Ray) -> float:
    return math.degrees(math.atan2(r.v, r.u))


def _ccw(a: Ray, b: Ray) -> tuple[Ray, Ray]:
    return (a, b) if cone2.cross(a, b) > 0 else (b, a)


def fan_rays(report: DecompositionReport) -> list[tuple[Ray, str, bool]]:
    """Rays to draw, counterclockwise from the first basis direction.

    Each item is ``(ray, label, emphasized)``; Mov and Eff boundary rays are
    emphasized.  A boundary ray carrying no divisor gets a descriptive label.
    """
    boundary = {report.side_d.mov_edge, report.side_dp.mov_edge,
                report.side_d.eff_edge.ray, report.side_dp.eff_edge.ray}
    labelled = {lr.ray: ",".join(lr.labels) for lr in report.rays}
    for r in sorted(boundary - labelled.keys(), key=cone2.angle_key):
        labelled[r] = format_class(r, report.basis_labels)
    ordered = sorted(labelled, key=cone2.angle_key)
    return [(r, labelled[r], r in boundary) for r in ordered]


def _chambers_ccw(report: DecompositionReport):
    out = [(ch.stage_name, *_ccw(ch.left, ch.right)) for ch in report.chambers]
    return sorted(out, key=lambda c: cone2.angle_key(c[1]))


def draw_fan(report: DecompositionReport, width: int = 640, height: int = 640) -> Figure:
    fig = Figure(figsize=(width / 100, height / 100), dpi=100)
    ax = fig.add_axes((0, 0, 1, 1))
    ax.set_xlim(-1.45, 1.45)
    ax.set_ylim(-1.45, 1.45)
    ax.set_aspect("equal")
    ax.set_axis_off()

    for i, (name, a, b) in enumerate(_chambers_ccw(report)):
        t1, t2 = _angle(a), _angle(b)
        if t2 < t1:
            t2 += 360.0
        patch = Wedge((0, 0), 0.95, t1, t2, facecolor=SHADES[i % 2], edgecolor="none")
        patch.set_gid(f"chamber-{name}")
        ax.add_patch(patch)
        mid = math.radians((t1 + t2) / 2)
        ax.text(0.6 * math.cos(mid), 0.6 * math.sin(mid), f"Nef({name})", fontsize=7,
                ha="center", va="center", rotation=0)

    prev = None
    for r, label, emphasized in fan_rays(report):
        norm = math.hypot(r.u, r.v)
        x, y = r.u / norm, r.v / norm
        line, = ax.plot([0, x], [0, y], color="black", linewidth=2.4 if emphasized else 0.9)
        line.set_gid(f"ray-{label}")
        # stagger labels of nearly parallel rays
        theta = _angle(r)
        radius = 1.12
        if prev is not None and abs(theta - prev[0]) < 8 and prev[1] == 1.12:
            radius = 1.28
        prev = (theta, radius)
        text = ax.text(radius * x, radius * y, label, fontsize=10, ha="center", va="center")
        text.set_gid(f"label-{label}")
    ax.plot([0], [0], marker="o", markersize=3, color="black")
    ax.set_title(report.scenario, fontsize=9, y=0.96)
    return fig


def render_svg(report: DecompositionReport, width: int = 640, height: int = 640) -> bytes:
    with matplotlib.rc_context(SVG_RC):
        fig = draw_fan(report, width, height)
        buf = io.BytesIO()
        fig.savefig(buf, format="svg", metadata={"Date": None, "Creator": "moricone"})
    return buf.getvalue()


def save_figure(report: DecompositionReport, path, width: int = 640, height: int = 640) -> None:
    """Write the fan diagram to ``path``; the format follows the file suffix."""
    path = str(path)
    if path.endswith(".svg"):
        with open(path, "wb") as fh:
            fh.write(render_svg(report, width, height))
        return
    with matplotlib.rc_context(SVG_RC):
        fig = draw_fan(report, width, height)
        fig.savefig(path, metadata={"Software": "moricone"} if path.endswith(".png") else None)


# -- ASCII ------------------------------------------------------------------------

COLS, ROWS = 71, 27
X_SCALE, Y_SCALE = 25.0, 10.0


def _cell(x: float, y: float) -> tuple[int, int]:
    return round(ROWS // 2 - y * Y_SCALE), round(COLS // 2 + x * X_SCALE)


def _in_wedge(theta: float, t1: float, t2: float) -> bool:
    span = (t2 - t1) % 360.0
    return (theta - t1) % 360.0 <= span


def render_ascii(report: DecompositionReport) -> str:
    grid = [[" "] * COLS for _ in range(ROWS)]
    chambers = _chambers_ccw(report)
    marks = ".:"
    for row in range(ROWS):
        for col in range(COLS):
            x = (col - COLS // 2) / X_SCALE
            y = (ROWS // 2 - row) / Y_SCALE
            rad = math.hypot(x, y)
            if rad == 0 or rad > 0.95:
                continue
            theta = math.degrees(math.atan2(y, x))
            for i, (_, a, b) in enumerate(chambers):
                if _in_wedge(theta, _angle(a), _angle(b)):
                    grid[row][col] = marks[i % 2]
                    break

    rays = fan_rays(report)
    for r, _, emphasized in rays:
        norm = math.hypot(r.u, r.v)
        for step in range(1, 61):
            t = step / 60
            row, col = _cell(t * r.u / norm, t * r.v / norm)
            if 0 <= row < ROWS and 0 <= col < COLS:
                grid[row][col] = "#" if emphasized else "*"
    for r, label, _ in rays:
        norm = math.hypot(r.u, r.v)
        row, col = _cell(1.12 * r.u / norm, 1.12 * r.v / norm)
        if r.u < 0:
            col -= len(label) - 1
        for i, ch in enumerate(label):
            if 0 <= row < ROWS and 0 <= col + i < COLS:
                grid[row][col + i] = ch
    grid[ROWS // 2][COLS // 2] = "o"

    lb = report.basis_labels
    lines = [f"fan of {report.scenario} in basis ({lb[0]}, {lb[1]})", ""]
    lines += ["".join(row).rstrip() for row in grid]
    lines.append("")
    lines.append("rays, counterclockwise ('#' marks Mov/Eff boundary):")
    for r, label, emphasized in rays:
        lines.append(f"  {'#' if emphasized else '*'} {label:<12} {format_class(r, lb):<14} ({r.u}, {r.v})")
    lines.append("chambers, counterclockwise:")
    for i, (name, a, b) in enumerate(chambers):
        lines.append(f"  {marks[i % 2]} Nef({name}) = Cone({format_class(a, lb)}, {format_class(b, lb)})")
    return "\n".join(lines) + "\n"
