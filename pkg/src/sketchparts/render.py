"""Word-cloud layouts, SVG output and plain-text report tables."""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from typing import Sequence

from .model import ImportanceReport, Point2D

# Crude but fixed text metrics for the layout's bounding boxes; the SVG
# viewer's real glyph widths only need to stay under these for boxes to
# remain visually non-overlapping.
CHAR_WIDTH_FACTOR = 0.62
LINE_HEIGHT_FACTOR = 1.25
BOX_PADDING = 2.0

SPIRAL_RADIAL_STEP = 1.5
SPIRAL_ANGLE_STEP = 0.35


class RenderError(ValueError):
    pass


class WordPlacementError(RenderError):
    def __init__(self, part_name: str, canvas: tuple[int, int]):
        self.part_name = part_name
        super().__init__(
            f"cannot place word {part_name!r} on a {canvas[0]}x{canvas[1]} canvas"
        )


@dataclass(frozen=True)
class TextBox:
    part_name: str
    font_size: float
    anchor: Point2D
    box: tuple[float, float, float, float]  # x, y, width, height


@dataclass(frozen=True)
class WordCloudLayout:
    canvas: tuple[int, int]
    boxes: tuple[TextBox, ...]


def boxes_overlap(a: tuple[float, float, float, float], b: tuple[float, float, float, float]) -> bool:
    ax, ay, aw, ah = a
    bx, by, bw, bh = b
    return ax < bx + bw and bx < ax + aw and ay < by + bh and by < ay + ah


def _text_box(name: str, font_size: float, cx: float, cy: float) -> tuple[float, float, float, float]:
    w = len(name) * font_size * CHAR_WIDTH_FACTOR
    h = font_size * LINE_HEIGHT_FACTOR
    return (cx - w / 2.0, cy - h / 2.0, w, h)


def layout_cloud(
    report: ImportanceReport,
    canvas: tuple[int, int] = (640, 480),
    min_pt: float = 10.0,
    max_pt: float = 48.0,
    seed: int = 0,
) -> WordCloudLayout:
    """Greedy largest-first placement along an outward spiral.

    Font size maps linearly from weight; zero-weight parts are omitted
    (a name rendered at minimum size would suggest presence the data does
    not support).  Identical inputs give identical layouts.
    """
    if min_pt >= max_pt:
        raise RenderError(f"min_pt must be below max_pt, got {min_pt} >= {max_pt}")
    if not report.weights:
        raise RenderError(f"report {report.category}: nothing to lay out")
    w, h = canvas
    cx, cy = w / 2.0, h / 2.0
    rng = random.Random(seed)
    max_radius = math.sqrt(w * w + h * h) / 2.0

    placed: list[TextBox] = []
    for name, weight in report.weights:
        if weight == 0.0:
            continue
        font = min_pt + weight * (max_pt - min_pt)
        theta0 = rng.uniform(0.0, 2.0 * math.pi)
        spot = _find_spot(name, font, cx, cy, theta0, max_radius, canvas, placed)
        if spot is None:
            raise WordPlacementError(name, canvas)
        placed.append(spot)
    return WordCloudLayout(canvas=canvas, boxes=tuple(placed))


def _find_spot(
    name: str,
    font: float,
    cx: float,
    cy: float,
    theta0: float,
    max_radius: float,
    canvas: tuple[int, int],
    placed: Sequence[TextBox],
) -> TextBox | None:
    w, h = canvas
    theta = 0.0
    while True:
        r = SPIRAL_RADIAL_STEP * theta
        if r > max_radius:
            return None
        x = cx + r * math.cos(theta0 + theta)
        y = cy + r * math.sin(theta0 + theta)
        box = _text_box(name, font, x, y)
        bx, by, bw, bh = box
        in_canvas = bx >= 0 and by >= 0 and bx + bw <= w and by + bh <= h
        if in_canvas:
            padded = (bx - BOX_PADDING, by - BOX_PADDING, bw + 2 * BOX_PADDING, bh + 2 * BOX_PADDING)
            if not any(boxes_overlap(padded, other.box) for other in placed):
                return TextBox(part_name=name, font_size=font, anchor=Point2D(x, y), box=box)
        theta += SPIRAL_ANGLE_STEP


def render_cloud_svg(layout: WordCloudLayout, title: str = "") -> str:
    """Scalable vector rendering of a layout; deterministic bytes."""
    w, h = layout.canvas
    lines = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" '
        f'viewBox="0 0 {w} {h}">',
        f'  <rect width="{w}" height="{h}" fill="white"/>',
    ]
    if title:
        lines.append(f"  <title>{_escape(title)}</title>")
    for box in layout.boxes:
        lines.append(
            f'  <text x="{box.anchor.x:.2f}" y="{box.anchor.y:.2f}" '
            f'font-size="{box.font_size:.2f}" font-family="sans-serif" '
            f'text-anchor="middle" dominant-baseline="central">'
            f"{_escape(box.part_name)}</text>"
        )
    lines.append("</svg>")
    return "".join(line + "\n" for line in lines)


def _escape(text: str) -> str:
    return text.replace("&", "&amp;").replace("<", "&lt;").replace(">", "&gt;")


def render_table(reports: Sequence[ImportanceReport]) -> str:
    """One row per category: ``category & part (w.www), part (w.www), ...``

    Weights print with three decimals in descending order; zero-weight
    parts stay in the row.  All reports must share a stroke ordering.
    """
    orderings = {r.ordering for r in reports}
    if len(orderings) > 1:
        raise RenderError(
            "table rows must share one stroke ordering, got "
            + ", ".join(sorted(o.value for o in orderings))
        )
    rows = []
    for report in sorted(reports, key=lambda r: r.category):
        if report.weights:
            entries = ", ".join(f"{name} ({weight:.3f})" for name, weight in report.weights)
        else:
            entries = "(no parts)"
        rows.append(f"{report.category} & {entries}")
    return "".join(row + "\n" for row in rows)
