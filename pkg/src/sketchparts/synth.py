"""Deterministic synthetic mini-dataset generator.

Three parameterized figure families (a two-wheeler, a quadruped, a fixed
wing aircraft) with known part geometry.  Each sketch annotates every part
exactly once, with a contour built as the part's stroke bounding box
inflated by a margin below the default match threshold, so every contour
both encloses stroke pixels and is hugged by them.  Used by the acceptance
suite and by ``sketchparts synth`` as a stand-in for a real annotated
collection, which is not distributable with this package.
"""

from __future__ import annotations

import math
import random
from pathlib import Path

from . import dataset
from .model import (
    AnnotatedSketch,
    CategoryPartList,
    PartAnnotation,
    Point2D,
    Sketch,
    Stroke,
    StrokeOrdering,
)
from .ordering import prefix_epitome

DEFAULT_SEED = 7
DEFAULT_SKETCHES = 6
DEFAULT_CANVAS = (200, 200)
DEFAULT_KEEP_FRACTION = 0.6
CONTOUR_INFLATE = 1.5

PointList = list[tuple[float, float]]


def _ring(cx: float, cy: float, rx: float, ry: float, n: int = 8) -> PointList:
    pts = [
        (cx + rx * math.cos(2.0 * math.pi * k / n), cy + ry * math.sin(2.0 * math.pi * k / n))
        for k in range(n)
    ]
    pts.append(pts[0])
    return pts


def _build_bicycle(rng: random.Random) -> list[tuple[str, list[PointList]]]:
    return [
        ("wheel", [_ring(62, 148, 21, 21), _ring(138, 148, 21, 21)]),
        ("frame", [[(62, 148), (88, 102), (138, 148)], [(88, 102), (118, 122), (62, 148)]]),
        ("seat", [[(80, 88), (96, 88)], [(88, 88), (88, 101)]]),
        ("handlebars", [[(136, 148), (134, 100)], [(124, 96), (134, 100), (138, 90)]]),
    ]


def _build_dog(rng: random.Random) -> list[tuple[str, list[PointList]]]:
    legs = [[(x, 134.0), (x, 158.0)] for x in (78.0, 90.0, 110.0, 122.0)]
    return [
        ("body", [_ring(100, 120, 30, 16)]),
        ("head", [_ring(140, 98, 11, 9), [(134, 88), (138, 80), (142, 88)]]),
        ("leg", legs),
        ("tail", [[(70, 112), (62, 104), (56, 94)]]),
    ]


def _build_plane(rng: random.Random) -> list[tuple[str, list[PointList]]]:
    return [
        ("fuselage", [_ring(100, 120, 44, 9), [(58, 120), (142, 120)]]),
        ("wing", [[(95, 114), (72, 86)], [(105, 126), (128, 154)]]),
        ("tail", [[(58, 112), (50, 96), (66, 110)]]),
    ]


_FIGURES = {
    "bicycle": _build_bicycle,
    "dog": _build_dog,
    "plane": _build_plane,
}


def category_names() -> tuple[str, ...]:
    return tuple(sorted(_FIGURES))


def _jitter(rng: random.Random, base: list[tuple[str, list[PointList]]],
            canvas: tuple[int, int]) -> list[tuple[str, list[PointList]]]:
    scale = rng.uniform(0.85, 1.12)
    ox = rng.uniform(-8.0, 8.0)
    oy = rng.uniform(-8.0, 8.0)
    w, h = canvas
    sx = w / 200.0
    sy = h / 200.0

    def warp(p: tuple[float, float]) -> tuple[float, float]:
        x = (100.0 + ox + (p[0] - 100.0) * scale) * sx
        y = (120.0 + oy + (p[1] - 120.0) * scale) * sy
        return (min(max(x, 2.0), w - 3.0), min(max(y, 2.0), h - 3.0))

    return [
        (part, [[warp(p) for p in polyline] for polyline in polylines])
        for part, polylines in base
    ]


def make_sketch(
    category: str,
    index: int,
    canvas: tuple[int, int] = DEFAULT_CANVAS,
    seed: int = DEFAULT_SEED,
) -> AnnotatedSketch:
    """One deterministic annotated sketch of the given figure family."""
    rng = random.Random(f"{seed}:{category}:{index}")
    figure = _jitter(rng, _FIGURES[category](rng), canvas)

    stroke_specs: list[tuple[str, PointList]] = []
    for part, polylines in figure:
        for polyline in polylines:
            stroke_specs.append((part, polyline))
    temporal = list(range(len(stroke_specs)))
    rng.shuffle(temporal)

    body_width = 2 if category == "dog" else 1
    strokes = []
    for sid, (part, polyline) in enumerate(stroke_specs):
        strokes.append(
            Stroke(
                id=sid,
                temporal_index=temporal[sid],
                points=tuple(Point2D(x, y) for x, y in polyline),
                width=body_width if part == "body" else 1,
            )
        )
    sketch = Sketch(
        category=category,
        sketch_id=f"{category}-{index:03d}",
        canvas=canvas,
        strokes=tuple(strokes),
    )

    annotations = []
    for part, polylines in figure:
        xs = [x for polyline in polylines for x, _ in polyline]
        ys = [y for polyline in polylines for _, y in polyline]
        x0, x1 = min(xs) - CONTOUR_INFLATE, max(xs) + CONTOUR_INFLATE
        y0, y1 = min(ys) - CONTOUR_INFLATE, max(ys) + CONTOUR_INFLATE
        contour = (Point2D(x0, y0), Point2D(x1, y0), Point2D(x1, y1), Point2D(x0, y1))
        annotations.append(PartAnnotation(part_name=part, contour=contour))
    return AnnotatedSketch(sketch=sketch, annotations=tuple(annotations))


def make_category(
    category: str,
    sketches: int = DEFAULT_SKETCHES,
    canvas: tuple[int, int] = DEFAULT_CANVAS,
    seed: int = DEFAULT_SEED,
) -> tuple[CategoryPartList, list[AnnotatedSketch]]:
    parts = CategoryPartList(
        category=category,
        parts=tuple(sorted(part for part, _ in _FIGURES[category](random.Random(0)))),
    )
    annotated = [make_sketch(category, i, canvas, seed) for i in range(sketches)]
    return parts, annotated


def reference_svg(annotated: AnnotatedSketch) -> str:
    """Labeled guide image for annotators: strokes plus part names."""
    w, h = annotated.sketch.canvas
    lines = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" '
        f'viewBox="0 0 {w} {h}">',
        f'  <rect width="{w}" height="{h}" fill="white"/>',
    ]
    for stroke in annotated.sketch.strokes:
        coords = " ".join(f"{p.x:.1f},{p.y:.1f}" for p in stroke.points)
        lines.append(
            f'  <polyline points="{coords}" fill="none" stroke="black" '
            f'stroke-width="{stroke.width}"/>'
        )
    for ann in annotated.annotations:
        cx = sum(p.x for p in ann.contour) / len(ann.contour)
        cy = min(p.y for p in ann.contour) - 2.0
        lines.append(
            f'  <text x="{cx:.1f}" y="{cy:.1f}" font-size="8" fill="crimson" '
            f'text-anchor="middle">{ann.part_name}</text>'
        )
    lines.append("</svg>")
    return "".join(line + "\n" for line in lines)


def generate_dataset(
    root: Path,
    sketches_per_category: int = DEFAULT_SKETCHES,
    canvas: tuple[int, int] = DEFAULT_CANVAS,
    keep_fraction: float = DEFAULT_KEEP_FRACTION,
    seed: int = DEFAULT_SEED,
) -> list[Path]:
    """Write the full synthetic dataset; returns the category directories."""
    written = []
    for category in category_names():
        parts, annotated = make_category(category, sketches_per_category, canvas, seed)
        epitomes = {
            rec.sketch.sketch_id: {
                ordering: prefix_epitome(rec.sketch, ordering, keep_fraction)
                for ordering in StrokeOrdering
            }
            for rec in annotated
        }
        category_dir = dataset.write_category(Path(root), parts, annotated, epitomes)
        dataset.atomic_write_text(category_dir / "reference.svg", reference_svg(annotated[0]))
        written.append(category_dir)
    return written
