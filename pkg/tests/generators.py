"""Seeded random case builders shared by unit and acceptance tests."""

from __future__ import annotations

import math
import random

from sketchparts.model import (
    AnnotatedSketch,
    CategoryPartList,
    Epitome,
    PartAnnotation,
    Point2D,
    Sketch,
    Stroke,
    StrokeOrdering,
    polygon_area,
)

from .oracles import oracle_rasterize

MICRO_CANVAS = (24, 24)
MICRO_PARTS = CategoryPartList(category="micro", parts=("alpha", "beta"))


def random_polygon(rng: random.Random, max_vertices: int = 10,
                   center: tuple[float, float] = (0.0, 0.0),
                   radius: float = 10.0) -> list[tuple[float, float]]:
    """Star-shaped polygon with jittered radii; concave more often than not."""
    while True:
        n = rng.randint(3, max_vertices)
        angles = sorted(rng.uniform(0.0, 2.0 * math.pi) for _ in range(n))
        verts = []
        for a in angles:
            r = rng.uniform(0.25 * radius, radius)
            verts.append((center[0] + r * math.cos(a), center[1] + r * math.sin(a)))
        pts = [Point2D(x, y) for x, y in verts]
        if len({(p.x, p.y) for p in pts}) == n and polygon_area(pts) != 0.0:
            return verts


def integer_rectangle(x0: int, y0: int, x1: int, y1: int) -> list[tuple[float, float]]:
    return [(float(x0), float(y0)), (float(x1), float(y0)),
            (float(x1), float(y1)), (float(x0), float(y1))]


def random_stroke(rng: random.Random, stroke_id: int, temporal: int,
                  canvas: tuple[int, int], max_points: int = 3,
                  max_span: float = 6.0) -> Stroke:
    w, h = canvas
    x = rng.uniform(1.0, w - 2.0)
    y = rng.uniform(1.0, h - 2.0)
    points = [Point2D(x, y)]
    for _ in range(rng.randint(1, max_points - 1)):
        x = min(max(x + rng.uniform(-max_span, max_span), 0.0), w - 1.0)
        y = min(max(y + rng.uniform(-max_span, max_span), 0.0), h - 1.0)
        points.append(Point2D(x, y))
    return Stroke(id=stroke_id, temporal_index=temporal, points=tuple(points))


def random_micro_sketch(rng: random.Random, index: int,
                        max_pixels: int = 30) -> AnnotatedSketch:
    """Tiny sketch (<= ``max_pixels`` stroke pixels) with 1-3 random contours."""
    while True:
        n_strokes = rng.randint(1, 3)
        temporal = list(range(n_strokes))
        rng.shuffle(temporal)
        strokes = tuple(
            random_stroke(rng, sid, temporal[sid], MICRO_CANVAS) for sid in range(n_strokes)
        )
        sketch = Sketch(category="micro", sketch_id=f"micro-{index:03d}",
                        canvas=MICRO_CANVAS, strokes=strokes)
        if len(oracle_rasterize(sketch)) <= max_pixels:
            break
    annotations = []
    for _ in range(rng.randint(1, 3)):
        cx = rng.uniform(4.0, MICRO_CANVAS[0] - 5.0)
        cy = rng.uniform(4.0, MICRO_CANVAS[1] - 5.0)
        verts = random_polygon(rng, max_vertices=6, center=(cx, cy),
                               radius=rng.uniform(3.0, 9.0))
        annotations.append(
            PartAnnotation(
                part_name=rng.choice(MICRO_PARTS.parts),
                contour=tuple(Point2D(x, y) for x, y in verts),
            )
        )
    return AnnotatedSketch(sketch=sketch, annotations=tuple(annotations))


def random_epitome(rng: random.Random, sketch: Sketch,
                   ordering: StrokeOrdering = StrokeOrdering.TEMPORAL) -> Epitome:
    ids = sorted(sketch.stroke_ids())
    kept = frozenset(i for i in ids if rng.random() < 0.6)
    return Epitome(sketch_id=sketch.sketch_id, kept_stroke_ids=kept, ordering=ordering)


def nested_epitome_chain(rng: random.Random, sketch: Sketch):
    """(E1, E2) with E1 subset of E2 subset of the full stroke set."""
    ids = sorted(sketch.stroke_ids())
    e2 = sorted(i for i in ids if rng.random() < 0.7)
    e1 = sorted(i for i in e2 if rng.random() < 0.6)
    make = lambda kept: Epitome(sketch_id=sketch.sketch_id,
                                kept_stroke_ids=frozenset(kept),
                                ordering=StrokeOrdering.TEMPORAL)
    return make(e1), make(e2), make(ids)
