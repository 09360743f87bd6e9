"""Domain types shared across the pipeline.

Everything here is an immutable dataclass validated on construction, so a
value that exists is a value that satisfies its structural invariants.
Cross-object invariants (stroke subset membership, part names against the
category part list, points against the canvas) are checked by the loader
in :mod:`sketchparts.dataset` and by the explicit ``validate_*`` helpers
below, which report locations usable in error messages.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, Sequence


class ModelError(ValueError):
    """A structural invariant of a domain type is violated."""


class StrokeOrdering(Enum):
    """Sequence rule governing which strokes a sparsified sketch retains."""

    TEMPORAL = "temporal"
    LENGTH = "length"
    ALTERNATE = "alternate"

    @classmethod
    def parse(cls, text: str) -> "StrokeOrdering":
        try:
            return cls(text.strip().lower())
        except ValueError:
            names = ", ".join(o.value for o in cls)
            raise ModelError(f"unknown stroke ordering {text!r} (expected one of: {names})") from None


@dataclass(frozen=True, order=True)
class Point2D:
    x: float
    y: float

    def __post_init__(self):
        object.__setattr__(self, "x", float(self.x))
        object.__setattr__(self, "y", float(self.y))
        if not (math.isfinite(self.x) and math.isfinite(self.y)):
            raise ModelError(f"point coordinates must be finite, got ({self.x}, {self.y})")


@dataclass(frozen=True)
class Stroke:
    """A single drawn polyline with its position in the drawing order."""

    id: int
    temporal_index: int
    points: tuple[Point2D, ...]
    width: int = 1

    def __post_init__(self):
        object.__setattr__(self, "points", tuple(self.points))
        if len(self.points) < 2:
            raise ModelError(f"stroke {self.id}: needs at least 2 points, got {len(self.points)}")
        if self.width < 1:
            raise ModelError(f"stroke {self.id}: width must be a positive integer, got {self.width}")

    def arc_length(self) -> float:
        """Sum of Euclidean segment lengths of the polyline."""
        total = 0.0
        for a, b in zip(self.points, self.points[1:]):
            total += math.sqrt((b.x - a.x) ** 2 + (b.y - a.y) ** 2)
        return total


DEFAULT_CANVAS = (800, 800)


@dataclass(frozen=True)
class Sketch:
    category: str
    sketch_id: str
    canvas: tuple[int, int]
    strokes: tuple[Stroke, ...]

    def __post_init__(self):
        object.__setattr__(self, "strokes", tuple(self.strokes))
        w, h = self.canvas
        if w < 1 or h < 1:
            raise ModelError(f"sketch {self.sketch_id}: canvas must be positive, got {self.canvas}")
        ids = [s.id for s in self.strokes]
        if len(set(ids)) != len(ids):
            raise ModelError(f"sketch {self.sketch_id}: duplicate stroke ids")
        temporal = sorted(s.temporal_index for s in self.strokes)
        if temporal != list(range(len(self.strokes))):
            raise ModelError(
                f"sketch {self.sketch_id}: temporal indices must be a permutation of "
                f"0..{len(self.strokes) - 1}, got {temporal}"
            )
        for s in self.strokes:
            for p in s.points:
                if not (0 <= p.x <= w - 1 and 0 <= p.y <= h - 1):
                    raise ModelError(
                        f"sketch {self.sketch_id}: stroke {s.id} point ({p.x}, {p.y}) "
                        f"outside canvas {w}x{h}"
                    )

    def stroke_ids(self) -> frozenset[int]:
        return frozenset(s.id for s in self.strokes)

    def stroke_by_id(self, stroke_id: int) -> Stroke:
        for s in self.strokes:
            if s.id == stroke_id:
                return s
        raise KeyError(stroke_id)


@dataclass(frozen=True)
class Epitome:
    """A declared stroke subset of a sketch, tagged with the ordering it came from."""

    sketch_id: str
    kept_stroke_ids: frozenset[int]
    ordering: StrokeOrdering

    def __post_init__(self):
        object.__setattr__(self, "kept_stroke_ids", frozenset(self.kept_stroke_ids))


def validate_epitome_against(epitome: Epitome, sketch: Sketch) -> None:
    """Check the subset invariant; a violation is an error, never a clamp."""
    if epitome.sketch_id != sketch.sketch_id:
        raise ModelError(
            f"epitome references sketch {epitome.sketch_id!r} but was checked "
            f"against {sketch.sketch_id!r}"
        )
    missing = epitome.kept_stroke_ids - sketch.stroke_ids()
    if missing:
        raise ModelError(
            f"epitome for sketch {sketch.sketch_id}: kept stroke ids "
            f"{sorted(missing)} not present in the sketch"
        )


def polygon_area(points: Sequence[Point2D]) -> float:
    """Signed shoelace area of the closed polygon through ``points``."""
    area = 0.0
    n = len(points)
    for i in range(n):
        a = points[i]
        b = points[(i + 1) % n]
        area += a.x * b.y - b.x * a.y
    return area / 2.0


def close_contour(points: Sequence[Point2D]) -> tuple[Point2D, ...]:
    """Drop an explicitly repeated closing vertex; the ring is implicit."""
    pts = tuple(points)
    if len(pts) >= 2 and pts[0] == pts[-1]:
        pts = pts[:-1]
    return pts


@dataclass(frozen=True)
class PartAnnotation:
    """A named closed contour traced by a human around one semantic part."""

    part_name: str
    contour: tuple[Point2D, ...]

    def __post_init__(self):
        if not self.part_name:
            raise ModelError("annotation part name must be non-empty")
        pts = close_contour(self.contour)
        object.__setattr__(self, "contour", pts)
        if len(pts) < 3:
            raise ModelError(
                f"annotation {self.part_name!r}: contour needs at least 3 distinct "
                f"points, got {len(pts)}"
            )
        if polygon_area(pts) == 0.0:
            raise ModelError(f"annotation {self.part_name!r}: contour encloses zero area")


@dataclass(frozen=True)
class CategoryPartList:
    category: str
    parts: tuple[str, ...]

    def __post_init__(self):
        object.__setattr__(self, "parts", tuple(self.parts))
        if len(set(self.parts)) != len(self.parts):
            raise ModelError(f"category {self.category}: part list has duplicates")
        if len(self.parts) < 2:
            raise ModelError(
                f"category {self.category}: needs at least two parts, got {list(self.parts)}"
            )
        if any(not p for p in self.parts):
            raise ModelError(f"category {self.category}: empty part name in part list")

    def index_of(self, part_name: str) -> int:
        return self.parts.index(part_name)


@dataclass(frozen=True)
class AnnotatedSketch:
    sketch: Sketch
    annotations: tuple[PartAnnotation, ...]

    def __post_init__(self):
        object.__setattr__(self, "annotations", tuple(self.annotations))


def validate_annotations_against(annotated: AnnotatedSketch, parts: CategoryPartList) -> None:
    known = set(parts.parts)
    for i, ann in enumerate(annotated.annotations):
        if ann.part_name not in known:
            raise ModelError(
                f"sketch {annotated.sketch.sketch_id}: annotation #{i} names unknown "
                f"part {ann.part_name!r} (category parts: {', '.join(parts.parts)})"
            )


@dataclass(frozen=True)
class PipelineWarning:
    """Structured non-fatal condition raised while computing weights."""

    code: str
    message: str
    sketch_id: str | None = None
    annotation_index: int | None = None
    part_name: str | None = None


@dataclass(frozen=True)
class ImportanceReport:
    """Per-category part weights, max-normalized and sorted.

    ``weights`` covers every part of the category list; ties in weight are
    broken alphabetically.  Metadata fields record every knob that shaped
    the numbers so two reports are comparable at a glance.
    """

    category: str
    ordering: StrokeOrdering
    weights: tuple[tuple[str, float], ...]
    sketch_count: int
    epsilon: float
    dist_threshold: float
    count_mode: str
    normalization: str
    warnings: tuple[PipelineWarning, ...] = field(default=())

    def __post_init__(self):
        object.__setattr__(self, "weights", tuple((n, float(w)) for n, w in self.weights))
        object.__setattr__(self, "warnings", tuple(self.warnings))
        names = [n for n, _ in self.weights]
        if len(set(names)) != len(names):
            raise ModelError(f"report {self.category}: duplicate part names")
        for (_, w1), (_, w2) in zip(self.weights, self.weights[1:]):
            if w1 < w2:
                raise ModelError(f"report {self.category}: weights not sorted descending")
        for n, w in self.weights:
            if not (0.0 <= w <= 1.0):
                raise ModelError(f"report {self.category}: weight {w} for {n!r} outside [0, 1]")
        if self.normalization == "max" and self.weights:
            top = self.weights[0][1]
            if top != 1.0 and any(w != 0.0 for _, w in self.weights):
                raise ModelError(
                    f"report {self.category}: max-normalized report must lead with 1.0, got {top}"
                )

    def as_dict(self) -> dict[str, float]:
        return dict(self.weights)


def sort_weights(weights: Iterable[tuple[str, float]]) -> tuple[tuple[str, float], ...]:
    """Descending by weight, ties broken alphabetically by part name."""
    return tuple(sorted(weights, key=lambda item: (-item[1], item[0])))
