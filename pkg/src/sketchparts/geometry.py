"""Rasterization, containment and thresholded boundary matching.

The raster/containment/nearest-neighbor inner loops run in the selected
kernel backend (compiled or pure Python); this module owns the domain
semantics: pixel sets on a shared canvas, closed contour polygons, contour
densification and the two match-counting modes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Sequence

import numpy as np

from . import kernels
from .model import Point2D, Sketch, close_contour, polygon_area


class GeometryError(ValueError):
    """Degenerate geometric input (zero-area contour, canvas mismatch)."""


class CountMode(Enum):
    """How thresholded matches are counted.

    ``UNIQUE_BOUNDARY`` counts distinct matched contour points (the
    pseudocode semantics, default); ``MATCHED_PIXELS`` counts the stroke
    pixels that found a close-enough contour point (the prose semantics).
    """

    UNIQUE_BOUNDARY = "unique_boundary"
    MATCHED_PIXELS = "matched_pixels"

    @classmethod
    def parse(cls, text: str) -> "CountMode":
        try:
            return cls(text.strip().lower())
        except ValueError:
            names = ", ".join(m.value for m in cls)
            raise GeometryError(f"unknown count mode {text!r} (expected one of: {names})") from None


@dataclass(frozen=True)
class PixelSet:
    """Unique integer (x, y) pixels on a canvas."""

    canvas: tuple[int, int]
    pixels: frozenset[tuple[int, int]]

    def __post_init__(self):
        object.__setattr__(self, "pixels", frozenset(self.pixels))
        w, h = self.canvas
        for x, y in self.pixels:
            if not (0 <= x < w and 0 <= y < h):
                raise GeometryError(f"pixel ({x}, {y}) outside canvas {w}x{h}")

    def __len__(self) -> int:
        return len(self.pixels)

    def as_array(self) -> np.ndarray:
        """Pixels as an (N, 2) int64 array in canonical (y, x) order."""
        pts = sorted(self.pixels, key=lambda p: (p[1], p[0]))
        return np.array(pts, dtype=np.int64).reshape(-1, 2)


@dataclass(frozen=True)
class ContourPolygon:
    """Closed polygon; the edge from the last vertex back to the first is implicit."""

    vertices: tuple[Point2D, ...]

    def __post_init__(self):
        pts = close_contour(self.vertices)
        object.__setattr__(self, "vertices", pts)
        if len(pts) < 3:
            raise GeometryError(f"contour needs at least 3 vertices, got {len(pts)}")
        if polygon_area(pts) == 0.0:
            raise GeometryError("contour encloses zero area")

    @property
    def n_vertices(self) -> int:
        return len(self.vertices)

    def as_array(self) -> np.ndarray:
        return np.array([(p.x, p.y) for p in self.vertices], dtype=np.float64)


def rasterize(sketch: Sketch, kept_ids: Iterable[int] | None = None) -> PixelSet:
    """Union of integer line rasterizations of the sketch's strokes.

    ``kept_ids`` restricts rasterization to a stroke subset; ``None`` means
    all strokes.  Stroke width thickens lines by square dilation.
    """
    w, h = sketch.canvas
    if kept_ids is not None:
        kept = frozenset(kept_ids)
        unknown = kept - sketch.stroke_ids()
        if unknown:
            raise GeometryError(
                f"sketch {sketch.sketch_id}: kept ids {sorted(unknown)} are not stroke ids"
            )
        strokes = [s for s in sketch.strokes if s.id in kept]
    else:
        strokes = list(sketch.strokes)

    pixels: set[tuple[int, int]] = set()
    for stroke in sorted(strokes, key=lambda s: s.id):
        pts = np.array([(p.x, p.y) for p in stroke.points], dtype=np.float64)
        arr = kernels.rasterize_polyline(pts, stroke.width, w, h)
        pixels.update((int(x), int(y)) for x, y in arr)
    return PixelSet(canvas=sketch.canvas, pixels=frozenset(pixels))


def pixels_inside(contour: ContourPolygon, raster: PixelSet) -> PixelSet:
    """Subset of ``raster`` whose pixel centers lie inside or on the contour."""
    arr = raster.as_array()
    if arr.shape[0] == 0:
        return PixelSet(canvas=raster.canvas, pixels=frozenset())
    mask = kernels.points_in_polygon(arr.astype(np.float64), contour.as_array())
    kept = arr[mask]
    return PixelSet(canvas=raster.canvas, pixels=frozenset((int(x), int(y)) for x, y in kept))


def densify_contour(contour: ContourPolygon) -> np.ndarray:
    """Contour vertices plus integer-spaced samples along each edge.

    Each edge of length L is split into ceil(L) equal steps, so sample
    spacing never exceeds one pixel.  Returns an (N, 2) float array; the
    sample at index 0 is the first vertex and order follows the ring.
    """
    verts = contour.vertices
    n = len(verts)
    samples: list[tuple[float, float]] = []
    for i in range(n):
        a = verts[i]
        b = verts[(i + 1) % n]
        length = math.sqrt((b.x - a.x) ** 2 + (b.y - a.y) ** 2)
        steps = max(1, math.ceil(length))
        for k in range(steps):
            t = k / steps
            samples.append((a.x + t * (b.x - a.x), a.y + t * (b.y - a.y)))
    return np.array(samples, dtype=np.float64)


def count_valid_matches(
    raster: PixelSet,
    contour: ContourPolygon,
    dist_threshold: float,
    count_mode: CountMode = CountMode.UNIQUE_BOUNDARY,
) -> int:
    """Count matches between in-contour stroke pixels and the densified boundary.

    Every raster pixel inside the contour is matched to its nearest
    densified contour point; matches at distance strictly below
    ``dist_threshold`` are valid.  The returned count depends on
    ``count_mode`` (distinct matched boundary points vs matched pixels).
    """
    if dist_threshold <= 0:
        raise GeometryError(f"dist_threshold must be positive, got {dist_threshold}")
    inside = pixels_inside(contour, raster)
    return _count_matches_for_pixels(inside.as_array(), contour, dist_threshold, count_mode)


def _count_matches_for_pixels(
    pixel_arr: np.ndarray,
    contour: ContourPolygon,
    dist_threshold: float,
    count_mode: CountMode,
) -> int:
    """Match-count core shared with the importance pipeline (pixels premapped)."""
    if pixel_arr.shape[0] == 0:
        return 0
    samples = densify_contour(contour)
    idx, d2 = kernels.nearest_neighbors(samples, pixel_arr.astype(np.float64))
    limit = dist_threshold * dist_threshold
    valid = d2 < limit
    if count_mode is CountMode.MATCHED_PIXELS:
        return int(np.count_nonzero(valid))
    matched = idx[valid]
    points = {(samples[i, 0], samples[i, 1]) for i in matched}
    return len(points)
