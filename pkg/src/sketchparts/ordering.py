"""Stroke-sequence orderings and prefix-based stroke subsets."""

from __future__ import annotations

import math

from .model import Epitome, Sketch, StrokeOrdering


def order_strokes(sketch: Sketch, ordering: StrokeOrdering) -> list[int]:
    """Permutation of all stroke ids under the given ordering.

    TEMPORAL: ascending drawing order.  LENGTH: descending polyline arc
    length, ties by ascending temporal index.  ALTERNATE: interleave the
    LENGTH sequence with the temporally reversed sequence, taking one new
    id from each in turn and starting with the LENGTH side.
    """
    temporal = [s.id for s in sorted(sketch.strokes, key=lambda s: s.temporal_index)]
    if ordering is StrokeOrdering.TEMPORAL:
        return temporal
    by_length = [
        s.id
        for s in sorted(sketch.strokes, key=lambda s: (-s.arc_length(), s.temporal_index))
    ]
    if ordering is StrokeOrdering.LENGTH:
        return by_length
    return _interleave(by_length, list(reversed(temporal)))


def _interleave(first: list[int], second: list[int]) -> list[int]:
    """Alternate between the two sequences, skipping ids already emitted."""
    out: list[int] = []
    seen: set[int] = set()
    sources = (first, second)
    cursors = [0, 0]
    turn = 0
    while len(out) < len(first):
        src = sources[turn]
        cur = cursors[turn]
        while cur < len(src) and src[cur] in seen:
            cur += 1
        cursors[turn] = cur
        if cur < len(src):
            out.append(src[cur])
            seen.add(src[cur])
            cursors[turn] = cur + 1
        turn = 1 - turn
    return out


def prefix_epitome(sketch: Sketch, ordering: StrokeOrdering, keep_fraction: float) -> Epitome:
    """Stroke subset keeping the leading ceil(fraction * n) ids of the ordering.

    Stand-in generator for sparsified representations when none are
    supplied as data.
    """
    if not (0.0 < keep_fraction <= 1.0):
        raise ValueError(f"keep_fraction must be in (0, 1], got {keep_fraction}")
    ids = order_strokes(sketch, ordering)
    keep = math.ceil(keep_fraction * len(ids))
    return Epitome(
        sketch_id=sketch.sketch_id,
        kept_stroke_ids=frozenset(ids[:keep]),
        ordering=ordering,
    )
