"""Independent brute-force checkers used as test oracles.

Nothing here imports the geometry or kernel implementations: containment,
rasterization, densification, matching and the per-sketch weight pipeline
are re-derived from their definitions with plain Python loops and no
spatial index.  Where exact agreement with the implementation is asserted,
the core float expressions are spelled the same way (same operation
order); everything else (control flow, data structures) is separate.
"""

from __future__ import annotations

import math


def oracle_point_in_polygon(px: float, py: float, verts: list[tuple[float, float]]) -> bool:
    """Even-odd ray cast, boundary-inclusive."""
    m = len(verts)
    for i in range(m):
        x1, y1 = verts[i - 1]
        x2, y2 = verts[i]
        cross = (px - x1) * (y2 - y1) - (py - y1) * (x2 - x1)
        if cross == 0.0 and min(x1, x2) <= px <= max(x1, x2) and min(y1, y2) <= py <= max(y1, y2):
            return True
    crossings = 0
    for i in range(m):
        x1, y1 = verts[i - 1]
        x2, y2 = verts[i]
        if (y1 > py) != (y2 > py):
            xint = (py - y1) * (x2 - x1) / (y2 - y1) + x1
            if px < xint:
                crossings += 1
    return crossings % 2 == 1


def oracle_line_pixels(x0: int, y0: int, x1: int, y1: int) -> set[tuple[int, int]]:
    """Symmetric integer line walk (error accumulator form)."""
    pixels = set()
    dx = abs(x1 - x0)
    dy = abs(y1 - y0)
    step_x = 1 if x1 > x0 else -1
    step_y = 1 if y1 > y0 else -1
    err = dx - dy
    x, y = x0, y0
    while True:
        pixels.add((x, y))
        if (x, y) == (x1, y1):
            return pixels
        doubled = err * 2
        if doubled > -dy:
            err -= dy
            x += step_x
        if doubled < dx:
            err += dx
            y += step_y


def oracle_rasterize(sketch, kept_ids=None) -> set[tuple[int, int]]:
    """Union of rounded line walks with square dilation, clipped to canvas."""
    w, h = sketch.canvas
    pixels: set[tuple[int, int]] = set()
    for stroke in sketch.strokes:
        if kept_ids is not None and stroke.id not in kept_ids:
            continue
        rounded = [
            (int(math.floor(p.x + 0.5)), int(math.floor(p.y + 0.5))) for p in stroke.points
        ]
        line: set[tuple[int, int]] = set()
        for (ax, ay), (bx, by) in zip(rounded, rounded[1:]):
            line |= oracle_line_pixels(ax, ay, bx, by)
        lo = -((stroke.width - 1) // 2)
        hi = stroke.width // 2
        for x, y in line:
            for dx in range(lo, hi + 1):
                for dy in range(lo, hi + 1):
                    pixels.add((x + dx, y + dy))
    return {(x, y) for x, y in pixels if 0 <= x < w and 0 <= y < h}


def oracle_densify(verts: list[tuple[float, float]]) -> list[tuple[float, float]]:
    """Vertices plus <=1px spaced samples along each closed-ring edge."""
    samples = []
    n = len(verts)
    for i in range(n):
        ax, ay = verts[i]
        bx, by = verts[(i + 1) % n]
        length = math.sqrt((bx - ax) ** 2 + (by - ay) ** 2)
        steps = max(1, math.ceil(length))
        for k in range(steps):
            t = k / steps
            samples.append((ax + t * (bx - ax), ay + t * (by - ay)))
    return samples


def oracle_nearest(samples: list[tuple[float, float]], qx: float, qy: float) -> tuple[int, float]:
    """All-pairs nearest sample; ties resolve to the lowest index."""
    best_i = -1
    best_d2 = math.inf
    for i, (sx, sy) in enumerate(samples):
        dx = qx - sx
        dy = qy - sy
        d2 = dx * dx + dy * dy
        if d2 < best_d2 or (d2 == best_d2 and i < best_i):
            best_d2 = d2
            best_i = i
    return best_i, best_d2


def oracle_count_valid(
    pixels: set[tuple[int, int]],
    verts: list[tuple[float, float]],
    dist_threshold: float,
    count_mode: str,
) -> int:
    inside = [(x, y) for x, y in pixels if oracle_point_in_polygon(float(x), float(y), verts)]
    samples = oracle_densify(verts)
    limit = dist_threshold * dist_threshold
    matched_points = set()
    matched_pixels = 0
    for x, y in inside:
        i, d2 = oracle_nearest(samples, float(x), float(y))
        if d2 < limit:
            matched_pixels += 1
            matched_points.add(samples[i])
    if count_mode == "matched_pixels":
        return matched_pixels
    return len(matched_points)


def oracle_per_sketch(annotated, epitome, parts, epsilon, dist_threshold, count_mode):
    """Index-free reimplementation of the per-sketch weight pipeline.

    Returns (f, p_im, per_contour) as plain tuples mirroring the
    implementation's PerSketchWeights fields.
    """
    full = oracle_rasterize(annotated.sketch)
    epi = oracle_rasterize(annotated.sketch, set(epitome.kept_stroke_ids))
    contours = [[(p.x, p.y) for p in ann.contour] for ann in annotated.annotations]

    candidates = []
    for j, verts in enumerate(contours):
        n_full = sum(
            1 for x, y in full if oracle_point_in_polygon(float(x), float(y), verts)
        )
        if n_full == 0:
            continue
        n_epi = sum(
            1 for x, y in epi if oracle_point_in_polygon(float(x), float(y), verts)
        )
        if n_epi / n_full > epsilon:
            candidates.append(j)

    annotated_counts = {name: 0 for name in parts.parts}
    for ann in annotated.annotations:
        annotated_counts[ann.part_name] += 1
    candidate_counts = {name: 0 for name in parts.parts}
    for j in candidates:
        candidate_counts[annotated.annotations[j].part_name] += 1
    p_im = tuple(
        candidate_counts[name] / annotated_counts[name] if annotated_counts[name] else 0.0
        for name in parts.parts
    )

    f = [0.0] * len(parts.parts)
    per_contour = []
    for j in candidates:
        verts = contours[j]
        n_valid_full = oracle_count_valid(full, verts, dist_threshold, count_mode)
        n_valid_epi = oracle_count_valid(epi, verts, dist_threshold, count_mode)
        w_part = n_valid_epi / n_valid_full if n_valid_full else 0.0
        per_contour.append((j, w_part))
        s = parts.parts.index(annotated.annotations[j].part_name)
        f[s] += p_im[s] * w_part
    return tuple(f), p_im, tuple(per_contour)
