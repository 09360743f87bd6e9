"""Pure-Python geometry kernels.

Fallback used when the compiled extension is unavailable (or forced via
``SKETCHPARTS_PURE=1``).  Every function must produce results bitwise
identical to :mod:`sketchparts.kernels._native`: the two backends share
algorithms and the exact order of floating-point operations, only the
execution engine differs.

Conventions shared by both backends:

- pixels are integer ``(x, y)`` pairs, coordinates are pixel centers;
- rounding real coordinates to pixels is half-up: ``floor(v + 0.5)``;
- pixel arrays returned by ``rasterize_polyline`` are unique and sorted
  by ``(y, x)``;
- distances are compared as squared Euclidean values, never after sqrt;
- nearest-neighbor ties resolve to the lowest point index.
"""

from __future__ import annotations

import math

import numpy as np

BACKEND_NAME = "pure"


def rasterize_polyline(points, width: int, canvas_w: int, canvas_h: int) -> np.ndarray:
    """Integer line-drawing of a polyline, thickened by square dilation.

    ``points`` is a (K, 2) float array of polyline vertices.  Returns the
    unique covered pixels as an (N, 2) int64 array sorted by (y, x); pixels
    outside the canvas are dropped.
    """
    pts = np.ascontiguousarray(points, dtype=np.float64)
    if pts.size == 0:
        return np.empty((0, 2), dtype=np.int64)
    xs = pts[:, 0].tolist()
    ys = pts[:, 1].tolist()
    ixs = [int(math.floor(v + 0.5)) for v in xs]
    iys = [int(math.floor(v + 0.5)) for v in ys]

    line: set[tuple[int, int]] = set()
    if len(ixs) == 1:
        line.add((ixs[0], iys[0]))
    for k in range(len(ixs) - 1):
        _bresenham(ixs[k], iys[k], ixs[k + 1], iys[k + 1], line)

    if width > 1:
        lo = -((width - 1) // 2)
        hi = width // 2
        thick: set[tuple[int, int]] = set()
        for x, y in line:
            for dx in range(lo, hi + 1):
                for dy in range(lo, hi + 1):
                    thick.add((x + dx, y + dy))
        line = thick

    kept = [(x, y) for x, y in line if 0 <= x < canvas_w and 0 <= y < canvas_h]
    kept.sort(key=lambda p: (p[1], p[0]))
    return np.array(kept, dtype=np.int64).reshape(-1, 2)


def _bresenham(x0: int, y0: int, x1: int, y1: int, out: set) -> None:
    dx = abs(x1 - x0)
    dy = abs(y1 - y0)
    sx = 1 if x0 < x1 else -1
    sy = 1 if y0 < y1 else -1
    err = dx - dy
    x, y = x0, y0
    while True:
        out.add((x, y))
        if x == x1 and y == y1:
            return
        e2 = 2 * err
        if e2 > -dy:
            err -= dy
            x += sx
        if e2 < dx:
            err += dx
            y += sy


def points_in_polygon(points, polygon) -> np.ndarray:
    """Boundary-inclusive even-odd containment test.

    ``points`` (N, 2) and ``polygon`` (M, 2) are float arrays; the polygon
    is implicitly closed.  A point exactly on an edge counts as inside.
    Returns an (N,) bool array.
    """
    pts = np.ascontiguousarray(points, dtype=np.float64)
    poly = np.ascontiguousarray(polygon, dtype=np.float64)
    n = pts.shape[0]
    m = poly.shape[0]
    if m < 3:
        raise ValueError("polygon needs at least 3 vertices")
    pxs = pts[:, 0].tolist()
    pys = pts[:, 1].tolist()
    vxs = poly[:, 0].tolist()
    vys = poly[:, 1].tolist()
    out = np.zeros(n, dtype=bool)
    for k in range(n):
        px = pxs[k]
        py = pys[k]
        inside = False
        on_edge = False
        for i in range(m):
            x1 = vxs[i]
            y1 = vys[i]
            j = i + 1 if i + 1 < m else 0
            x2 = vxs[j]
            y2 = vys[j]
            cross = (px - x1) * (y2 - y1) - (py - y1) * (x2 - x1)
            if (
                cross == 0.0
                and min(x1, x2) <= px <= max(x1, x2)
                and min(y1, y2) <= py <= max(y1, y2)
            ):
                on_edge = True
                break
            if (y1 > py) != (y2 > py):
                xint = (py - y1) * (x2 - x1) / (y2 - y1) + x1
                if px < xint:
                    inside = not inside
        out[k] = on_edge or inside
    return out


def kd_order(points: np.ndarray) -> np.ndarray:
    """Implicit balanced kd-tree layout over ``points``.

    Returns a permutation of point indices arranged so that the subtree
    over slice [lo, hi) has its node at mid=(lo+hi)//2, children in
    [lo, mid) and (mid, hi), axes alternating per depth starting at x.
    Coordinate ties sort by original index, so the layout is unique.
    """
    pts = np.ascontiguousarray(points, dtype=np.float64)
    n = pts.shape[0]
    order = np.arange(n, dtype=np.int64)
    stack = [(0, n, 0)]
    while stack:
        lo, hi, axis = stack.pop()
        if hi - lo <= 1:
            continue
        seg = order[lo:hi]
        seg = seg[np.lexsort((seg, pts[seg, axis]))]
        order[lo:hi] = seg
        mid = (lo + hi) // 2
        stack.append((lo, mid, 1 - axis))
        stack.append((mid + 1, hi, 1 - axis))
    return order


def nearest_neighbors(points, queries):
    """Nearest point index and squared distance for each query.

    ``points`` (M, 2) with M >= 1 and ``queries`` (N, 2) are float arrays.
    Backed by the kd-tree layout of :func:`kd_order`; ties on distance
    resolve to the lowest point index.  Returns (idx int64 (N,), d2 (N,)).
    """
    pts = np.ascontiguousarray(points, dtype=np.float64)
    qs = np.ascontiguousarray(queries, dtype=np.float64)
    m = pts.shape[0]
    nq = qs.shape[0]
    if m == 0:
        raise ValueError("nearest_neighbors needs at least one point")
    order = kd_order(pts).tolist()
    xs = pts[:, 0].tolist()
    ys = pts[:, 1].tolist()
    qxs = qs[:, 0].tolist()
    qys = qs[:, 1].tolist()
    out_idx = np.empty(nq, dtype=np.int64)
    out_d2 = np.empty(nq, dtype=np.float64)

    for k in range(nq):
        qx = qxs[k]
        qy = qys[k]
        best_d2 = math.inf
        best_i = -1

        # Recursive descent: near child first; the far child is visited
        # whenever the splitting-plane distance can still tie best_d2.
        def visit(lo: int, hi: int, axis: int) -> None:
            nonlocal best_d2, best_i
            if lo >= hi:
                return
            mid = (lo + hi) // 2
            i = order[mid]
            dx = qx - xs[i]
            dy = qy - ys[i]
            d2 = dx * dx + dy * dy
            if d2 < best_d2 or (d2 == best_d2 and i < best_i):
                best_d2 = d2
                best_i = i
            diff = dx if axis == 0 else dy
            if diff < 0.0:
                visit(lo, mid, 1 - axis)
                if diff * diff <= best_d2:
                    visit(mid + 1, hi, 1 - axis)
            else:
                visit(mid + 1, hi, 1 - axis)
                if diff * diff <= best_d2:
                    visit(lo, mid, 1 - axis)

        visit(0, m, 0)
        out_idx[k] = best_i
        out_d2[k] = best_d2
    return out_idx, out_d2
