# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled geometry kernels.

Mirror of :mod:`sketchparts.kernels.pure`: same algorithms, same order of
floating-point operations, so results are bitwise identical.  Keep the two
files in sync; the pure module documents the shared conventions.
"""

import math

import numpy as np

from libc.math cimport floor

BACKEND_NAME = "native"


cdef inline void _paint(unsigned char[:, ::1] grid, long x, long y,
                        long lo, long hi, long w, long h) noexcept:
    cdef long dx, dy, px, py
    for dx in range(lo, hi + 1):
        px = x + dx
        if px < 0 or px >= w:
            continue
        for dy in range(lo, hi + 1):
            py = y + dy
            if 0 <= py < h:
                grid[py, px] = 1


cdef void _bresenham(unsigned char[:, ::1] grid, long x0, long y0, long x1, long y1,
                     long lo, long hi, long w, long h) noexcept:
    cdef long dx = x1 - x0 if x1 >= x0 else x0 - x1
    cdef long dy = y1 - y0 if y1 >= y0 else y0 - y1
    cdef long sx = 1 if x0 < x1 else -1
    cdef long sy = 1 if y0 < y1 else -1
    cdef long err = dx - dy
    cdef long e2, x = x0, y = y0
    while True:
        _paint(grid, x, y, lo, hi, w, h)
        if x == x1 and y == y1:
            return
        e2 = 2 * err
        if e2 > -dy:
            err -= dy
            x += sx
        if e2 < dx:
            err += dx
            y += sy


def rasterize_polyline(points, width, canvas_w, canvas_h):
    """See sketchparts.kernels.pure.rasterize_polyline."""
    pts = np.ascontiguousarray(points, dtype=np.float64)
    if pts.size == 0:
        return np.empty((0, 2), dtype=np.int64)
    cdef double[:, ::1] p = pts
    cdef long n = p.shape[0]
    cdef long lo = -((width - 1) // 2)
    cdef long hi = width // 2
    # Paint into a grid covering just the dilated stroke bounding box; the
    # canvas clip happens after extraction.  Row-major nonzero order plus a
    # uniform offset keeps the canonical (y, x) sort.
    cdef long k
    cdef long ix, iy, min_x, max_x, min_y, max_y
    min_x = min_y = 2 ** 60
    max_x = max_y = -2 ** 60
    for k in range(n):
        ix = <long>floor(p[k, 0] + 0.5)
        iy = <long>floor(p[k, 1] + 0.5)
        if ix < min_x: min_x = ix
        if ix > max_x: max_x = ix
        if iy < min_y: min_y = iy
        if iy > max_y: max_y = iy
    cdef long ox = min_x + lo
    cdef long oy = min_y + lo
    cdef long gw = (max_x + hi) - ox + 1
    cdef long gh = (max_y + hi) - oy + 1
    grid_arr = np.zeros((gh, gw), dtype=np.uint8)
    cdef unsigned char[:, ::1] grid = grid_arr
    cdef long ax, ay, bx, by
    if n == 1:
        ax = <long>floor(p[0, 0] + 0.5)
        ay = <long>floor(p[0, 1] + 0.5)
        _paint(grid, ax - ox, ay - oy, lo, hi, gw, gh)
    for k in range(n - 1):
        ax = <long>floor(p[k, 0] + 0.5)
        ay = <long>floor(p[k, 1] + 0.5)
        bx = <long>floor(p[k + 1, 0] + 0.5)
        by = <long>floor(p[k + 1, 1] + 0.5)
        _bresenham(grid, ax - ox, ay - oy, bx - ox, by - oy, lo, hi, gw, gh)
    rows, cols = np.nonzero(grid_arr)
    xs = cols.astype(np.int64) + ox
    ys = rows.astype(np.int64) + oy
    keep = (xs >= 0) & (xs < canvas_w) & (ys >= 0) & (ys < canvas_h)
    out = np.empty((int(keep.sum()), 2), dtype=np.int64)
    out[:, 0] = xs[keep]
    out[:, 1] = ys[keep]
    return out


def points_in_polygon(points, polygon):
    """See sketchparts.kernels.pure.points_in_polygon."""
    pts = np.ascontiguousarray(points, dtype=np.float64)
    poly = np.ascontiguousarray(polygon, dtype=np.float64)
    cdef double[:, ::1] p = pts
    cdef double[:, ::1] v = poly
    cdef Py_ssize_t n = p.shape[0]
    cdef Py_ssize_t m = v.shape[0]
    if m < 3:
        raise ValueError("polygon needs at least 3 vertices")
    out_arr = np.zeros(n, dtype=np.uint8)
    cdef unsigned char[::1] out = out_arr
    cdef Py_ssize_t k, i, j
    cdef double px, py, x1, y1, x2, y2, cross, xint
    cdef bint inside, on_edge
    for k in range(n):
        px = p[k, 0]
        py = p[k, 1]
        inside = False
        on_edge = False
        for i in range(m):
            x1 = v[i, 0]
            y1 = v[i, 1]
            j = i + 1 if i + 1 < m else 0
            x2 = v[j, 0]
            y2 = v[j, 1]
            cross = (px - x1) * (y2 - y1) - (py - y1) * (x2 - x1)
            if cross == 0.0 and (x1 if x1 < x2 else x2) <= px <= (x1 if x1 > x2 else x2) \
                    and (y1 if y1 < y2 else y2) <= py <= (y1 if y1 > y2 else y2):
                on_edge = True
                break
            if (y1 > py) != (y2 > py):
                xint = (py - y1) * (x2 - x1) / (y2 - y1) + x1
                if px < xint:
                    inside = not inside
        out[k] = 1 if (on_edge or inside) else 0
    return out_arr.view(np.bool_)


def kd_order(points):
    """See sketchparts.kernels.pure.kd_order."""
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


cdef void _kd_query(double* xs, double* ys, Py_ssize_t* order,
                    Py_ssize_t lo, Py_ssize_t hi, int axis,
                    double qx, double qy,
                    double* best_d2, Py_ssize_t* best_i) noexcept:
    if lo >= hi:
        return
    cdef Py_ssize_t mid = (lo + hi) // 2
    cdef Py_ssize_t i = order[mid]
    cdef double dx = qx - xs[i]
    cdef double dy = qy - ys[i]
    cdef double d2 = dx * dx + dy * dy
    if d2 < best_d2[0] or (d2 == best_d2[0] and i < best_i[0]):
        best_d2[0] = d2
        best_i[0] = i
    cdef double diff = dx if axis == 0 else dy
    if diff < 0.0:
        _kd_query(xs, ys, order, lo, mid, 1 - axis, qx, qy, best_d2, best_i)
        if diff * diff <= best_d2[0]:
            _kd_query(xs, ys, order, mid + 1, hi, 1 - axis, qx, qy, best_d2, best_i)
    else:
        _kd_query(xs, ys, order, mid + 1, hi, 1 - axis, qx, qy, best_d2, best_i)
        if diff * diff <= best_d2[0]:
            _kd_query(xs, ys, order, lo, mid, 1 - axis, qx, qy, best_d2, best_i)


def nearest_neighbors(points, queries):
    """See sketchparts.kernels.pure.nearest_neighbors."""
    pts = np.ascontiguousarray(points, dtype=np.float64)
    qs = np.ascontiguousarray(queries, dtype=np.float64)
    cdef Py_ssize_t m = pts.shape[0]
    cdef Py_ssize_t nq = qs.shape[0]
    if m == 0:
        raise ValueError("nearest_neighbors needs at least one point")
    order_arr = np.ascontiguousarray(kd_order(pts), dtype=np.intp)
    xs_arr = np.ascontiguousarray(pts[:, 0])
    ys_arr = np.ascontiguousarray(pts[:, 1])
    out_idx = np.empty(nq, dtype=np.intp)
    out_d2 = np.empty(nq, dtype=np.float64)
    cdef double[::1] xs = xs_arr
    cdef double[::1] ys = ys_arr
    cdef Py_ssize_t[::1] order = order_arr
    cdef double[:, ::1] q = qs
    cdef Py_ssize_t[::1] oidx = out_idx
    cdef double[::1] od2 = out_d2
    cdef Py_ssize_t k, best_i
    cdef double best_d2
    for k in range(nq):
        best_d2 = math.inf
        best_i = -1
        _kd_query(&xs[0], &ys[0], &order[0], 0, m, 0, q[k, 0], q[k, 1], &best_d2, &best_i)
        oidx[k] = best_i
        od2[k] = best_d2
    return out_idx.astype(np.int64, copy=False), out_d2
