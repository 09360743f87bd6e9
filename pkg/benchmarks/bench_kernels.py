#!/usr/bin/env python3
"""Benchmark the compiled geometry kernels against the pure-Python twins.

Runs each kernel on a realistic workload (a dense sketch raster, a
many-vertex contour, thousands of nearest-neighbor queries) and prints
per-backend timings with the speedup.  Results are also cross-checked for
bitwise equality, since backend-identical output is a package invariant.

Usage:
    python benchmarks/bench_kernels.py [--repeats 5]
"""

from __future__ import annotations

import argparse
import math
import random
import time

import numpy as np

from sketchparts.kernels import backends


def build_workload(seed: int = 42):
    rng = random.Random(seed)
    polylines = []
    for _ in range(60):
        n = rng.randint(2, 8)
        pts = [(rng.uniform(0, 799), rng.uniform(0, 799))]
        for _ in range(n - 1):
            x = min(max(pts[-1][0] + rng.uniform(-60, 60), 0), 799)
            y = min(max(pts[-1][1] + rng.uniform(-60, 60), 0), 799)
            pts.append((x, y))
        polylines.append(np.array(pts))

    angles = sorted(rng.uniform(0, 2 * math.pi) for _ in range(40))
    contour = np.array(
        [(400 + rng.uniform(120, 360) * math.cos(a),
          400 + rng.uniform(120, 360) * math.sin(a)) for a in angles]
    )
    pixels = np.array(
        [(float(rng.randint(0, 799)), float(rng.randint(0, 799))) for _ in range(20000)]
    )
    samples = np.array(
        [(rng.uniform(0, 800), rng.uniform(0, 800)) for _ in range(4000)]
    )
    queries = np.array(
        [(float(rng.randint(0, 799)), float(rng.randint(0, 799))) for _ in range(8000)]
    )
    return polylines, contour, pixels, samples, queries


def timed(fn, repeats: int) -> tuple[float, object]:
    best = math.inf
    result = None
    for _ in range(repeats):
        t0 = time.perf_counter()
        result = fn()
        best = min(best, time.perf_counter() - t0)
    return best, result


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--repeats", type=int, default=5)
    args = parser.parse_args()

    impls = backends()
    if "native" not in impls:
        print("note: compiled backend not built; benchmarking pure only")

    polylines, contour, pixels, samples, queries = build_workload()
    tasks = {
        "rasterize (60 polylines, 800px canvas)": lambda impl: [
            impl.rasterize_polyline(p, 2, 800, 800) for p in polylines
        ],
        "containment (20k pixels, 40-gon)": lambda impl: impl.points_in_polygon(
            pixels, contour
        ),
        "nearest (8k queries, 4k points)": lambda impl: impl.nearest_neighbors(
            samples, queries
        ),
    }

    width = max(len(name) for name in tasks) + 2
    header = f"{'kernel':<{width}}" + "".join(f"{name:>12}" for name in impls)
    if len(impls) > 1:
        header += f"{'speedup':>10}"
    print(header)
    print("-" * len(header))

    for name, task in tasks.items():
        times = {}
        results = {}
        for backend_name, impl in impls.items():
            times[backend_name], results[backend_name] = timed(
                lambda impl=impl: task(impl), args.repeats
            )
        row = f"{name:<{width}}" + "".join(
            f"{times[b] * 1000:>10.1f}ms" for b in impls
        )
        if "native" in impls:
            row += f"{times['pure'] / times['native']:>9.1f}x"
            _assert_equal(results["pure"], results["native"], name)
        print(row)
    if "native" in impls:
        print("\nresult equality between backends: verified")
    return 0


def _assert_equal(a, b, name: str) -> None:
    if isinstance(a, list):
        assert all(np.array_equal(x, y) for x, y in zip(a, b)), name
    elif isinstance(a, tuple):
        assert all(np.array_equal(x, y) for x, y in zip(a, b)), name
    else:
        assert np.array_equal(a, b), name


if __name__ == "__main__":
    raise SystemExit(main())
