"""Command-line front end: analyze, order, synth, serve."""

from __future__ import annotations

import argparse
import json
import multiprocessing
import sys
from dataclasses import dataclass
from pathlib import Path

from . import render, synth
from .dataset import CategoryData, DatasetError, atomic_write_text, load_dataset_root, load_epitomes, load_sketch
from .geometry import CountMode, GeometryError
from .importance import (
    ALTERNATE_RULE_NOTE,
    DEFAULT_DIST_THRESHOLD,
    DEFAULT_EPSILON,
    AnalysisError,
    Normalization,
    aggregate_report,
    per_sketch_weights,
)
from .model import ImportanceReport, ModelError, StrokeOrdering
from .render import RenderError
from .service import serve_forever


@dataclass
class RunConfig:
    dataset_root: Path
    output_dir: Path
    orderings: tuple[StrokeOrdering, ...] = tuple(StrokeOrdering)
    epsilon: float = DEFAULT_EPSILON
    dist_threshold: float = DEFAULT_DIST_THRESHOLD
    count_mode: CountMode = CountMode.UNIQUE_BOUNDARY
    normalization: Normalization = Normalization.MAX
    jobs: int = 1
    default_canvas: tuple[int, int] = (800, 800)
    cloud_canvas: tuple[int, int] = (640, 480)
    cloud_seed: int = 0
    font_range: tuple[float, float] = (10.0, 48.0)

    def __post_init__(self):
        self.dataset_root = Path(self.dataset_root)
        self.output_dir = Path(self.output_dir)
        if not (0.0 <= self.epsilon < 1.0):
            raise AnalysisError(f"epsilon must be in [0, 1), got {self.epsilon}")
        if self.dist_threshold <= 0:
            raise AnalysisError(f"dist_threshold must be positive, got {self.dist_threshold}")
        if self.jobs < 1:
            raise AnalysisError(f"jobs must be >= 1, got {self.jobs}")
        if not self.dataset_root.is_dir():
            raise DatasetError("dataset root is not a directory", self.dataset_root)


def _per_sketch_job(job):
    annotated, epitome, parts, epsilon, dist_threshold, count_mode = job
    return per_sketch_weights(annotated, epitome, parts, epsilon, dist_threshold, count_mode)


def analyze_category(
    category: CategoryData,
    ordering: StrokeOrdering,
    config: RunConfig,
    pool=None,
) -> ImportanceReport:
    """One category report; per-sketch work optionally fans out to a pool.

    Sketches are processed in sketch-id order and merged in that same
    order, so parallel and sequential runs aggregate identically.
    """
    epitomes = load_epitomes(category, ordering)
    annotated = category.annotated_only()
    if not annotated:
        raise DatasetError(f"category {category.category} has no annotated sketches",
                           category.directory)
    jobs = [
        (rec, epitomes[rec.sketch.sketch_id], category.parts,
         config.epsilon, config.dist_threshold, config.count_mode)
        for rec in annotated
    ]
    if pool is None:
        per = [_per_sketch_job(job) for job in jobs]
    else:
        per = pool.map(_per_sketch_job, jobs)
    return aggregate_report(
        per,
        category.parts,
        ordering,
        config.epsilon,
        config.dist_threshold,
        config.count_mode,
        config.normalization,
    )


def report_payload(reports: list[ImportanceReport], ordering: StrokeOrdering) -> dict:
    return {
        "schema": "sketchparts-report-v1",
        "ordering": ordering.value,
        "parameters": {
            "epsilon": reports[0].epsilon,
            "dist_threshold": reports[0].dist_threshold,
            "count_mode": reports[0].count_mode,
            "normalization": reports[0].normalization,
            "notes": [ALTERNATE_RULE_NOTE],
        },
        "categories": [
            {
                "category": r.category,
                "sketch_count": r.sketch_count,
                "weights": [[name, weight] for name, weight in r.weights],
                "warnings": [
                    {
                        "code": w.code,
                        "message": w.message,
                        "sketch_id": w.sketch_id,
                        "annotation_index": w.annotation_index,
                        "part_name": w.part_name,
                    }
                    for w in r.warnings
                ],
            }
            for r in sorted(reports, key=lambda r: r.category)
        ],
    }


def run_analysis(config: RunConfig) -> list[Path]:
    """Full pipeline: reports, tables and clouds for every ordering."""
    categories = load_dataset_root(config.dataset_root, default_canvas=config.default_canvas)
    out_dir = config.output_dir
    out_dir.mkdir(parents=True, exist_ok=True)
    written: list[Path] = []

    pool = None
    try:
        if config.jobs > 1:
            pool = multiprocessing.Pool(config.jobs)
        for ordering in config.orderings:
            reports = [
                analyze_category(category, ordering, config, pool)
                for category in categories
            ]
            payload = report_payload(reports, ordering)
            report_path = out_dir / f"report_{ordering.value}.json"
            atomic_write_text(report_path, json.dumps(payload, indent=2, sort_keys=True) + "\n")
            written.append(report_path)

            table_path = out_dir / f"table_{ordering.value}.txt"
            atomic_write_text(table_path, render.render_table(reports))
            written.append(table_path)

            for report in reports:
                layout = render.layout_cloud(
                    report,
                    canvas=config.cloud_canvas,
                    min_pt=config.font_range[0],
                    max_pt=config.font_range[1],
                    seed=config.cloud_seed,
                )
                cloud_path = out_dir / f"cloud_{report.category}_{ordering.value}.svg"
                svg = render.render_cloud_svg(
                    layout, title=f"{report.category} ({ordering.value})"
                )
                atomic_write_text(cloud_path, svg)
                written.append(cloud_path)
    finally:
        if pool is not None:
            pool.close()
            pool.join()
    return written


def _parse_orderings(value: str) -> tuple[StrokeOrdering, ...]:
    if value == "all":
        return tuple(StrokeOrdering)
    return (StrokeOrdering.parse(value),)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="sketchparts",
        description="Part-importance analysis for sparsified freehand sketches",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze", help="compute reports, tables and word clouds")
    p.add_argument("--root", required=True, help="dataset root directory")
    p.add_argument("--out", required=True, help="output directory")
    p.add_argument("--ordering", default="all",
                   choices=["temporal", "length", "alternate", "all"])
    p.add_argument("--epsilon", type=float, default=DEFAULT_EPSILON,
                   help="candidate pixel-ratio threshold")
    p.add_argument("--dist-threshold", type=float, default=DEFAULT_DIST_THRESHOLD,
                   help="boundary match distance in pixels")
    p.add_argument("--count-mode", default=CountMode.UNIQUE_BOUNDARY.value,
                   choices=[m.value for m in CountMode])
    p.add_argument("--normalization", default=Normalization.MAX.value,
                   choices=[n.value for n in Normalization])
    p.add_argument("--jobs", type=int, default=1, help="parallel sketch workers")
    p.add_argument("--default-canvas", type=int, nargs=2, default=[800, 800],
                   metavar=("W", "H"), help="canvas for .strokes files without a header")
    p.add_argument("--cloud-seed", type=int, default=0)

    p = sub.add_parser("order", help="print stroke ids under an ordering")
    p.add_argument("sketch_file", help="a .strokes file")
    p.add_argument("--ordering", default="temporal",
                   choices=["temporal", "length", "alternate"])

    p = sub.add_parser("synth", help="generate the synthetic demo dataset")
    p.add_argument("--out", required=True, help="dataset root to create")
    p.add_argument("--seed", type=int, default=synth.DEFAULT_SEED)
    p.add_argument("--sketches", type=int, default=synth.DEFAULT_SKETCHES,
                   help="sketches per category")
    p.add_argument("--keep-fraction", type=float, default=synth.DEFAULT_KEEP_FRACTION,
                   help="stroke fraction retained by generated epitomes")
    p.add_argument("--canvas", type=int, nargs=2, default=list(synth.DEFAULT_CANVAS),
                   metavar=("W", "H"))

    p = sub.add_parser("serve", help="run the local annotation service")
    p.add_argument("--root", required=True, help="dataset root directory")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8077)
    p.add_argument("--ui-dir", default=None, help="directory of built UI assets")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "analyze":
            config = RunConfig(
                dataset_root=Path(args.root),
                output_dir=Path(args.out),
                orderings=_parse_orderings(args.ordering),
                epsilon=args.epsilon,
                dist_threshold=args.dist_threshold,
                count_mode=CountMode.parse(args.count_mode),
                normalization=Normalization.parse(args.normalization),
                jobs=args.jobs,
                default_canvas=tuple(args.default_canvas),
                cloud_seed=args.cloud_seed,
            )
            written = run_analysis(config)
            for path in written:
                print(path)
        elif args.command == "order":
            sketch = load_sketch(Path(args.sketch_file), category="")
            from .ordering import order_strokes

            ids = order_strokes(sketch, StrokeOrdering.parse(args.ordering))
            print(" ".join(str(i) for i in ids))
        elif args.command == "synth":
            written = synth.generate_dataset(
                Path(args.out),
                sketches_per_category=args.sketches,
                canvas=tuple(args.canvas),
                keep_fraction=args.keep_fraction,
                seed=args.seed,
            )
            for path in written:
                print(path)
        elif args.command == "serve":
            serve_forever(
                Path(args.root),
                host=args.host,
                port=args.port,
                ui_dir=Path(args.ui_dir) if args.ui_dir else None,
            )
    except (DatasetError, ModelError, AnalysisError, GeometryError, RenderError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
