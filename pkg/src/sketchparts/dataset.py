"""Dataset layout, text formats, loaders and serializers.

Layout under a dataset root::

    <root>/<category>/parts.txt                      one part name per line
    <root>/<category>/sketches/<id>.strokes          canvas + stroke records
    <root>/<category>/annotations/<id>.parts         named closed contours
    <root>/<category>/epitomes/<ordering>/<id>.keep  kept stroke ids
    <root>/<category>/reference.svg                  optional labeled guide image

Formats are line-oriented text so fixtures stay diffable.  ``#`` starts a
comment line, blank lines are ignored.  Floats are written with ``repr``
so serialization round-trips exactly.  Every load error carries the file
and line it came from.
"""

from __future__ import annotations

import os
import shlex
import tempfile
from dataclasses import dataclass
from pathlib import Path

from .model import (
    DEFAULT_CANVAS,
    AnnotatedSketch,
    CategoryPartList,
    Epitome,
    ModelError,
    PartAnnotation,
    Point2D,
    Sketch,
    Stroke,
    StrokeOrdering,
    validate_annotations_against,
    validate_epitome_against,
)

STROKES_SUFFIX = ".strokes"
ANNOTATIONS_SUFFIX = ".parts"
KEEP_SUFFIX = ".keep"


class DatasetError(Exception):
    """A dataset file is malformed or violates a cross-file invariant."""

    def __init__(self, message: str, path: Path | str | None = None, line: int | None = None):
        self.path = str(path) if path is not None else None
        self.line = line
        where = ""
        if self.path is not None:
            where = self.path if line is None else f"{self.path}:{line}"
            where += ": "
        super().__init__(where + message)


def _content_lines(path: Path) -> list[tuple[int, str]]:
    try:
        raw = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise DatasetError(f"cannot read file: {exc.strerror or exc}", path) from exc
    out = []
    for lineno, line in enumerate(raw.splitlines(), start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        out.append((lineno, stripped))
    return out


def _parse_point(token: str, path: Path, lineno: int) -> Point2D:
    try:
        xs, ys = token.split(",")
        return Point2D(float(xs), float(ys))
    except (ValueError, ModelError) as exc:
        raise DatasetError(f"bad point {token!r}: {exc}", path, lineno) from exc


def atomic_write_text(path: Path, text: str) -> None:
    """Write via a temp file in the same directory, then rename."""
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=path.name + ".", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        try:
            os.unlink(tmp)
        except OSError:
            pass
        raise


# -- part lists ---------------------------------------------------------


def load_part_list(category_dir: Path) -> CategoryPartList:
    path = Path(category_dir) / "parts.txt"
    names = [text for _, text in _content_lines(path)]
    try:
        return CategoryPartList(category=Path(category_dir).name, parts=tuple(names))
    except ModelError as exc:
        raise DatasetError(str(exc), path) from exc


def dump_part_list(parts: CategoryPartList) -> str:
    return "".join(f"{name}\n" for name in parts.parts)


# -- sketches -----------------------------------------------------------


def load_sketch(
    path: Path,
    category: str,
    sketch_id: str | None = None,
    default_canvas: tuple[int, int] = DEFAULT_CANVAS,
) -> Sketch:
    path = Path(path)
    if sketch_id is None:
        sketch_id = path.name.removesuffix(STROKES_SUFFIX)
    canvas = default_canvas
    strokes: list[Stroke] = []
    for lineno, text in _content_lines(path):
        fields = text.split()
        keyword = fields[0]
        if keyword == "canvas":
            if len(fields) != 3:
                raise DatasetError("canvas line needs width and height", path, lineno)
            try:
                canvas = (int(fields[1]), int(fields[2]))
            except ValueError as exc:
                raise DatasetError(f"bad canvas size: {exc}", path, lineno) from exc
        elif keyword == "stroke":
            if len(fields) < 6:
                raise DatasetError(
                    "stroke line needs id, temporal index, width and at least 2 points",
                    path,
                    lineno,
                )
            try:
                stroke_id, temporal, width = int(fields[1]), int(fields[2]), int(fields[3])
            except ValueError as exc:
                raise DatasetError(f"bad stroke header: {exc}", path, lineno) from exc
            points = tuple(_parse_point(tok, path, lineno) for tok in fields[4:])
            w, h = canvas
            for p in points:
                if not (0 <= p.x <= w - 1 and 0 <= p.y <= h - 1):
                    raise DatasetError(
                        f"point ({p.x}, {p.y}) outside canvas {w}x{h}", path, lineno
                    )
            try:
                strokes.append(
                    Stroke(id=stroke_id, temporal_index=temporal, points=points, width=width)
                )
            except ModelError as exc:
                raise DatasetError(str(exc), path, lineno) from exc
        else:
            raise DatasetError(f"unknown record {keyword!r}", path, lineno)
    try:
        return Sketch(category=category, sketch_id=sketch_id, canvas=canvas, strokes=tuple(strokes))
    except ModelError as exc:
        raise DatasetError(str(exc), path) from exc


def dump_sketch(sketch: Sketch) -> str:
    lines = [f"canvas {sketch.canvas[0]} {sketch.canvas[1]}"]
    for s in sketch.strokes:
        pts = " ".join(f"{p.x!r},{p.y!r}" for p in s.points)
        lines.append(f"stroke {s.id} {s.temporal_index} {s.width} {pts}")
    return "".join(line + "\n" for line in lines)


# -- annotations --------------------------------------------------------


def load_annotations(path: Path) -> tuple[PartAnnotation, ...]:
    path = Path(path)
    annotations = []
    for lineno, text in _content_lines(path):
        try:
            fields = shlex.split(text)
        except ValueError as exc:
            raise DatasetError(f"unparseable line: {exc}", path, lineno) from exc
        if not fields or fields[0] != "part":
            raise DatasetError(f"expected a 'part' record, got {fields[0]!r}", path, lineno)
        if len(fields) < 5:
            raise DatasetError("part record needs a name and at least 3 points", path, lineno)
        name = fields[1]
        points = tuple(_parse_point(tok, path, lineno) for tok in fields[2:])
        try:
            annotations.append(PartAnnotation(part_name=name, contour=points))
        except ModelError as exc:
            raise DatasetError(str(exc), path, lineno) from exc
    return tuple(annotations)


def dump_annotations(annotations: tuple[PartAnnotation, ...] | list[PartAnnotation]) -> str:
    lines = []
    for ann in annotations:
        if '"' in ann.part_name or "\\" in ann.part_name:
            raise DatasetError(f"part name {ann.part_name!r} cannot be serialized")
        pts = " ".join(f"{p.x!r},{p.y!r}" for p in ann.contour)
        lines.append(f'part "{ann.part_name}" {pts}')
    return "".join(line + "\n" for line in lines)


# -- epitomes -----------------------------------------------------------


def load_epitome(path: Path, sketch: Sketch, ordering: StrokeOrdering) -> Epitome:
    path = Path(path)
    ids = set()
    for lineno, text in _content_lines(path):
        for tok in text.split():
            try:
                ids.add(int(tok))
            except ValueError as exc:
                raise DatasetError(f"bad stroke id {tok!r}", path, lineno) from exc
    epitome = Epitome(sketch_id=sketch.sketch_id, kept_stroke_ids=frozenset(ids), ordering=ordering)
    try:
        validate_epitome_against(epitome, sketch)
    except ModelError as exc:
        raise DatasetError(str(exc), path) from exc
    return epitome


def dump_epitome(epitome: Epitome) -> str:
    return "".join(f"{i}\n" for i in sorted(epitome.kept_stroke_ids))


# -- category / root loading --------------------------------------------


@dataclass(frozen=True)
class CategoryData:
    """One category's validated part list and sketches."""

    directory: Path
    parts: CategoryPartList
    sketches: tuple[AnnotatedSketch, ...]

    @property
    def category(self) -> str:
        return self.parts.category

    def annotated_only(self) -> tuple[AnnotatedSketch, ...]:
        return tuple(a for a in self.sketches if a.annotations)


def load_category(
    category_dir: Path, default_canvas: tuple[int, int] = DEFAULT_CANVAS
) -> CategoryData:
    """Load and validate one category directory.

    Checks every structural invariant at load time; any violation raises
    :class:`DatasetError` naming the file (and line where known).
    """
    category_dir = Path(category_dir)
    parts = load_part_list(category_dir)
    sketches_dir = category_dir / "sketches"
    if not sketches_dir.is_dir():
        raise DatasetError("missing sketches directory", sketches_dir)
    annotated = []
    for sketch_path in sorted(sketches_dir.glob(f"*{STROKES_SUFFIX}")):
        sketch = load_sketch(sketch_path, category=parts.category, default_canvas=default_canvas)
        ann_path = category_dir / "annotations" / (sketch.sketch_id + ANNOTATIONS_SUFFIX)
        annotations: tuple[PartAnnotation, ...] = ()
        if ann_path.exists():
            annotations = load_annotations(ann_path)
        record = AnnotatedSketch(sketch=sketch, annotations=annotations)
        try:
            validate_annotations_against(record, parts)
        except ModelError as exc:
            raise DatasetError(str(exc), ann_path) from exc
        annotated.append(record)
    annotated.sort(key=lambda a: a.sketch.sketch_id)
    return CategoryData(directory=category_dir, parts=parts, sketches=tuple(annotated))


def load_epitomes(
    category_data: CategoryData, ordering: StrokeOrdering
) -> dict[str, Epitome]:
    """Epitomes for every annotated sketch of the category, keyed by sketch id."""
    out = {}
    epi_dir = category_data.directory / "epitomes" / ordering.value
    for annotated in category_data.annotated_only():
        sketch = annotated.sketch
        path = epi_dir / (sketch.sketch_id + KEEP_SUFFIX)
        if not path.exists():
            raise DatasetError(
                f"missing epitome for sketch {sketch.sketch_id} under ordering "
                f"{ordering.value!r}",
                path,
            )
        out[sketch.sketch_id] = load_epitome(path, sketch, ordering)
    return out


def load_dataset_root(
    root: Path, default_canvas: tuple[int, int] = DEFAULT_CANVAS
) -> list[CategoryData]:
    """All category directories under a dataset root, sorted by name."""
    root = Path(root)
    if not root.is_dir():
        raise DatasetError("dataset root is not a directory", root)
    categories = []
    for child in sorted(root.iterdir()):
        if child.is_dir() and (child / "parts.txt").exists():
            categories.append(load_category(child, default_canvas=default_canvas))
    if not categories:
        raise DatasetError("no category directories found (need <category>/parts.txt)", root)
    return categories


# -- write helpers used by the generator and the annotation service -----


def write_category(
    root: Path,
    parts: CategoryPartList,
    sketches: list[AnnotatedSketch],
    epitomes: dict[str, dict[StrokeOrdering, Epitome]] | None = None,
) -> Path:
    """Write a full category directory; returns its path."""
    category_dir = Path(root) / parts.category
    category_dir.mkdir(parents=True, exist_ok=True)
    atomic_write_text(category_dir / "parts.txt", dump_part_list(parts))
    for annotated in sketches:
        sketch = annotated.sketch
        atomic_write_text(
            category_dir / "sketches" / (sketch.sketch_id + STROKES_SUFFIX),
            dump_sketch(sketch),
        )
        if annotated.annotations:
            atomic_write_text(
                category_dir / "annotations" / (sketch.sketch_id + ANNOTATIONS_SUFFIX),
                dump_annotations(annotated.annotations),
            )
    for sketch_id, per_ordering in (epitomes or {}).items():
        for ordering, epitome in per_ordering.items():
            atomic_write_text(
                category_dir / "epitomes" / ordering.value / (sketch_id + KEEP_SUFFIX),
                dump_epitome(epitome),
            )
    return category_dir
