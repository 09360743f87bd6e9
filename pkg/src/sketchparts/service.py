"""Local annotation service.

Serves sketches, part lists and reference images to the browser tool and
persists validated annotation sets.  JSON request/response bodies; dataset
files on disk stay in the text formats of :mod:`sketchparts.dataset`.

Binds to loopback by default: this is a single-lab tool.  Saves are
write-temp-then-rename, so concurrent annotators on different sketches
never corrupt each other and a re-save of the same sketch is
last-writer-wins.
"""

from __future__ import annotations

import json
import re
import threading
from dataclasses import dataclass
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from pathlib import Path
from urllib.parse import unquote

from .dataset import (
    ANNOTATIONS_SUFFIX,
    CategoryData,
    DatasetError,
    atomic_write_text,
    dump_annotations,
    load_annotations,
    load_dataset_root,
)
from .model import ModelError, PartAnnotation, Point2D, Sketch, close_contour, polygon_area

REFERENCE_NAMES = ("reference.svg", "reference.png")

_CONTENT_TYPES = {
    ".html": "text/html; charset=utf-8",
    ".js": "text/javascript; charset=utf-8",
    ".mjs": "text/javascript; charset=utf-8",
    ".css": "text/css; charset=utf-8",
    ".svg": "image/svg+xml",
    ".png": "image/png",
    ".json": "application/json",
    ".map": "application/json",
}


class SaveRejected(Exception):
    def __init__(self, code: str, message: str):
        self.code = code
        super().__init__(message)


@dataclass(frozen=True)
class SketchEntry:
    category: CategoryData
    sketch: Sketch

    @property
    def annotations_path(self) -> Path:
        return (
            self.category.directory
            / "annotations"
            / (self.sketch.sketch_id + ANNOTATIONS_SUFFIX)
        )


class AnnotationStore:
    """Dataset index plus validated, atomic annotation persistence."""

    def __init__(self, root: Path):
        self.root = Path(root)
        self.categories = load_dataset_root(self.root)
        self.by_sketch_id: dict[str, SketchEntry] = {}
        for category in self.categories:
            for annotated in category.sketches:
                sketch = annotated.sketch
                if sketch.sketch_id in self.by_sketch_id:
                    raise DatasetError(
                        f"sketch id {sketch.sketch_id!r} appears in more than one category",
                        self.root,
                    )
                self.by_sketch_id[sketch.sketch_id] = SketchEntry(category, sketch)

    def category(self, name: str) -> CategoryData | None:
        for category in self.categories:
            if category.category == name:
                return category
        return None

    def annotations_for(self, entry: SketchEntry) -> tuple[PartAnnotation, ...]:
        path = entry.annotations_path
        if not path.exists():
            return ()
        return load_annotations(path)

    def save_annotations(self, entry: SketchEntry, payload) -> tuple[PartAnnotation, ...]:
        """Validate an annotation list payload and persist it atomically."""
        if not isinstance(payload, dict) or not isinstance(payload.get("annotations"), list):
            raise SaveRejected("bad-request", "body must be {\"annotations\": [...]}")
        known = set(entry.category.parts.parts)
        annotations = []
        for i, item in enumerate(payload["annotations"]):
            if not isinstance(item, dict):
                raise SaveRejected("bad-request", f"annotation #{i} must be an object")
            name = item.get("part_name")
            points = item.get("points")
            if not isinstance(name, str) or not name:
                raise SaveRejected("bad-request", f"annotation #{i} needs a part_name")
            if name not in known:
                raise SaveRejected(
                    "unknown-part",
                    f"annotation #{i}: unknown part {name!r} "
                    f"(category parts: {', '.join(entry.category.parts.parts)})",
                )
            if not isinstance(points, list):
                raise SaveRejected("bad-request", f"annotation #{i} needs a points list")
            try:
                contour = tuple(Point2D(float(x), float(y)) for x, y in points)
            except (TypeError, ValueError, ModelError) as exc:
                raise SaveRejected("invalid-point", f"annotation #{i}: {exc}") from exc
            if len(close_contour(contour)) < 3:
                raise SaveRejected(
                    "too-few-points",
                    f"annotation #{i} ({name!r}): a closed contour needs at least 3 points",
                )
            if polygon_area(close_contour(contour)) == 0.0:
                raise SaveRejected(
                    "degenerate-contour",
                    f"annotation #{i} ({name!r}): contour encloses zero area",
                )
            annotations.append(PartAnnotation(part_name=name, contour=contour))
        atomic_write_text(entry.annotations_path, dump_annotations(annotations))
        return tuple(annotations)


def _sketch_json(entry: SketchEntry) -> dict:
    sketch = entry.sketch
    return {
        "sketch_id": sketch.sketch_id,
        "category": sketch.category,
        "canvas": [sketch.canvas[0], sketch.canvas[1]],
        "parts": list(entry.category.parts.parts),
        "strokes": [
            {
                "id": s.id,
                "temporal_index": s.temporal_index,
                "width": s.width,
                "points": [[p.x, p.y] for p in s.points],
            }
            for s in sketch.strokes
        ],
    }


def _annotations_json(annotations) -> dict:
    return {
        "annotations": [
            {"part_name": a.part_name, "points": [[p.x, p.y] for p in a.contour]}
            for a in annotations
        ]
    }


class AnnotationHandler(BaseHTTPRequestHandler):
    server_version = "sketchparts/0.1"

    # route table: (method, compiled pattern, handler name)
    ROUTES = [
        ("GET", re.compile(r"^/categories$"), "categories"),
        ("GET", re.compile(r"^/categories/([^/]+)/sketches$"), "category_sketches"),
        ("GET", re.compile(r"^/categories/([^/]+)/reference-image$"), "reference_image"),
        ("GET", re.compile(r"^/sketches/([^/]+)$"), "sketch"),
        ("GET", re.compile(r"^/sketches/([^/]+)/annotations$"), "get_annotations"),
        ("PUT", re.compile(r"^/sketches/([^/]+)/annotations$"), "put_annotations"),
    ]

    def log_message(self, fmt, *args):
        if getattr(self.server, "verbose", False):
            super().log_message(fmt, *args)

    @property
    def store(self) -> AnnotationStore:
        return self.server.store

    def _send_json(self, payload, status: int = 200) -> None:
        body = json.dumps(payload, sort_keys=True).encode("utf-8")
        self.send_response(status)
        self.send_header("Content-Type", "application/json")
        self.send_header("Content-Length", str(len(body)))
        self.end_headers()
        self.wfile.write(body)

    def _send_error_json(self, status: int, code: str, message: str) -> None:
        self._send_json({"error": {"code": code, "message": message}}, status=status)

    def _dispatch(self, method: str) -> None:
        path = unquote(self.path.split("?", 1)[0])
        for route_method, pattern, name in self.ROUTES:
            if route_method != method:
                continue
            match = pattern.match(path)
            if match:
                getattr(self, "handle_" + name)(*match.groups())
                return
        if method == "GET" and self._serve_static(path):
            return
        self._send_error_json(404, "not-found", f"no route for {method} {path}")

    def do_GET(self):
        self._dispatch("GET")

    def do_PUT(self):
        self._dispatch("PUT")

    # -- handlers --------------------------------------------------------

    def handle_categories(self):
        payload = {
            "categories": [
                {
                    "name": c.category,
                    "parts": list(c.parts.parts),
                    "sketch_count": len(c.sketches),
                }
                for c in self.store.categories
            ]
        }
        self._send_json(payload)

    def handle_category_sketches(self, name: str):
        category = self.store.category(name)
        if category is None:
            self._send_error_json(404, "unknown-category", f"no category {name!r}")
            return
        sketches = []
        for annotated in category.sketches:
            entry = self.store.by_sketch_id[annotated.sketch.sketch_id]
            sketches.append(
                {
                    "sketch_id": annotated.sketch.sketch_id,
                    "annotated": entry.annotations_path.exists(),
                    "stroke_count": len(annotated.sketch.strokes),
                }
            )
        self._send_json({"sketches": sketches})

    def handle_reference_image(self, name: str):
        category = self.store.category(name)
        if category is None:
            self._send_error_json(404, "unknown-category", f"no category {name!r}")
            return
        for filename in REFERENCE_NAMES:
            path = category.directory / filename
            if path.exists():
                body = path.read_bytes()
                self.send_response(200)
                self.send_header("Content-Type", _CONTENT_TYPES[path.suffix])
                self.send_header("Content-Length", str(len(body)))
                self.end_headers()
                self.wfile.write(body)
                return
        self._send_error_json(404, "no-reference-image", f"category {name!r} has no reference image")

    def _entry_or_404(self, sketch_id: str) -> SketchEntry | None:
        entry = self.store.by_sketch_id.get(sketch_id)
        if entry is None:
            self._send_error_json(404, "unknown-sketch", f"no sketch {sketch_id!r}")
        return entry

    def handle_sketch(self, sketch_id: str):
        entry = self._entry_or_404(sketch_id)
        if entry is not None:
            self._send_json(_sketch_json(entry))

    def handle_get_annotations(self, sketch_id: str):
        entry = self._entry_or_404(sketch_id)
        if entry is None:
            return
        try:
            annotations = self.store.annotations_for(entry)
        except DatasetError as exc:
            self._send_error_json(500, "corrupt-annotations", str(exc))
            return
        self._send_json(_annotations_json(annotations))

    def handle_put_annotations(self, sketch_id: str):
        entry = self._entry_or_404(sketch_id)
        if entry is None:
            return
        length = int(self.headers.get("Content-Length") or 0)
        raw = self.rfile.read(length)
        try:
            payload = json.loads(raw.decode("utf-8"))
        except (UnicodeDecodeError, json.JSONDecodeError) as exc:
            self._send_error_json(400, "bad-request", f"body is not valid JSON: {exc}")
            return
        try:
            saved = self.store.save_annotations(entry, payload)
        except SaveRejected as exc:
            self._send_error_json(422, exc.code, str(exc))
            return
        response = _annotations_json(saved)
        response["saved"] = len(saved)
        self._send_json(response)

    # -- static UI assets --------------------------------------------------

    def _serve_static(self, path: str) -> bool:
        ui_dir = getattr(self.server, "ui_dir", None)
        if ui_dir is None:
            return False
        rel = path.lstrip("/") or "index.html"
        target = (ui_dir / rel).resolve()
        try:
            target.relative_to(ui_dir.resolve())
        except ValueError:
            return False
        if not target.is_file():
            return False
        body = target.read_bytes()
        self.send_response(200)
        self.send_header(
            "Content-Type", _CONTENT_TYPES.get(target.suffix, "application/octet-stream")
        )
        self.send_header("Content-Length", str(len(body)))
        self.end_headers()
        self.wfile.write(body)
        return True


def build_server(
    root: Path,
    host: str = "127.0.0.1",
    port: int = 0,
    ui_dir: Path | None = None,
    verbose: bool = False,
) -> ThreadingHTTPServer:
    """Configured server; ``port=0`` picks an ephemeral port (for tests)."""
    server = ThreadingHTTPServer((host, port), AnnotationHandler)
    server.daemon_threads = True
    server.store = AnnotationStore(root)
    server.ui_dir = Path(ui_dir) if ui_dir is not None else None
    server.verbose = verbose
    return server


def serve_forever(
    root: Path,
    host: str = "127.0.0.1",
    port: int = 8077,
    ui_dir: Path | None = None,
) -> None:
    server = build_server(root, host, port, ui_dir, verbose=True)
    address = f"http://{server.server_address[0]}:{server.server_address[1]}/"
    print(f"annotation service listening on {address}", flush=True)
    if ui_dir is None:
        print("no --ui-dir given: serving the API only", flush=True)
    try:
        server.serve_forever()
    except KeyboardInterrupt:
        pass
    finally:
        server.server_close()


def serve_in_thread(server: ThreadingHTTPServer) -> threading.Thread:
    """Run a built server on a daemon thread (integration-test helper)."""
    thread = threading.Thread(target=server.serve_forever, daemon=True)
    thread.start()
    return thread
