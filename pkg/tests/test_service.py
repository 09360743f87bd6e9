import json
import threading
import urllib.error
import urllib.request
from concurrent.futures import ThreadPoolExecutor

import pytest

from sketchparts import synth
from sketchparts.dataset import load_annotations
from sketchparts.service import build_server, serve_in_thread


class ServiceEnv:
    def __init__(self, url, root):
        self.url = url
        self.root = root

    def __str__(self):
        return self.url


@pytest.fixture
def service(tmp_path):
    root = tmp_path / "data"
    synth.generate_dataset(root, sketches_per_category=2)
    ui_dir = tmp_path / "ui"
    ui_dir.mkdir()
    (ui_dir / "index.html").write_text("<html>annotator</html>", encoding="utf-8")
    server = build_server(root, port=0, ui_dir=ui_dir)
    serve_in_thread(server)
    host, port = server.server_address
    yield ServiceEnv(f"http://{host}:{port}", root)
    server.shutdown()
    server.server_close()


def _request(method, url, payload=None):
    data = json.dumps(payload).encode("utf-8") if payload is not None else None
    req = urllib.request.Request(url, data=data, method=method)
    if data is not None:
        req.add_header("Content-Type", "application/json")
    try:
        with urllib.request.urlopen(req) as resp:
            return resp.status, json.loads(resp.read().decode("utf-8"))
    except urllib.error.HTTPError as err:
        body = err.read().decode("utf-8")
        return err.code, json.loads(body) if body else {}


def get(url):
    return _request("GET", url)


def put(url, payload):
    return _request("PUT", url, payload)


SQUARE = [[30.0, 30.0], [60.0, 30.0], [60.0, 60.0], [30.0, 60.0]]


class TestReadEndpoints:
    def test_categories_listing(self, service):
        status, body = get(f"{service}/categories")
        assert status == 200
        names = [c["name"] for c in body["categories"]]
        assert names == ["bicycle", "dog", "plane"]
        bicycle = body["categories"][0]
        assert bicycle["sketch_count"] == 2
        assert "wheel" in bicycle["parts"]

    def test_category_sketches(self, service):
        status, body = get(f"{service}/categories/dog/sketches")
        assert status == 200
        ids = [s["sketch_id"] for s in body["sketches"]]
        assert ids == ["dog-000", "dog-001"]
        assert all(s["annotated"] for s in body["sketches"])

    def test_sketch_payload(self, service):
        status, body = get(f"{service}/sketches/plane-000")
        assert status == 200
        assert body["category"] == "plane"
        assert body["canvas"] == [200, 200]
        assert body["parts"] == ["fuselage", "tail", "wing"]
        assert all(len(s["points"]) >= 2 for s in body["strokes"])
        temporal = sorted(s["temporal_index"] for s in body["strokes"])
        assert temporal == list(range(len(body["strokes"])))

    def test_unknown_sketch_404(self, service):
        status, body = get(f"{service}/sketches/nope-000")
        assert status == 404
        assert body["error"]["code"] == "unknown-sketch"

    def test_unknown_category_404(self, service):
        status, body = get(f"{service}/categories/tv/sketches")
        assert status == 404
        assert body["error"]["code"] == "unknown-category"

    def test_reference_image_served(self, service):
        req = urllib.request.Request(f"{service}/categories/bicycle/reference-image")
        with urllib.request.urlopen(req) as resp:
            assert resp.status == 200
            assert resp.headers["Content-Type"] == "image/svg+xml"
            assert b"<svg" in resp.read()


class TestSaveEndpoint:
    def test_save_and_refetch_round_trip(self, service):
        payload = {"annotations": [
            {"part_name": "wheel", "points": SQUARE},
            {"part_name": "frame", "points": [[10.5, 10.25], [90.0, 12.0], [50.0, 80.0]]},
        ]}
        status, body = put(f"{service}/sketches/bicycle-000/annotations", payload)
        assert status == 200
        assert body["saved"] == 2
        status, fetched = get(f"{service}/sketches/bicycle-000/annotations")
        assert status == 200
        assert fetched["annotations"] == payload["annotations"]

    def test_duplicate_part_names_kept_as_records(self, service):
        shifted = [[x + 40, y] for x, y in SQUARE]
        payload = {"annotations": [
            {"part_name": "wheel", "points": SQUARE},
            {"part_name": "wheel", "points": shifted},
        ]}
        status, body = put(f"{service}/sketches/bicycle-001/annotations", payload)
        assert status == 200
        _, fetched = get(f"{service}/sketches/bicycle-001/annotations")
        assert len(fetched["annotations"]) == 2

    def test_unknown_part_rejected(self, service):
        payload = {"annotations": [{"part_name": "rotor", "points": SQUARE}]}
        status, body = put(f"{service}/sketches/bicycle-000/annotations", payload)
        assert status == 422
        assert body["error"]["code"] == "unknown-part"
        assert "rotor" in body["error"]["message"]

    def test_two_point_contour_rejected(self, service):
        payload = {"annotations": [{"part_name": "wheel", "points": SQUARE[:2]}]}
        status, body = put(f"{service}/sketches/bicycle-000/annotations", payload)
        assert status == 422
        assert body["error"]["code"] == "too-few-points"

    def test_zero_area_contour_rejected(self, service):
        collinear = [[10.0, 10.0], [20.0, 20.0], [30.0, 30.0]]
        payload = {"annotations": [{"part_name": "wheel", "points": collinear}]}
        status, body = put(f"{service}/sketches/bicycle-000/annotations", payload)
        assert status == 422
        assert body["error"]["code"] == "degenerate-contour"

    def test_malformed_json_rejected(self, service):
        req = urllib.request.Request(
            f"{service}/sketches/bicycle-000/annotations",
            data=b"{not json", method="PUT",
        )
        with pytest.raises(urllib.error.HTTPError) as err:
            urllib.request.urlopen(req)
        assert err.value.code == 400

    def test_rejected_save_leaves_file_untouched(self, service, tmp_path):
        _, before = get(f"{service}/sketches/dog-000/annotations")
        payload = {"annotations": [{"part_name": "rotor", "points": SQUARE}]}
        put(f"{service}/sketches/dog-000/annotations", payload)
        _, after = get(f"{service}/sketches/dog-000/annotations")
        assert after == before

    def test_concurrent_saves_to_different_sketches(self, service, tmp_path):
        payloads = {}
        for i, sketch_id in enumerate(["bicycle-000", "bicycle-001", "dog-000",
                                       "dog-001", "plane-000", "plane-001"]):
            offset = float(10 + 3 * i)
            payloads[sketch_id] = {"annotations": [{
                "part_name": get(f"{service}/sketches/{sketch_id}")[1]["parts"][0],
                "points": [[offset, offset], [offset + 20, offset],
                           [offset + 20, offset + 20]],
            }]}

        barrier = threading.Barrier(len(payloads))

        def save(sketch_id):
            barrier.wait()
            return put(f"{service}/sketches/{sketch_id}/annotations", payloads[sketch_id])

        with ThreadPoolExecutor(max_workers=len(payloads)) as pool:
            results = list(pool.map(save, payloads))
        assert all(status == 200 for status, _ in results)

        for sketch_id, payload in payloads.items():
            _, fetched = get(f"{service}/sketches/{sketch_id}/annotations")
            assert fetched["annotations"] == payload["annotations"]
            category = sketch_id.split("-")[0]
            on_disk = load_annotations(
                service.root / category / "annotations" / f"{sketch_id}.parts")
            want = payload["annotations"][0]
            assert on_disk[0].part_name == want["part_name"]
            assert [[p.x, p.y] for p in on_disk[0].contour] == want["points"]


class TestStaticAssets:
    def test_index_served_at_root(self, service):
        with urllib.request.urlopen(f"{service}/") as resp:
            assert resp.status == 200
            assert b"annotator" in resp.read()

    def test_unknown_route_404(self, service):
        status, body = get(f"{service}/definitely/missing")
        assert status == 404
        assert body["error"]["code"] == "not-found"
