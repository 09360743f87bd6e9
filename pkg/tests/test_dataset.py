import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from sketchparts import dataset, synth
from sketchparts.dataset import (
    DatasetError,
    dump_annotations,
    dump_epitome,
    dump_part_list,
    dump_sketch,
    load_annotations,
    load_category,
    load_dataset_root,
    load_epitome,
    load_epitomes,
    load_part_list,
    load_sketch,
)
from sketchparts.model import (
    CategoryPartList,
    Epitome,
    PartAnnotation,
    Point2D,
    Sketch,
    Stroke,
    StrokeOrdering,
)


@pytest.fixture
def category_dir(tmp_path):
    parts, annotated = synth.make_category("bicycle", sketches=2)
    epitomes = {
        rec.sketch.sketch_id: {
            StrokeOrdering.TEMPORAL: Epitome(rec.sketch.sketch_id,
                                             rec.sketch.stroke_ids(),
                                             StrokeOrdering.TEMPORAL)
        }
        for rec in annotated
    }
    return dataset.write_category(tmp_path, parts, list(annotated), epitomes)


class TestRoundTrip:
    def test_category_round_trip(self, category_dir):
        loaded = load_category(category_dir)
        parts, annotated = synth.make_category("bicycle", sketches=2)
        assert loaded.parts == parts
        assert loaded.sketches == tuple(annotated)

    def test_epitome_round_trip(self, category_dir):
        loaded = load_category(category_dir)
        epitomes = load_epitomes(loaded, StrokeOrdering.TEMPORAL)
        for annotated in loaded.sketches:
            epitome = epitomes[annotated.sketch.sketch_id]
            assert epitome.kept_stroke_ids == annotated.sketch.stroke_ids()

    def test_serialize_parse_is_identity_on_loaded_data(self, category_dir):
        loaded = load_category(category_dir)
        for annotated in loaded.sketches:
            text = dump_sketch(annotated.sketch)
            again = text == dump_sketch(
                load_sketch_from_text(text, annotated.sketch, category_dir)
            )
            assert again

    @settings(max_examples=40)
    @given(st.lists(
        st.lists(st.tuples(st.floats(0, 99, allow_nan=False),
                           st.floats(0, 99, allow_nan=False)),
                 min_size=2, max_size=4),
        min_size=1, max_size=5))
    def test_sketch_text_round_trip(self, tmp_path_factory, point_lists):
        strokes = tuple(
            Stroke(id=i, temporal_index=i,
                   points=tuple(Point2D(x, y) for x, y in pts))
            for i, pts in enumerate(point_lists)
        )
        sketch = Sketch(category="c", sketch_id="s", canvas=(100, 100), strokes=strokes)
        path = tmp_path_factory.mktemp("rt") / "s.strokes"
        path.write_text(dump_sketch(sketch), encoding="utf-8")
        assert load_sketch(path, category="c") == sketch

    def test_annotation_names_with_spaces_round_trip(self, tmp_path):
        ann = PartAnnotation("vertical stabilizer",
                             (Point2D(0, 0), Point2D(4, 0), Point2D(4, 4)))
        path = tmp_path / "x.parts"
        path.write_text(dump_annotations([ann]), encoding="utf-8")
        assert load_annotations(path) == (ann,)


def load_sketch_from_text(text, sketch, category_dir):
    path = category_dir / "roundtrip.strokes"
    path.write_text(text, encoding="utf-8")
    return load_sketch(path, category=sketch.category, sketch_id=sketch.sketch_id)


class TestLoadErrors:
    def test_unknown_part_name_reports_file_and_part(self, category_dir):
        bad = category_dir / "annotations" / "bicycle-000.parts"
        bad.write_text('part "rotor" 1,1 5,1 5,5\n', encoding="utf-8")
        with pytest.raises(DatasetError) as err:
            load_category(category_dir)
        assert "rotor" in str(err.value)
        assert "bicycle-000.parts" in str(err.value)

    def test_epitome_missing_stroke_id(self, category_dir):
        keep = category_dir / "epitomes" / "temporal" / "bicycle-000.keep"
        keep.write_text("0\n99\n", encoding="utf-8")
        loaded = load_category(category_dir)
        with pytest.raises(DatasetError, match=r"\[99\]"):
            load_epitomes(loaded, StrokeOrdering.TEMPORAL)

    def test_out_of_canvas_point_reports_line(self, category_dir):
        bad = category_dir / "sketches" / "bicycle-000.strokes"
        bad.write_text("canvas 50 50\nstroke 0 0 1 0,0 10,10\nstroke 1 1 1 0,0 99,10\n",
                       encoding="utf-8")
        with pytest.raises(DatasetError, match=r"\.strokes:3"):
            load_category(category_dir)

    def test_bad_point_token(self, tmp_path):
        path = tmp_path / "s.strokes"
        path.write_text("stroke 0 0 1 1,2 x,4\n", encoding="utf-8")
        with pytest.raises(DatasetError, match="bad point"):
            load_sketch(path, category="c")

    def test_unknown_record_keyword(self, tmp_path):
        path = tmp_path / "s.strokes"
        path.write_text("scribble 0\n", encoding="utf-8")
        with pytest.raises(DatasetError, match="scribble"):
            load_sketch(path, category="c")

    def test_missing_epitome_file(self, category_dir):
        keep = category_dir / "epitomes" / "temporal" / "bicycle-001.keep"
        keep.unlink()
        loaded = load_category(category_dir)
        with pytest.raises(DatasetError, match="missing epitome"):
            load_epitomes(loaded, StrokeOrdering.TEMPORAL)

    def test_single_part_list_rejected(self, tmp_path):
        d = tmp_path / "cat"
        d.mkdir()
        (d / "parts.txt").write_text("wheel\n", encoding="utf-8")
        with pytest.raises(DatasetError, match="two parts"):
            load_part_list(d)

    def test_empty_root_rejected(self, tmp_path):
        with pytest.raises(DatasetError, match="no category"):
            load_dataset_root(tmp_path)

    def test_too_few_annotation_points(self, tmp_path):
        path = tmp_path / "x.parts"
        path.write_text('part "wheel" 1,1 5,1\n', encoding="utf-8")
        with pytest.raises(DatasetError, match="at least 3"):
            load_annotations(path)


class TestFormatDetails:
    def test_comments_and_blanks_ignored(self, tmp_path):
        path = tmp_path / "s.strokes"
        path.write_text(
            "# a comment\n\ncanvas 60 60\n# another\nstroke 0 0 1 1,1 5,5\n",
            encoding="utf-8",
        )
        sketch = load_sketch(path, category="c")
        assert sketch.canvas == (60, 60)
        assert len(sketch.strokes) == 1

    def test_default_canvas_applies_without_header(self, tmp_path):
        path = tmp_path / "s.strokes"
        path.write_text("stroke 0 0 1 1,1 5,5\n", encoding="utf-8")
        assert load_sketch(path, category="c").canvas == (800, 800)

    def test_keep_file_accepts_space_separated_ids(self, tmp_path, category_dir):
        loaded = load_category(category_dir)
        sketch = loaded.sketches[0].sketch
        path = tmp_path / "e.keep"
        path.write_text("0 1 2\n", encoding="utf-8")
        epitome = load_epitome(path, sketch, StrokeOrdering.LENGTH)
        assert epitome.kept_stroke_ids == {0, 1, 2}

    def test_dump_formats_are_stable(self):
        parts = CategoryPartList("c", ("a b", "c"))
        assert dump_part_list(parts) == "a b\nc\n"
        ann = PartAnnotation("a b", (Point2D(0.5, 0), Point2D(4, 0), Point2D(4, 4)))
        assert dump_annotations([ann]) == 'part "a b" 0.5,0.0 4.0,0.0 4.0,4.0\n'
        epitome = Epitome("s", frozenset({3, 1, 2}), StrokeOrdering.TEMPORAL)
        assert dump_epitome(epitome) == "1\n2\n3\n"

    def test_annotated_only_filters_unannotated(self, category_dir):
        (category_dir / "annotations" / "bicycle-001.parts").unlink()
        loaded = load_category(category_dir)
        assert len(loaded.sketches) == 2
        assert [a.sketch.sketch_id for a in loaded.annotated_only()] == ["bicycle-000"]

    def test_root_listing_sorted(self, tmp_path):
        synth.generate_dataset(tmp_path, sketches_per_category=1)
        roots = load_dataset_root(tmp_path)
        assert [c.category for c in roots] == ["bicycle", "dog", "plane"]
