"""Per-sketch part statistics and category-level aggregation.

Stage order for one (sketch, stroke subset) pair:

1. rasterize the full sketch and the subset;
2. per annotation, count stroke pixels inside the contour for both rasters
   and keep contours whose subset/full pixel ratio clears epsilon;
3. per part, the coarse factor is surviving contours over drawn contours;
4. per surviving contour, the fine-grained weight is the ratio of
   thresholded boundary-match counts (subset raster over full raster);
5. a part's score accumulates coarse * fine over its surviving contours.

Category reports sum the per-sketch score vectors and normalize (by the
maximum entry by default, optionally to a probability distribution).
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Sequence

import numpy as np

from .geometry import (
    ContourPolygon,
    CountMode,
    PixelSet,
    _count_matches_for_pixels,
    pixels_inside,
    rasterize,
)
from .model import (
    AnnotatedSketch,
    CategoryPartList,
    Epitome,
    ImportanceReport,
    PipelineWarning,
    StrokeOrdering,
    sort_weights,
    validate_annotations_against,
    validate_epitome_against,
)

DEFAULT_EPSILON = 0.05
DEFAULT_DIST_THRESHOLD = 3.0

# The exact ALTERNATE interleave construction is an assumption; reports
# carry this note so downstream consumers can see which rule produced them.
ALTERNATE_RULE_NOTE = "alternate = longest-first interleaved with reverse-temporal"


class AnalysisError(ValueError):
    """Invalid pipeline input (empty dataset, category mismatch)."""


class Normalization(Enum):
    MAX = "max"
    SUM = "sum"

    @classmethod
    def parse(cls, text: str) -> "Normalization":
        try:
            return cls(text.strip().lower())
        except ValueError:
            names = ", ".join(n.value for n in cls)
            raise AnalysisError(
                f"unknown normalization {text!r} (expected one of: {names})"
            ) from None


@dataclass(frozen=True)
class CandidateContour:
    """An annotated contour that survived the subset pixel-ratio filter."""

    annotation_index: int
    n_full: int
    n_epi: int

    def __post_init__(self):
        if self.n_full <= 0:
            raise AnalysisError("candidate contour requires n_full > 0")

    @property
    def membership_ratio(self) -> float:
        return self.n_epi / self.n_full


@dataclass(frozen=True)
class PerSketchWeights:
    """Score vector for one sketch, aligned with the category part list."""

    sketch_id: str
    f: tuple[float, ...]
    p_im: tuple[float, ...]
    per_contour: tuple[tuple[int, float], ...]
    warnings: tuple[PipelineWarning, ...] = ()


@dataclass(frozen=True)
class _ContourPixels:
    """In-contour pixel arrays for one annotation, both rasters."""

    annotation_index: int
    inside_full: np.ndarray
    inside_epi: np.ndarray


def _contour_pixel_arrays(
    annotated: AnnotatedSketch, raster_full: PixelSet, raster_epi: PixelSet
) -> list[_ContourPixels]:
    out = []
    for j, ann in enumerate(annotated.annotations):
        contour = ContourPolygon(ann.contour)
        inside_full = pixels_inside(contour, raster_full).as_array()
        inside_epi = pixels_inside(contour, raster_epi).as_array()
        out.append(_ContourPixels(j, inside_full, inside_epi))
    return out


def _candidates_from_pixels(
    annotated: AnnotatedSketch,
    contour_pixels: Sequence[_ContourPixels],
    epsilon: float,
) -> tuple[list[CandidateContour], list[PipelineWarning]]:
    candidates: list[CandidateContour] = []
    warnings: list[PipelineWarning] = []
    for cp in contour_pixels:
        ann = annotated.annotations[cp.annotation_index]
        n_full = cp.inside_full.shape[0]
        n_epi = cp.inside_epi.shape[0]
        if n_full == 0:
            warnings.append(
                PipelineWarning(
                    code="empty-contour",
                    message=(
                        f"contour #{cp.annotation_index} ({ann.part_name!r}) encloses no "
                        f"full-sketch pixels; excluded"
                    ),
                    sketch_id=annotated.sketch.sketch_id,
                    annotation_index=cp.annotation_index,
                    part_name=ann.part_name,
                )
            )
            continue
        if n_epi / n_full > epsilon:
            candidates.append(CandidateContour(cp.annotation_index, n_full, n_epi))
    return candidates, warnings


def get_candidate_contours(
    annotated: AnnotatedSketch,
    epitome: Epitome,
    epsilon: float = DEFAULT_EPSILON,
    warnings: list[PipelineWarning] | None = None,
) -> list[CandidateContour]:
    """Annotated contours whose subset pixel ratio exceeds ``epsilon``.

    Contours enclosing no full-sketch pixels are excluded with a warning
    (appended to ``warnings`` when given), never an error.  Same-named
    contours are evaluated independently.
    """
    if not (0.0 <= epsilon < 1.0):
        raise AnalysisError(f"epsilon must be in [0, 1), got {epsilon}")
    validate_epitome_against(epitome, annotated.sketch)
    raster_full = rasterize(annotated.sketch)
    raster_epi = rasterize(annotated.sketch, epitome.kept_stroke_ids)
    pixels = _contour_pixel_arrays(annotated, raster_full, raster_epi)
    candidates, warns = _candidates_from_pixels(annotated, pixels, epsilon)
    if warnings is not None:
        warnings.extend(warns)
    return candidates


def coarse_importance(
    annotated: AnnotatedSketch,
    candidates: Sequence[CandidateContour],
    parts: CategoryPartList,
) -> tuple[float, ...]:
    """Per part: surviving contour count over annotated contour count.

    Parts without annotations in this sketch get 0; the vector is aligned
    with ``parts.parts``.
    """
    annotated_counts = {name: 0 for name in parts.parts}
    for ann in annotated.annotations:
        if ann.part_name in annotated_counts:
            annotated_counts[ann.part_name] += 1
    candidate_counts = {name: 0 for name in parts.parts}
    for cand in candidates:
        name = annotated.annotations[cand.annotation_index].part_name
        if name in candidate_counts:
            candidate_counts[name] += 1
    out = []
    for name in parts.parts:
        total = annotated_counts[name]
        out.append(candidate_counts[name] / total if total else 0.0)
    return tuple(out)


def _weight_from_pixels(
    annotated: AnnotatedSketch,
    cp: _ContourPixels,
    dist_threshold: float,
    count_mode: CountMode,
) -> tuple[float, int, int, PipelineWarning | None]:
    ann = annotated.annotations[cp.annotation_index]
    contour = ContourPolygon(ann.contour)
    n_valid_full = _count_matches_for_pixels(cp.inside_full, contour, dist_threshold, count_mode)
    n_valid_epi = _count_matches_for_pixels(cp.inside_epi, contour, dist_threshold, count_mode)
    if n_valid_full == 0:
        warning = PipelineWarning(
            code="no-hugging-pixels",
            message=(
                f"contour #{cp.annotation_index} ({ann.part_name!r}) has no full-sketch "
                f"pixels within {dist_threshold}px of its boundary; weight set to 0"
            ),
            sketch_id=annotated.sketch.sketch_id,
            annotation_index=cp.annotation_index,
            part_name=ann.part_name,
        )
        return 0.0, n_valid_full, n_valid_epi, warning
    return n_valid_epi / n_valid_full, n_valid_full, n_valid_epi, None


def fine_grained_weight(
    annotated: AnnotatedSketch,
    epitome: Epitome,
    candidate: CandidateContour,
    dist_threshold: float = DEFAULT_DIST_THRESHOLD,
    count_mode: CountMode = CountMode.UNIQUE_BOUNDARY,
    warnings: list[PipelineWarning] | None = None,
) -> float:
    """Boundary-hugging match ratio (subset over full) for one candidate."""
    validate_epitome_against(epitome, annotated.sketch)
    raster_full = rasterize(annotated.sketch)
    raster_epi = rasterize(annotated.sketch, epitome.kept_stroke_ids)
    ann = annotated.annotations[candidate.annotation_index]
    contour = ContourPolygon(ann.contour)
    cp = _ContourPixels(
        candidate.annotation_index,
        pixels_inside(contour, raster_full).as_array(),
        pixels_inside(contour, raster_epi).as_array(),
    )
    w, _, _, warning = _weight_from_pixels(annotated, cp, dist_threshold, count_mode)
    if warning is not None and warnings is not None:
        warnings.append(warning)
    return w


def per_sketch_weights(
    annotated: AnnotatedSketch,
    epitome: Epitome,
    parts: CategoryPartList,
    epsilon: float = DEFAULT_EPSILON,
    dist_threshold: float = DEFAULT_DIST_THRESHOLD,
    count_mode: CountMode = CountMode.UNIQUE_BOUNDARY,
) -> PerSketchWeights:
    """Accumulate coarse * fine contributions per part for one sketch.

    The per-candidate contribution (one coarse * fine term) and the
    sketch-level accumulation are deliberately one loop; there is no
    separate per-candidate analysis pass to keep in sync.
    """
    if not (0.0 <= epsilon < 1.0):
        raise AnalysisError(f"epsilon must be in [0, 1), got {epsilon}")
    if dist_threshold <= 0:
        raise AnalysisError(f"dist_threshold must be positive, got {dist_threshold}")
    validate_epitome_against(epitome, annotated.sketch)
    validate_annotations_against(annotated, parts)

    raster_full = rasterize(annotated.sketch)
    raster_epi = rasterize(annotated.sketch, epitome.kept_stroke_ids)
    contour_pixels = _contour_pixel_arrays(annotated, raster_full, raster_epi)
    candidates, warnings = _candidates_from_pixels(annotated, contour_pixels, epsilon)
    p_im = coarse_importance(annotated, candidates, parts)

    f = [0.0] * len(parts.parts)
    per_contour: list[tuple[int, float]] = []
    by_index = {cp.annotation_index: cp for cp in contour_pixels}
    for cand in candidates:
        cp = by_index[cand.annotation_index]
        w_part, _, _, warning = _weight_from_pixels(annotated, cp, dist_threshold, count_mode)
        if warning is not None:
            warnings.append(warning)
        per_contour.append((cand.annotation_index, w_part))
        name = annotated.annotations[cand.annotation_index].part_name
        s = parts.index_of(name)
        f[s] += p_im[s] * w_part

    return PerSketchWeights(
        sketch_id=annotated.sketch.sketch_id,
        f=tuple(f),
        p_im=p_im,
        per_contour=tuple(per_contour),
        warnings=tuple(warnings),
    )


def aggregate_report(
    per_sketch: Sequence[PerSketchWeights],
    parts: CategoryPartList,
    ordering: StrokeOrdering,
    epsilon: float = DEFAULT_EPSILON,
    dist_threshold: float = DEFAULT_DIST_THRESHOLD,
    count_mode: CountMode = CountMode.UNIQUE_BOUNDARY,
    normalization: Normalization = Normalization.MAX,
) -> ImportanceReport:
    """Sum per-sketch vectors (in the given order) and normalize.

    Callers must pass ``per_sketch`` in a deterministic order (the pipeline
    sorts by sketch id) so float accumulation is reproducible.
    """
    if not per_sketch:
        raise AnalysisError(f"category {parts.category}: empty dataset")
    m = len(parts.parts)
    totals = [0.0] * m
    for psw in per_sketch:
        if len(psw.f) != m:
            raise AnalysisError(f"sketch {psw.sketch_id}: weight vector length mismatch")
        for i in range(m):
            totals[i] += psw.f[i]

    warnings = [w for psw in per_sketch for w in psw.warnings]
    if normalization is Normalization.MAX:
        denom = max(totals)
    else:
        denom = sum(totals)
    if denom == 0.0:
        warnings.append(
            PipelineWarning(
                code="all-zero-weights",
                message=f"category {parts.category}: no part accumulated any weight",
            )
        )
        normalized = totals
    else:
        normalized = [t / denom for t in totals]

    return ImportanceReport(
        category=parts.category,
        ordering=ordering,
        weights=sort_weights(zip(parts.parts, normalized)),
        sketch_count=len(per_sketch),
        epsilon=epsilon,
        dist_threshold=dist_threshold,
        count_mode=count_mode.value,
        normalization=normalization.value,
        warnings=tuple(warnings),
    )


def category_report(
    dataset: Sequence[tuple[AnnotatedSketch, Epitome]],
    parts: CategoryPartList,
    ordering: StrokeOrdering,
    epsilon: float = DEFAULT_EPSILON,
    dist_threshold: float = DEFAULT_DIST_THRESHOLD,
    count_mode: CountMode = CountMode.UNIQUE_BOUNDARY,
    normalization: Normalization = Normalization.MAX,
) -> ImportanceReport:
    """Full category pipeline over (annotated sketch, stroke subset) pairs."""
    if not dataset:
        raise AnalysisError(f"category {parts.category}: empty dataset")
    for annotated, epitome in dataset:
        if annotated.sketch.category != parts.category:
            raise AnalysisError(
                f"sketch {annotated.sketch.sketch_id} belongs to "
                f"{annotated.sketch.category!r}, not {parts.category!r}"
            )
        if epitome.ordering is not ordering:
            raise AnalysisError(
                f"sketch {annotated.sketch.sketch_id}: epitome built under "
                f"{epitome.ordering.value!r}, report requested {ordering.value!r}"
            )
    ordered = sorted(dataset, key=lambda pair: pair[0].sketch.sketch_id)
    per = [
        per_sketch_weights(annotated, epitome, parts, epsilon, dist_threshold, count_mode)
        for annotated, epitome in ordered
    ]
    return aggregate_report(
        per, parts, ordering, epsilon, dist_threshold, count_mode, normalization
    )
