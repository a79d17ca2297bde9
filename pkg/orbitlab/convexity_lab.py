"""Convexity of orbit-volume functionals along straight lines in the orbit space."""
import logging
from dataclasses import dataclass
from typing import Any, Dict, List, Optional, Tuple, Union

import numpy as np

from orbitlab.errors import DegenerateGrid, NotKaehler
from orbitlab.models import (
    ConvexityReport,
    ConvexityVerdict,
    Functional,
    GridRegion,
    LineSegment,
    as_list,
)
from orbitlab.potentials import ToricPotential
from orbitlab.toric_calculus import map_ordered, orbit_log_volume

logger = logging.getLogger(__name__)

# Hess F condition number above which a sample point is flagged
ILL_CONDITIONED = 1e10


@dataclass
class LineSampler:
    """How check_convexity draws its random segments."""
    region: GridRegion
    lines: int = 100
    samples: int = 21
    seed: int = 0
    min_chord_fraction: float = 0.25

    @classmethod
    def from_dict(cls, region: GridRegion, data: Dict[str, Any]) -> "LineSampler":
        """Create a sampler from the config "sampler" section."""
        return cls(
            region=region,
            lines=int(data.get("lines", 100)),
            samples=int(data.get("m", 21)),
            seed=int(data.get("seed", 0)),
        )


def second_differences(values, step: float) -> np.ndarray:
    """(v[i-1] - 2 v[i] + v[i+1]) / step^2 for the interior samples."""
    values = np.asarray(values, dtype=float)
    if values.size < 3:
        raise ValueError(f"Need at least 3 values for second differences, got {values.size}")
    if not step > 0:
        raise ValueError(f"Step must be positive, got {step}")
    return (values[:-2] - 2.0 * values[1:-1] + values[2:]) / step ** 2


def sample_functional(potential: ToricPotential, functional: Union[Functional, str],
                      segment: LineSegment) -> np.ndarray:
    """Values of the functional at the segment's equally spaced samples."""
    functional = Functional(functional)
    values = np.empty(segment.samples)
    for i, (t, point) in enumerate(zip(segment.parameters(), segment.points())):
        try:
            values[i] = functional.from_log_volume(orbit_log_volume(potential, point))
        except NotKaehler as e:
            raise NotKaehler(f"Segment leaves the Kähler region at t={t}", t=float(t), x=as_list(point)) from e
    return values


def profile_rows(potential: ToricPotential, functional: Union[Functional, str],
                 segment: LineSegment) -> List[Tuple[float, float, Optional[float]]]:
    """(t, value, second difference) rows; endpoints have no second difference."""
    values = sample_functional(potential, functional, segment)
    diffs = second_differences(values, segment.step)
    rows = []
    for i, t in enumerate(segment.parameters()):
        diff = float(diffs[i - 1]) if 0 < i < segment.samples - 1 else None
        rows.append((float(t), float(values[i]), diff))
    return rows


def chord_through_box(base: np.ndarray, direction: np.ndarray, region: GridRegion) -> Tuple[float, float]:
    """Parameter interval on which base + t * direction stays in the box."""
    lo, hi = np.asarray(region.lo), np.asarray(region.hi)
    t_lo, t_hi = -np.inf, np.inf
    for b, d, l, h in zip(base, direction, lo, hi):
        if abs(d) < 1e-15:
            continue
        a, c = sorted(((l - b) / d, (h - b) / d))
        t_lo, t_hi = max(t_lo, a), min(t_hi, c)
    return float(t_lo), float(t_hi)


def draw_segments(sampler: LineSampler) -> List[LineSegment]:
    """Seeded random chords of the region; chords shorter than a fraction of the box are redrawn."""
    rng = np.random.default_rng(sampler.seed)
    region = sampler.region
    lo, hi = np.asarray(region.lo), np.asarray(region.hi)
    min_chord = sampler.min_chord_fraction * float(np.min(hi - lo))
    segments = []
    while len(segments) < sampler.lines:
        base = rng.uniform(lo, hi)
        direction = rng.standard_normal(region.dimension)
        norm = np.linalg.norm(direction)
        if norm < 1e-12:
            continue
        direction = direction / norm
        t_min, t_max = chord_through_box(base, direction, region)
        if t_max - t_min < min_chord:
            continue
        segments.append(LineSegment(base, direction, t_min, t_max, sampler.samples))
    return segments


def _ill_conditioned_points(potential: ToricPotential, segment: LineSegment) -> List[List[float]]:
    flagged = []
    for point in segment.points():
        if np.linalg.cond(potential.hess(point)) > ILL_CONDITIONED:
            flagged.append(as_list(point))
    return flagged


def classify_second_differences(min_diff: float, max_diff: float, numerical_margin: float,
                                strict_margin: float) -> ConvexityVerdict:
    """Verdict from the extreme second differences and the two margins."""
    if max(abs(min_diff), abs(max_diff)) <= numerical_margin:
        return ConvexityVerdict.AFFINE
    if min_diff > strict_margin:
        return ConvexityVerdict.STRICTLY_CONVEX
    if max_diff < -strict_margin:
        return ConvexityVerdict.STRICTLY_CONCAVE
    if min_diff > -numerical_margin:
        return ConvexityVerdict.CONVEX
    if max_diff < numerical_margin:
        return ConvexityVerdict.CONCAVE
    return ConvexityVerdict.NEITHER


def check_convexity(potential: ToricPotential, functional: Union[Functional, str], sampler: LineSampler,
                    workers: int = 1) -> ConvexityReport:
    """Convexity verdict of a functional from second differences along random chords.

    Margins scale with the data: numerical 1e-7 * (max|v| + 1), strict
    1e-4 * (max|v| + 1).
    """
    functional = Functional(functional)
    if sampler.region.dimension != potential.n:
        raise ValueError(f"Region has dimension {sampler.region.dimension}, potential has {potential.n}")
    segments = draw_segments(sampler)

    def run(indexed: Tuple[int, LineSegment]):
        index, segment = indexed
        try:
            values = sample_functional(potential, functional, segment)
        except NotKaehler as e:
            e.details["line"] = index
            raise
        return values, second_differences(values, segment.step)

    outcomes = map_ordered(run, list(enumerate(segments)), workers)

    scale = max(float(np.max(np.abs(values))) for values, _ in outcomes) + 1.0
    numerical_margin = 1e-7 * scale
    strict_margin = 1e-4 * scale

    mins = np.array([float(np.min(diffs)) for _, diffs in outcomes])
    maxs = np.array([float(np.max(diffs)) for _, diffs in outcomes])
    worst = int(np.argmin(mins))
    worst_segment = segments[worst]
    argmin = worst_segment.points()[1 + int(np.argmin(outcomes[worst][1]))]

    verdict = classify_second_differences(float(mins.min()), float(maxs.max()), numerical_margin, strict_margin)

    ill_conditioned = []
    for segment in segments:
        ill_conditioned.extend(_ill_conditioned_points(potential, segment))

    logger.info(f"{functional.value} of {potential.kind}: {verdict.value} over {len(segments)} lines")
    worst_line = worst_segment.to_dict()
    worst_line["index"] = worst
    return ConvexityReport(
        functional_name=functional.value,
        verdict=verdict,
        min_second_difference=float(mins.min()),
        max_second_difference=float(maxs.max()),
        argmin_location=as_list(argmin),
        numerical_margin=numerical_margin,
        strict_margin=strict_margin,
        lines_tested=len(segments),
        seed=sampler.seed,
        worst_line=worst_line,
        ill_conditioned=ill_conditioned,
    )


def convexity_of_values(name: str, values, step: float) -> ConvexityReport:
    """Convexity verdict for a single uniformly sampled profile."""
    values = np.asarray(values, dtype=float)
    diffs = second_differences(values, step)
    scale = float(np.max(np.abs(values))) + 1.0
    numerical_margin = 1e-7 * scale
    strict_margin = 1e-4 * scale
    verdict = classify_second_differences(float(diffs.min()), float(diffs.max()), numerical_margin, strict_margin)
    return ConvexityReport(
        functional_name=name,
        verdict=verdict,
        min_second_difference=float(diffs.min()),
        max_second_difference=float(diffs.max()),
        argmin_location=[float(1 + int(np.argmin(diffs)))],
        numerical_margin=numerical_margin,
        strict_margin=strict_margin,
        lines_tested=1,
    )


def fit_log_affine(potential: ToricPotential, region: GridRegion) -> Tuple[np.ndarray, float, float]:
    """Least-squares fit log Vol(x) ~ a.x + b over the grid.

    A small residual means Vol is exponential along every line,
    Vol = exp(a.x + b).
    """
    nodes = region.nodes()
    if nodes.shape[1] != potential.n:
        raise ValueError(f"Region has dimension {nodes.shape[1]}, potential has {potential.n}")
    design = np.hstack((nodes, np.ones((nodes.shape[0], 1))))
    if np.linalg.matrix_rank(design) < potential.n + 1:
        raise DegenerateGrid(
            f"Grid with {nodes.shape[0]} nodes does not span an affine fit in dimension {potential.n}",
            nodes=int(nodes.shape[0]),
        )
    values = np.array([orbit_log_volume(potential, node) for node in nodes])
    coefficients, *_ = np.linalg.lstsq(design, values, rcond=None)
    residual = float(np.max(np.abs(design @ coefficients - values)))
    return coefficients[:-1], float(coefficients[-1]), residual
