"""Models for orbitlab: sampling geometry and analysis results."""
from enum import Enum
from typing import List, Dict, Any, Optional, Sequence, Tuple
from dataclasses import dataclass, field
import itertools

import numpy as np


def as_list(values) -> List[float]:
    """Convert an array or scalar sequence to a JSON-friendly list of floats."""
    return [float(v) for v in np.asarray(values, dtype=float).reshape(-1)]


class Functional(Enum):
    """Orbit-volume functionals that can be sampled along lines."""
    LOG_VOL = "logVol"
    VOL = "Vol"
    NEG_LOG_VOL = "negLogVol"
    INV_VOL = "invVol"

    def from_log_volume(self, log_volume: float) -> float:
        """Evaluate this functional given log Vol."""
        if self is Functional.LOG_VOL:
            return log_volume
        if self is Functional.NEG_LOG_VOL:
            return -log_volume
        if self is Functional.VOL:
            return float(np.exp(log_volume))
        return float(np.exp(-log_volume))


class RicciVerdict(Enum):
    """Sign classification of the Ricci form over a region."""
    POSITIVE_DEFINITE = "PositiveDefinite"
    NEGATIVE_DEFINITE = "NegativeDefinite"
    ZERO = "Zero"
    INDEFINITE = "Indefinite"
    MIXED = "Mixed"


class ConvexityVerdict(Enum):
    """Convexity classification of a functional along lines."""
    STRICTLY_CONVEX = "StrictlyConvex"
    CONVEX = "Convex"
    AFFINE = "Affine"
    CONCAVE = "Concave"
    STRICTLY_CONCAVE = "StrictlyConcave"
    NEITHER = "Neither"


# Ricci sign <-> convexity of log Vol
RICCI_TO_LOG_VOL = {
    RicciVerdict.NEGATIVE_DEFINITE: ConvexityVerdict.STRICTLY_CONVEX,
    RicciVerdict.ZERO: ConvexityVerdict.AFFINE,
    RicciVerdict.POSITIVE_DEFINITE: ConvexityVerdict.STRICTLY_CONCAVE,
}


@dataclass
class GridRegion:
    """A box [lo, hi] in the orbit space sampled by a uniform tensor grid."""
    lo: List[float]
    hi: List[float]
    counts: List[int]

    def __post_init__(self):
        self.lo = as_list(self.lo)
        self.hi = as_list(self.hi)
        self.counts = [int(c) for c in self.counts]
        if not (len(self.lo) == len(self.hi) == len(self.counts)):
            raise ValueError("Region lo, hi and counts must have the same length")
        if any(l >= h for l, h in zip(self.lo, self.hi)):
            raise ValueError(f"Region needs lo < hi on every axis, got lo={self.lo} hi={self.hi}")
        if any(c < 2 for c in self.counts):
            raise ValueError(f"Region needs at least 2 nodes per axis, got {self.counts}")

    @property
    def dimension(self) -> int:
        return len(self.lo)

    @classmethod
    def box(cls, half_width: float, n: int, count: int = 9) -> "GridRegion":
        """The cube [-half_width, half_width]^n."""
        return cls([-half_width] * n, [half_width] * n, [count] * n)

    def axes(self) -> List[np.ndarray]:
        return [np.linspace(l, h, c) for l, h, c in zip(self.lo, self.hi, self.counts)]

    def nodes(self) -> np.ndarray:
        """All grid nodes, shape (N, n), last axis varying fastest."""
        return np.array(list(itertools.product(*self.axes())), dtype=float)

    def contains(self, x, slack: float = 1e-12) -> bool:
        point = np.asarray(x, dtype=float)
        return bool(np.all(point >= np.asarray(self.lo) - slack) and np.all(point <= np.asarray(self.hi) + slack))

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "GridRegion":
        """Create a GridRegion from a dictionary."""
        return cls(lo=data["lo"], hi=data["hi"], counts=data["counts"])

    def to_dict(self) -> Dict[str, Any]:
        return {"lo": list(self.lo), "hi": list(self.hi), "counts": list(self.counts)}


@dataclass
class LineSegment:
    """The straight segment t -> base + t * direction, t in [t_min, t_max]."""
    base: np.ndarray
    direction: np.ndarray
    t_min: float
    t_max: float
    samples: int = 21

    def __post_init__(self):
        self.base = np.asarray(self.base, dtype=float).reshape(-1)
        self.direction = np.asarray(self.direction, dtype=float).reshape(-1)
        if self.base.shape != self.direction.shape:
            raise ValueError("Segment base and direction must have the same length")
        if abs(np.linalg.norm(self.direction) - 1.0) > 1e-12:
            raise ValueError(f"Segment direction must be a unit vector, has norm {np.linalg.norm(self.direction)}")
        if not self.t_min < self.t_max:
            raise ValueError(f"Segment needs t_min < t_max, got [{self.t_min}, {self.t_max}]")
        if self.samples < 5:
            raise ValueError(f"Segment needs at least 5 samples, got {self.samples}")

    @property
    def step(self) -> float:
        return (self.t_max - self.t_min) / (self.samples - 1)

    def parameters(self) -> np.ndarray:
        return np.linspace(self.t_min, self.t_max, self.samples)

    def points(self) -> np.ndarray:
        return self.base[None, :] + self.parameters()[:, None] * self.direction[None, :]

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "LineSegment":
        """Create a LineSegment from a dictionary; the direction is normalized."""
        direction = np.asarray(data["direction"], dtype=float)
        return cls(
            base=data["base"],
            direction=direction / np.linalg.norm(direction),
            t_min=float(data["t_range"][0]),
            t_max=float(data["t_range"][1]),
            samples=int(data.get("samples", 21)),
        )

    def to_dict(self) -> Dict[str, Any]:
        return {
            "base": as_list(self.base),
            "direction": as_list(self.direction),
            "t_range": [self.t_min, self.t_max],
            "samples": self.samples,
        }


@dataclass
class RicciSample:
    """The Ricci quadratic form -Hess(log det Hess F) at one point."""
    x: np.ndarray
    form: np.ndarray
    eigenvalues: np.ndarray

    def to_dict(self) -> Dict[str, Any]:
        return {
            "x": as_list(self.x),
            "form": [as_list(row) for row in np.atleast_2d(self.form)],
            "eigenvalues": as_list(self.eigenvalues),
        }


@dataclass
class RicciClassification:
    """Ricci sign verdict over a sampled region."""
    verdict: RicciVerdict
    threshold: float
    region: GridRegion
    node_extremes: List[Tuple[float, float]]
    witnesses: Dict[str, Dict[str, Any]] = field(default_factory=dict)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "verdict": self.verdict.value,
            "threshold": self.threshold,
            "region": self.region.to_dict(),
            "node_min_eigenvalues": [lo for lo, _ in self.node_extremes],
            "node_max_eigenvalues": [hi for _, hi in self.node_extremes],
            "witnesses": self.witnesses,
        }


@dataclass
class ConvexityReport:
    """Verdict from second differences of a functional along sampled lines."""
    functional_name: str
    verdict: ConvexityVerdict
    min_second_difference: float
    max_second_difference: float
    argmin_location: List[float]
    numerical_margin: float
    strict_margin: float
    lines_tested: int
    seed: Optional[int] = None
    worst_line: Optional[Dict[str, Any]] = None
    ill_conditioned: List[List[float]] = field(default_factory=list)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "functional": self.functional_name,
            "verdict": self.verdict.value,
            "min_second_difference": self.min_second_difference,
            "max_second_difference": self.max_second_difference,
            "argmin_location": list(self.argmin_location),
            "numerical_margin": self.numerical_margin,
            "strict_margin": self.strict_margin,
            "lines_tested": self.lines_tested,
            "seed": self.seed,
            "worst_line": self.worst_line,
            "ill_conditioned": self.ill_conditioned,
        }


class OrbitStatus(Enum):
    """Outcome of a critical-orbit search."""
    MAXIMUM = "maximum"
    DEGENERATE = "degenerate"
    NOT_A_MAXIMUM = "not_a_maximum"
    UNBOUNDED = "unbounded"
    MAX_ITERATIONS = "max_iterations"


@dataclass
class CriticalOrbitResult:
    """Result of damped Newton on phi = -log Vol."""
    x_star: np.ndarray
    grad_norm: float
    newton_iterations: int
    hessian_at_solution: np.ndarray
    converged: bool
    status: OrbitStatus
    phi_history: List[float] = field(default_factory=list)

    @property
    def hessian_eigenvalues(self) -> np.ndarray:
        return np.linalg.eigvalsh(self.hessian_at_solution)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "x_star": as_list(self.x_star),
            "grad_norm": self.grad_norm,
            "iterations": self.newton_iterations,
            "hessian_eigenvalues": as_list(self.hessian_eigenvalues),
            "converged": self.converged,
            "status": self.status.value,
        }


@dataclass
class UniquenessResult:
    """Multistart outcome."""
    unique: bool
    spread: float
    results: List[CriticalOrbitResult]

    def to_dict(self) -> Dict[str, Any]:
        return {
            "unique": self.unique,
            "spread": self.spread,
            "results": [r.to_dict() for r in self.results],
        }


@dataclass
class BoundaryDecayResult:
    """Sup of Vol over spheres of increasing radius."""
    decays_to_zero: bool
    radii: List[float]
    sup_profile: List[float]
    floor: float

    def to_dict(self) -> Dict[str, Any]:
        return {
            "decays_to_zero": self.decays_to_zero,
            "radii": list(self.radii),
            "sup_profile": list(self.sup_profile),
            "floor": self.floor,
        }


def pairwise_max_distance(points: Sequence[np.ndarray]) -> float:
    """Largest Euclidean distance between any two points."""
    spread = 0.0
    for a, b in itertools.combinations(points, 2):
        spread = max(spread, float(np.linalg.norm(np.asarray(a) - np.asarray(b))))
    return spread
