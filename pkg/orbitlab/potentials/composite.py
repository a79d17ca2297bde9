"""Sums and positive multiples of potentials."""
from dataclasses import dataclass
from typing import Any, Dict, Tuple

import numpy as np

from orbitlab.errors import DimensionMismatch
from orbitlab.potentials.base import ToricPotential


@dataclass(frozen=True)
class SumPotential(ToricPotential):
    """Sum of potentials of equal dimension."""

    terms: Tuple[ToricPotential, ...]
    kind = "sum"

    def __post_init__(self):
        terms = tuple(self.terms)
        if not terms:
            raise ValueError("A sum potential needs at least one term")
        dims = {term.n for term in terms}
        if len(dims) != 1:
            raise DimensionMismatch(
                f"Sum terms have different dimensions: {sorted(dims)}",
                dimensions=sorted(dims),
            )
        object.__setattr__(self, "terms", terms)

    @property
    def n(self) -> int:
        return self.terms[0].n

    def _value(self, x: np.ndarray) -> float:
        return sum(term._value(x) for term in self.terms)

    def _gradient(self, x: np.ndarray) -> np.ndarray:
        return np.sum([term._gradient(x) for term in self.terms], axis=0)

    def _hessian(self, x: np.ndarray) -> np.ndarray:
        return np.sum([term._hessian(x) for term in self.terms], axis=0)

    def to_dict(self) -> Dict[str, Any]:
        return {"kind": self.kind, "terms": [term.to_dict() for term in self.terms]}


@dataclass(frozen=True)
class ScaledPotential(ToricPotential):
    """factor * term, factor > 0."""

    factor: float
    term: ToricPotential
    kind = "scale"

    def __post_init__(self):
        if not self.factor > 0:
            raise ValueError(f"Scale factor must be positive, got {self.factor}")

    @property
    def n(self) -> int:
        return self.term.n

    def _value(self, x: np.ndarray) -> float:
        return self.factor * self.term._value(x)

    def _gradient(self, x: np.ndarray) -> np.ndarray:
        return self.factor * self.term._gradient(x)

    def _hessian(self, x: np.ndarray) -> np.ndarray:
        return self.factor * self.term._hessian(x)

    def to_dict(self) -> Dict[str, Any]:
        return {"kind": self.kind, "lambda": self.factor, "term": self.term.to_dict()}
