"""Flat potential F(x) = |x|^2 / 2."""
from dataclasses import dataclass
from typing import Any, Dict

import numpy as np

from orbitlab.potentials.base import ToricPotential


@dataclass(frozen=True)
class FlatPotential(ToricPotential):
    """The flat cylinder metric on (C*)^n; every orbit has the same volume."""

    n: int
    kind = "flat"

    def _value(self, x: np.ndarray) -> float:
        return 0.5 * float(x @ x)

    def _gradient(self, x: np.ndarray) -> np.ndarray:
        return x.copy()

    def _hessian(self, x: np.ndarray) -> np.ndarray:
        return np.eye(self.n)

    def to_dict(self) -> Dict[str, Any]:
        return {"kind": self.kind, "n": self.n}
