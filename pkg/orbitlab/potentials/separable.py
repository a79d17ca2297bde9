"""Separable potentials F(x) = sum_i f(x_i)."""
from dataclasses import dataclass
from typing import Any, Dict

import numpy as np

from orbitlab.potentials.base import ToricPotential


@dataclass(frozen=True)
class SeparableCoshPotential(ToricPotential):
    """f(u) = cosh(2u)/4, so f'' = cosh(2u) and log det Hess is strictly convex (Ric < 0)."""

    n: int
    kind = "separable_cosh"

    def _value(self, x: np.ndarray) -> float:
        return float(np.sum(np.cosh(2.0 * x))) / 4.0

    def _gradient(self, x: np.ndarray) -> np.ndarray:
        return 0.5 * np.sinh(2.0 * x)

    def _hessian(self, x: np.ndarray) -> np.ndarray:
        return np.diag(np.cosh(2.0 * x))

    def to_dict(self) -> Dict[str, Any]:
        return {"kind": self.kind, "n": self.n}


@dataclass(frozen=True)
class SeparableExpPotential(ToricPotential):
    """f(u) = exp(u), so log det Hess = sum x_i is affine (Ric = 0)."""

    n: int
    kind = "separable_exp"

    def _value(self, x: np.ndarray) -> float:
        return float(np.sum(np.exp(x)))

    def _gradient(self, x: np.ndarray) -> np.ndarray:
        return np.exp(x)

    def _hessian(self, x: np.ndarray) -> np.ndarray:
        return np.diag(np.exp(x))

    def to_dict(self) -> Dict[str, Any]:
        return {"kind": self.kind, "n": self.n}
