"""Fubini-Study potential of CP^n restricted to the open torus orbit."""
from dataclasses import dataclass
from typing import Any, Dict

import numpy as np
from scipy.special import logsumexp, softmax

from orbitlab.potentials.base import ToricPotential


@dataclass(frozen=True)
class FubiniStudyPotential(ToricPotential):
    """F(x) = (scale/2) * log(1 + sum_i exp(2 x_i)).

    The gradient is scale times the barycentric weights
    s_i = exp(2 x_i) / (1 + sum_j exp(2 x_j)), so the moment image is the open
    simplex {m_i > 0, sum m_i < scale}. Evaluated through logsumexp/softmax so
    that points far out towards the polytope boundary do not overflow.
    """

    n: int
    scale: float = 1.0
    kind = "fubini_study"

    def __post_init__(self):
        if not self.scale > 0:
            raise ValueError(f"Fubini-Study scale must be positive, got {self.scale}")

    def _exponents(self, x: np.ndarray) -> np.ndarray:
        return np.concatenate(([0.0], 2.0 * x))

    def _value(self, x: np.ndarray) -> float:
        return 0.5 * self.scale * float(logsumexp(self._exponents(x)))

    def _gradient(self, x: np.ndarray) -> np.ndarray:
        return self.scale * softmax(self._exponents(x))[1:]

    def _hessian(self, x: np.ndarray) -> np.ndarray:
        s = softmax(self._exponents(x))[1:]
        return 2.0 * self.scale * (np.diag(s) - np.outer(s, s))

    def to_dict(self) -> Dict[str, Any]:
        return {"kind": self.kind, "n": self.n, "lambda": self.scale}
