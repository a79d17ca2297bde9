"""Base torus-invariant Kähler potential."""
from abc import ABC, abstractmethod
from typing import Any, Dict

import numpy as np

from orbitlab.errors import DimensionMismatch


class ToricPotential(ABC):
    """A torus-invariant Kähler potential F on the orbit space R^n.

    Coordinates are logarithmic: z = x + i*theta on C^n / 2*pi*i*Z^n, so the
    torus acts on theta and the orbit space is parametrized by x. The complex
    Hessian of F reduces to the real Hessian of F in x; the constant between
    the two is fixed to 1.

    Subclasses implement exact closed forms only: no numerical
    differentiation happens here.
    """

    kind: str = ""
    n: int

    @abstractmethod
    def _value(self, x: np.ndarray) -> float:
        """F(x) for a checked point."""

    @abstractmethod
    def _gradient(self, x: np.ndarray) -> np.ndarray:
        """Exact gradient of F at a checked point."""

    @abstractmethod
    def _hessian(self, x: np.ndarray) -> np.ndarray:
        """Exact Hessian of F at a checked point."""

    @abstractmethod
    def to_dict(self) -> Dict[str, Any]:
        """Convert the potential to its JSON descriptor."""

    def check_point(self, x) -> np.ndarray:
        """Return x as a float vector, raising if its length is not n."""
        point = np.asarray(x, dtype=float).reshape(-1)
        if point.shape[0] != self.n:
            raise DimensionMismatch(
                f"{self.kind} potential has dimension {self.n}, got a point of length {point.shape[0]}",
                expected=self.n,
                got=int(point.shape[0]),
            )
        return point

    def eval(self, x) -> float:
        """Evaluate F(x)."""
        return float(self._value(self.check_point(x)))

    def grad(self, x) -> np.ndarray:
        """Exact gradient of F at x."""
        return self._gradient(self.check_point(x))

    def hess(self, x) -> np.ndarray:
        """Exact Hessian of F at x, symmetrized."""
        h = np.atleast_2d(self._hessian(self.check_point(x)))
        return 0.5 * (h + h.T)

    def __add__(self, other: "ToricPotential") -> "ToricPotential":
        from orbitlab.potentials.composite import SumPotential

        return SumPotential((self, other))

    def __rmul__(self, factor: float) -> "ToricPotential":
        from orbitlab.potentials.composite import ScaledPotential

        return ScaledPotential(float(factor), self)
