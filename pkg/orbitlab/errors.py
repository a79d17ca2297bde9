"""Exceptions raised by orbitlab, each tied to a CLI exit code."""
from typing import Any, Dict, Optional


class OrbitLabError(Exception):
    """Base class for all orbitlab errors."""

    exit_code = 1
    kind = "error"

    def __init__(self, message: str, **details: Any):
        """Initialize with a message and optional JSON-serializable details."""
        super().__init__(message)
        self.message = message
        self.details: Dict[str, Any] = details

    def to_dict(self) -> Dict[str, Any]:
        """Convert the error to the JSON error object printed by the CLI."""
        return {
            "error": self.kind,
            "message": self.message,
            "exit_code": self.exit_code,
            "details": self.details,
        }


class ConfigError(OrbitLabError):
    """The configuration file is missing, malformed or fails validation."""

    exit_code = 2
    kind = "config_error"


class DimensionMismatch(OrbitLabError):
    """A point does not have the dimension of the potential."""

    exit_code = 2
    kind = "dimension_mismatch"


class ResolutionTooSmall(OrbitLabError):
    """A Haar quadrature was requested with fewer than 4 nodes on some axis."""

    exit_code = 2
    kind = "resolution_too_small"


class NotKaehler(OrbitLabError):
    """Hess F is not positive definite at some evaluation point."""

    exit_code = 3
    kind = "not_kaehler"


class SubmersionFailure(OrbitLabError):
    """The moment map Jacobian is singular to machine precision."""

    exit_code = 3
    kind = "submersion_failure"


class StencilTooWide(OrbitLabError):
    """A user-supplied finite-difference step exceeds the configured bound."""

    exit_code = 3
    kind = "stencil_too_wide"


class DegenerateGrid(OrbitLabError):
    """The grid nodes do not determine an affine fit."""

    exit_code = 3
    kind = "degenerate_grid"


class ZeroPoint(OrbitLabError):
    """The zero matrix does not represent a point of projective space."""

    exit_code = 3
    kind = "zero_point"


class SingularPath(OrbitLabError):
    """A path in GL(2,C) passes through a singular matrix."""

    exit_code = 3
    kind = "singular_path"


class NotConverged(OrbitLabError):
    """An optimization did not reach its tolerance."""

    exit_code = 4
    kind = "not_converged"

    def __init__(self, message: str, result: Optional[Any] = None, **details: Any):
        super().__init__(message, **details)
        self.result = result
