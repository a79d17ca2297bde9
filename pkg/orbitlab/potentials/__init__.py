"""Torus-invariant Kähler potentials and their JSON descriptors."""
import json
from typing import Any, Dict

from orbitlab.potentials.base import ToricPotential
from orbitlab.potentials.flat import FlatPotential
from orbitlab.potentials.fubini_study import FubiniStudyPotential
from orbitlab.potentials.separable import SeparableCoshPotential, SeparableExpPotential
from orbitlab.potentials.composite import SumPotential, ScaledPotential

POTENTIAL_KINDS = {
    FlatPotential.kind: FlatPotential,
    FubiniStudyPotential.kind: FubiniStudyPotential,
    SeparableCoshPotential.kind: SeparableCoshPotential,
    SeparableExpPotential.kind: SeparableExpPotential,
    SumPotential.kind: SumPotential,
    ScaledPotential.kind: ScaledPotential,
}


def potential_from_dict(data: Dict[str, Any]) -> ToricPotential:
    """Create a potential from its JSON descriptor.

    Descriptors look like {"kind": "fubini_study", "n": 2, "lambda": 1.0},
    {"kind": "sum", "terms": [...]} or {"kind": "scale", "lambda": 2.0, "term": {...}}.
    """
    kind = data.get("kind")
    if kind not in POTENTIAL_KINDS:
        raise ValueError(f"Unknown potential kind: {kind!r}")

    if kind == SumPotential.kind:
        return SumPotential(tuple(potential_from_dict(term) for term in data["terms"]))
    if kind == ScaledPotential.kind:
        return ScaledPotential(float(data["lambda"]), potential_from_dict(data["term"]))
    if kind == FubiniStudyPotential.kind:
        return FubiniStudyPotential(int(data["n"]), float(data.get("lambda", 1.0)))
    return POTENTIAL_KINDS[kind](int(data["n"]))


def load_potential(text: str) -> ToricPotential:
    """Parse a JSON descriptor string."""
    return potential_from_dict(json.loads(text))


def dump_potential(potential: ToricPotential) -> str:
    """Serialize a potential to a canonical JSON string."""
    return json.dumps(potential.to_dict(), sort_keys=True)


# Export all potentials
__all__ = [
    'ToricPotential',
    'FlatPotential',
    'FubiniStudyPotential',
    'SeparableCoshPotential',
    'SeparableExpPotential',
    'SumPotential',
    'ScaledPotential',
    'POTENTIAL_KINDS',
    'potential_from_dict',
    'load_potential',
    'dump_potential',
]
