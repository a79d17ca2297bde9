"""Tests for the potentials package."""
import json

import numpy as np
import pytest

from orbitlab.errors import DimensionMismatch
from orbitlab.finite_differences import central_gradient, central_hessian
from orbitlab.potentials import (
    FlatPotential,
    FubiniStudyPotential,
    ScaledPotential,
    SeparableCoshPotential,
    SeparableExpPotential,
    SumPotential,
    dump_potential,
    load_potential,
    potential_from_dict,
)

BUILTINS = [
    FlatPotential(2),
    SeparableExpPotential(2),
    SeparableCoshPotential(2),
    FubiniStudyPotential(1),
    FubiniStudyPotential(2),
    FubiniStudyPotential(3, scale=2.5),
    SumPotential((FlatPotential(2), FubiniStudyPotential(2))),
    ScaledPotential(3.0, SeparableCoshPotential(2)),
]


@pytest.mark.parametrize("potential", BUILTINS, ids=lambda p: p.kind)
def test_gradient_matches_finite_differences(potential):
    """The closed-form gradient agrees with central differences of F."""
    rng = np.random.default_rng(11)
    for x in rng.uniform(-1.5, 1.5, (5, potential.n)):
        fd = central_gradient(potential.eval, x, np.full(potential.n, 1e-5))
        np.testing.assert_allclose(potential.grad(x), fd, rtol=1e-6, atol=1e-8)


@pytest.mark.parametrize("potential", BUILTINS, ids=lambda p: p.kind)
def test_hessian_matches_finite_differences(potential):
    """The closed-form Hessian agrees with central differences of F at step 1e-4 (1 + |x_i|)."""
    rng = np.random.default_rng(12)
    for x in rng.uniform(-1.5, 1.5, (100, potential.n)):
        hess = potential.hess(x)
        fd = central_hessian(potential.eval, x, 1e-4 * (1.0 + np.abs(x)))
        assert np.linalg.norm(fd - hess) <= 1e-6 * np.linalg.norm(hess)


@pytest.mark.parametrize("potential", BUILTINS, ids=lambda p: p.kind)
def test_hessian_is_symmetric_positive_definite(potential):
    x = np.linspace(-1.0, 1.0, potential.n)
    hess = potential.hess(x)
    np.testing.assert_array_equal(hess, hess.T)
    assert np.linalg.eigvalsh(hess)[0] > 0


def test_fubini_study_moment_image_is_open_simplex():
    """grad F lies in the open simplex scaled by lambda."""
    potential = FubiniStudyPotential(3, scale=2.0)
    rng = np.random.default_rng(3)
    for x in rng.uniform(-6, 6, (20, 3)):
        m = potential.grad(x)
        assert np.all(m > 0)
        assert m.sum() < 2.0


def test_fubini_study_barycenter_at_origin():
    potential = FubiniStudyPotential(2)
    np.testing.assert_allclose(potential.grad([0.0, 0.0]), [1 / 3, 1 / 3], atol=1e-15)
    assert potential.eval([0.0, 0.0]) == pytest.approx(0.5 * np.log(3.0))


def test_fubini_study_does_not_overflow():
    """Far out towards the polytope boundary the potential stays finite."""
    potential = FubiniStudyPotential(2)
    x = np.array([400.0, -400.0])
    assert np.isfinite(potential.eval(x))
    assert np.all(np.isfinite(potential.grad(x)))
    assert potential.eval(x) == pytest.approx(400.0)


def test_separable_cosh_closed_forms():
    potential = SeparableCoshPotential(1)
    assert potential.eval([0.0]) == pytest.approx(0.25)
    assert potential.grad([0.5])[0] == pytest.approx(0.5 * np.sinh(1.0))
    assert potential.hess([0.5])[0, 0] == pytest.approx(np.cosh(1.0))


def test_dimension_mismatch():
    with pytest.raises(DimensionMismatch) as e:
        FubiniStudyPotential(2).eval([0.0, 0.0, 0.0])
    assert e.value.details == {"expected": 2, "got": 3}


def test_sum_requires_equal_dimensions():
    with pytest.raises(DimensionMismatch):
        SumPotential((FlatPotential(2), FlatPotential(3)))


def test_scale_must_be_positive():
    with pytest.raises(ValueError):
        ScaledPotential(-1.0, FlatPotential(1))
    with pytest.raises(ValueError):
        FubiniStudyPotential(1, scale=0.0)


def test_operators_build_composites():
    combined = FlatPotential(2) + 2.0 * FubiniStudyPotential(2)
    assert isinstance(combined, SumPotential)
    x = np.array([0.3, -0.2])
    expected = FlatPotential(2).hess(x) + 2.0 * FubiniStudyPotential(2).hess(x)
    np.testing.assert_allclose(combined.hess(x), expected)


def test_potential_from_dict_nested():
    """Nested descriptors build the same potential as the constructors."""
    data = {
        "kind": "sum",
        "terms": [
            {"kind": "fubini_study", "n": 2, "lambda": 1.5},
            {"kind": "scale", "lambda": 0.5, "term": {"kind": "separable_cosh", "n": 2}},
        ],
    }
    potential = potential_from_dict(data)
    assert potential.n == 2
    assert potential.to_dict() == data
    assert json.loads(dump_potential(load_potential(json.dumps(data)))) == data


def test_potential_from_dict_unknown_kind():
    with pytest.raises(ValueError):
        potential_from_dict({"kind": "kummer", "n": 2})
