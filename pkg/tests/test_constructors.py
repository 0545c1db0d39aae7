from fractions import Fraction as F

import pytest

from structmodels.axioms import check_admissible
from structmodels.constructors import (
    SEPARATING_KINDS,
    block_family_model,
    class_model,
    collapse_map,
    countable_truncation,
    diagonal_finite_model,
    eta_model,
    infer_E0,
    pad_fibers,
    separating_model,
    total_relation_model,
)
from structmodels.errors import DomainError, PreconditionError, StructuralError

from support import ETA_GRID, family_suite


@pytest.mark.parametrize("name,d", family_suite(), ids=[n for n, _ in family_suite()])
def test_families_are_admissible(name, d):
    assert check_admissible(d).admissible, name


def test_family_parameters_are_validated():
    with pytest.raises(StructuralError):
        diagonal_finite_model(2, 0, (1,))
    with pytest.raises(StructuralError):
        diagonal_finite_model(1, 0, (2,))
    with pytest.raises(StructuralError):
        diagonal_finite_model(2, 0, (0, 0))
    with pytest.raises(DomainError):
        eta_model(1)
    with pytest.raises(StructuralError) as exc:
        block_family_model([2], [[1, 1]], 0)
    assert exc.value.code == "E_BLOCK_MASS"
    with pytest.raises(StructuralError):
        class_model([2, 1], [1])


def test_eta_families_carry_the_normalised_mass():
    for eta in ETA_GRID:
        assert eta_model(eta).weights[0] == 1 / (1 - eta)
        assert total_relation_model(eta).E0 == 1 / (1 - eta)


def test_truncation_needs_an_admissible_base_at_eta_zero():
    d = countable_truncation(diagonal_finite_model(1, 0, (1,)), 3)
    assert d.labels == ("r0", "y0", "y1", "y2")
    with pytest.raises(PreconditionError) as exc:
        countable_truncation(eta_model(F(1, 2)), 1)
    assert exc.value.missing == ["eta = 0"]
    bad, _ = separating_model("not_c")
    with pytest.raises(PreconditionError):
        countable_truncation(bad, 1)


@pytest.mark.parametrize("kind", SEPARATING_KINDS)
def test_separating_models_are_reproducible(kind):
    a, ea = separating_model(kind)
    b, eb = separating_model(kind)
    assert a == b and ea == eb
    assert sum(not v for v in ea.values()) == 1


def test_unknown_separating_kind():
    with pytest.raises(ValueError):
        separating_model("notIV")


def test_pad_and_collapse():
    core = diagonal_finite_model(2, 0, (1, 1))
    d = pad_fibers(core, {"r0": 2, "r1": 1})
    assert d.labels == ("r0", "r1", "r0.h0", "r0.h1", "r1.h0")
    assert ("r0", "r0.h1") in d.G.pairs()
    assert collapse_map(d, core) == {"r0": "r0", "r1": "r1", "r0.h0": "r0", "r0.h1": "r0", "r1.h0": "r1"}
    again = pad_fibers(d, {"r0": 1})
    assert again.labels[-1] == "r0.h2"


def test_infer_E0():
    d = diagonal_finite_model(2, 0, (1, 1)).replace(E0=F(7))
    assert infer_E0(d).E0 == 2
