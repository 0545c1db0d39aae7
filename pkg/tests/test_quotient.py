from fractions import Fraction as F

import pytest
from hypothesis import given

from structmodels.axioms import check_admissible
from structmodels.constructors import (
    class_model,
    collapse_map,
    diagonal_finite_model,
    fiber_mass_example,
    pad_fibers,
    separating_model,
)
from structmodels.core import Datum
from structmodels.coupling import curvature_load
from structmodels.errors import PreconditionError, StructuralError
from structmodels.morphisms import Morphism
from structmodels.quotient import (
    check_factorization,
    check_fiber_annihilation,
    curvature_load_closed_form,
    fibers_by_label,
    is_fiber_model,
    restrict,
    restrict_morphism,
)

from support import admissible_cores


def test_fibers_and_annihilation():
    d = fiber_mass_example(0)
    assert fibers_by_label(d) == {"r0": ("r0", "a"), "r1": ("r1", "b")}
    assert check_fiber_annihilation(d).holds
    heavy = fiber_mass_example(1)
    report = check_fiber_annihilation(heavy)
    assert not report.holds and not report.III_b_holds
    assert (report.witness, report.witness_fiber) == (("a",), "r0")
    assert report.mass_off_R == 1


def test_restrict_keeps_R_and_its_relation():
    d = class_model([2, 3], [1, 1])
    core = restrict(d)
    assert core.labels == ("r0", "r1")
    assert core.is_identity_retraction() and core.E0 == 2
    assert check_admissible(core).admissible


def test_restrict_refuses_a_null_core():
    d = Datum.from_labels(["r", "a"], [0, 1], ["r"], ["a"], {"r": "r", "a": "r"},
                         [("r", "r"), ("a", "a")], 1, 0)
    with pytest.raises(StructuralError) as exc:
        restrict(d)
    assert exc.value.code == "E_E0_RANGE"


def test_non_redundancy_of_invariance():
    d, _ = separating_model("notIII")
    report = check_factorization(d)
    assert not report.admissibility_reduces.applicable
    assert report.admissibility_reduces.missing == ("Axiom III_b",)
    assert "core is admissible" in report.admissibility_reduces.note
    assert check_admissible(restrict(d)).admissible


def test_closed_form_load_on_class_model():
    d = class_model([2, 2], [1, 0], F(1, 2))
    for B in d.universe.all_subsets():
        assert curvature_load_closed_form(d, B) == curvature_load(d, B)


def test_restrict_morphism():
    core = diagonal_finite_model(2, 0, (1, 1))
    padded = pad_fibers(core, {"r1": 2})
    phi = Morphism.from_labels(padded, core, collapse_map(padded, core))
    rphi = restrict_morphism(phi)
    assert rphi.mapping == (0, 1)
    d, _ = separating_model("notIII")
    with pytest.raises(PreconditionError):
        restrict_morphism(Morphism(d, d, tuple(range(d.n))))


@given(admissible_cores(max_blocks=3))
def test_padded_variants_factor_through_the_core(core):
    rep = core.labels[0]
    for join in (True, False):
        d = pad_fibers(core, {rep: 2}, join=join)
        assert is_fiber_model(d)
        assert check_factorization(d).all_hold
        assert restrict(d).G == core.G
