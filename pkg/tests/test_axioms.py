from fractions import Fraction as F

import pytest
from hypothesis import given, settings

from structmodels.axioms import (
    MAX_EXHAUSTIVE_N,
    check_admissible,
    check_axiom_I,
    check_axiom_II,
    check_axiom_III,
    derived_consequence_checks,
    require,
)
from structmodels.constructors import SEPARATING_KINDS, countable_truncation, diagonal_finite_model, separating_model
from structmodels.core import Datum
from structmodels.errors import BudgetExceeded, PreconditionError

from support import admissible_cores, admissible_suite, data


@pytest.mark.parametrize("kind", SEPARATING_KINDS)
def test_separating_models_fail_exactly_their_clause(kind):
    d, expected = separating_model(kind)
    report = check_admissible(d)
    assert {k: v.holds for k, v in report.verdicts().items()} == expected
    assert not report.admissible


def test_witnesses_are_labels_and_values():
    d, _ = separating_model("notI")
    v = check_axiom_I(d)
    assert v.witness == "a" and v.witness_kind == "point"
    d, _ = separating_model("notII")
    v = check_axiom_II(d)
    assert v.witness == ("a", "c") and v.witness_kind == "pair"
    d, _ = separating_model("not_b")
    b = check_axiom_III(d)[1]
    assert (b.witness, b.lhs, b.rhs) == (("r",), F(2), F(1))
    d, _ = separating_model("not_c")
    c = check_axiom_III(d)[2]
    assert (c.witness, c.lhs, c.rhs) == (("a",), F(1), F(3, 2))
    assert c.to_dict()["lhs"] == "1"


def test_report_serialises_verdicts():
    d, _ = separating_model("not_a")
    out = check_admissible(d).to_dict()
    assert out["admissible"] is False
    assert out["axioms"]["III_a"]["holds"] is False
    assert out["mode"] == "singleton"


def test_exhaustive_guard():
    d = countable_truncation(diagonal_finite_model(1, 0, (1,)), MAX_EXHAUSTIVE_N)
    with pytest.raises(BudgetExceeded):
        check_admissible(d, exhaustive=True)
    assert check_admissible(d).admissible


def test_require_lists_every_missing_clause():
    d, _ = separating_model("notII")
    with pytest.raises(PreconditionError) as exc:
        require(d, "I", "II", "III_c")
    assert exc.value.missing == ["Axiom II"]
    eta1 = Datum.from_labels(["a"], [1], ["a"], [], {"a": "a"}, [("a", "a")], 1, 1)
    with pytest.raises(PreconditionError) as exc:
        require(eta1, "eta<1")
    assert exc.value.missing == ["eta < 1"]


def test_consequences_hold_on_the_admissible_suite():
    for d in admissible_suite():
        assert derived_consequence_checks(d).holds


@settings(max_examples=150)
@given(data())
def test_singleton_and_exhaustive_modes_agree(d):
    _, b1, c1 = check_axiom_III(d)
    _, b2, c2 = check_axiom_III(d, exhaustive=True)
    assert b1.holds == b2.holds
    assert c1.holds == c2.holds


@given(data(equivalence=False))
def test_axiom_II_matches_a_direct_definition(d):
    G = d.G
    pairs = set(G.index_pairs())
    n = d.n
    refl = all((i, i) in pairs for i in range(n))
    sym = all((j, i) in pairs for i, j in pairs)
    comp = {(i, k) for i, j in pairs for j2, k in pairs if j == j2}
    assert check_axiom_II(d).holds == (refl and sym and comp == pairs)


@given(admissible_cores())
def test_generated_cores_are_admissible(d):
    assert check_admissible(d).admissible
    assert check_admissible(d, exhaustive=True).admissible
