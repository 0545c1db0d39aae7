from fractions import Fraction as F

import pytest
from hypothesis import given

from structmodels.classify import (
    block_curvature_load,
    check_block_dichotomy,
    equivalence_classes,
    total_mass_summary,
)
from structmodels.constructors import block_family_model, class_model, separating_model
from structmodels.core import Relation
from structmodels.coupling import curvature_load
from structmodels.errors import DomainError, PreconditionError

from support import _blocks_datum, admissible_cores, partitions, universes


def test_classes_are_sorted_by_smallest_member():
    d = block_family_model([2, 1], [[F(1, 2), F(1, 2)], [1]], 0)
    blocks = equivalence_classes(d.G)
    assert [C.labels() for C in blocks.classes] == [("c0_0", "c0_1"), ("c1_0",)]
    assert blocks.relation() == d.G
    assert blocks.with_masses(d).masses == (1, 1)


def test_non_equivalence_is_refused():
    d, _ = separating_model("notII")
    with pytest.raises(PreconditionError) as exc:
        equivalence_classes(d.G)
    assert exc.value.missing == ["Axiom II"]


def test_dichotomy_branches_and_witness():
    d = _blocks_datum([[F(1), F(1)], [F(0)], [F(2)]], F(1, 2))
    report = check_block_dichotomy(d)
    assert report.holds
    assert [c.branch for c in report.classes] == ["normalized", "null", "normalized"]
    bad = _blocks_datum([[F(1)], [F(3, 2)]], F(1, 2))
    report = check_block_dichotomy(bad)
    assert not report.holds and report.witness == ("c0_0",)
    assert report.to_dict()["witness"] == ["c0_0"]


def test_dichotomy_needs_identity_core_and_eta_below_one():
    with pytest.raises(PreconditionError) as exc:
        check_block_dichotomy(class_model([2], [1]))
    assert exc.value.missing == ["identity retraction"]
    d = _blocks_datum([[F(1)]], F(0)).replace(eta=F(1))
    with pytest.raises(DomainError):
        check_block_dichotomy(d)


def test_total_mass_summary():
    d = block_family_model([1, 2], [[2], [1, 1]], F(1, 2))
    s = total_mass_summary(d)
    assert (s.class_count, s.mass_X, s.mass_G) == (2, 4, 8)
    with pytest.raises(PreconditionError):
        total_mass_summary(_blocks_datum([[F(1)], [F(0)]], F(0)))


@given(admissible_cores())
def test_block_formula_matches_the_direct_load(d):
    for B in list(d.universe.all_subsets())[:64]:
        assert block_curvature_load(d, B) == curvature_load(d, B) == d.mu(B) / (1 - d.eta)
    assert check_block_dichotomy(d).holds


@given(universes().flatmap(lambda X: partitions(X).map(lambda p: (X, p))))
def test_union_find_recovers_any_partition(arg):
    X, parts = arg
    G = Relation.blocks(X, parts)
    blocks = equivalence_classes(G)
    assert sorted(C.mask for C in blocks.classes) == sorted(C.mask for C in parts)
