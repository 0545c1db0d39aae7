"""Deciding Axioms I, II and III (subclauses a, b, c) for a finite datum.

Each check returns a :class:`Verdict`. A failed verdict always carries a
witness: the first violating point, pair or subset in point-index order, and
for the quantitative clauses the two sides of the broken identity.

The quantitative clauses III(b) and III(c) are additive in the test set ``B``
on both sides, so by default they are checked on singletons only. Passing
``exhaustive=True`` re-checks them on every subset (``n <= 16``), evaluating
each side straight from its definition.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Literal

from .core import (
    Datum,
    Relation,
    Subset,
    charge_eval,
    iter_bits,
    product_charge_eval,
    relation_compose,
)
from .errors import BudgetExceeded, PreconditionError

WitnessKind = Literal["point", "pair", "subset"]

MAX_EXHAUSTIVE_N = 16
POWER_SET_NOTE = "measurability is vacuous: the algebra is the full power set"


@dataclass(frozen=True)
class Verdict:
    name: str
    holds: bool
    witness: str | tuple[str, ...] | None = None
    witness_kind: WitnessKind | None = None
    lhs: Fraction | None = None
    rhs: Fraction | None = None
    note: str = ""

    def __bool__(self) -> bool:
        return self.holds

    def to_dict(self) -> dict:
        out: dict = {"holds": self.holds}
        if self.witness is not None:
            out["witness"] = list(self.witness) if isinstance(self.witness, tuple) else self.witness
            out["witness_kind"] = self.witness_kind
        if self.lhs is not None:
            out["lhs"] = str(self.lhs)
        if self.rhs is not None:
            out["rhs"] = str(self.rhs)
        if self.note:
            out["note"] = self.note
        return out


def passed(name: str, note: str = "") -> Verdict:
    return Verdict(name, True, note=note)


def subset_witness(B: Subset) -> tuple[str, ...]:
    return B.labels()


@dataclass(frozen=True)
class AxiomReport:
    axiom_I: Verdict
    axiom_II: Verdict
    axiom_III_a: Verdict
    axiom_III_b: Verdict
    axiom_III_c: Verdict
    exhaustive: bool = False

    @property
    def admissible(self) -> bool:
        return all(v.holds for v in self.verdicts().values())

    def verdicts(self) -> dict[str, Verdict]:
        return {
            "I": self.axiom_I,
            "II": self.axiom_II,
            "III_a": self.axiom_III_a,
            "III_b": self.axiom_III_b,
            "III_c": self.axiom_III_c,
        }

    def pattern(self) -> tuple[bool, bool, bool, bool, bool]:
        return tuple(v.holds for v in self.verdicts().values())  # type: ignore[return-value]

    def failed(self) -> list[str]:
        return [k for k, v in self.verdicts().items() if not v.holds]

    def to_dict(self) -> dict:
        return {
            "axioms": {k: v.to_dict() for k, v in self.verdicts().items()},
            "admissible": self.admissible,
            "mode": "exhaustive" if self.exhaustive else "singleton",
        }


def check_axiom_I(d: Datum) -> Verdict:
    """Idempotence of the retraction and ``Pi|_R = id_R``.

    ``R`` and ``I`` are disjoint by construction of :class:`Datum`; the
    measurability clause holds trivially on the power set.
    """
    pi = d.pi
    labels = d.labels
    for x in range(d.n):
        px = pi[x]
        if x in d.R and px != x:
            return Verdict(
                "I", False, labels[x], "point",
                note=f"Pi({labels[x]}) = {labels[px]} although {labels[x]} is in R",
            )
        if pi[px] != px:
            return Verdict(
                "I", False, labels[x], "point",
                note=f"Pi(Pi({labels[x]})) = {labels[pi[px]]} != {labels[px]} = Pi({labels[x]})",
            )
    return passed("I", POWER_SET_NOTE)


def check_axiom_II(d: Datum) -> Verdict:
    return check_equivalence_relation(d.G, name="II")


def check_equivalence_relation(G: Relation, name: str = "II") -> Verdict:
    """Reflexive, symmetric and idempotent; witness is the first offending pair."""
    labels = G.universe.labels
    for i in range(G.universe.n):
        if (i, i) not in G:
            return Verdict(name, False, (labels[i], labels[i]), "pair", note="missing diagonal pair")
    asym = G ^ G.transpose()
    for i, j in asym.index_pairs():
        return Verdict(name, False, (labels[i], labels[j]), "pair", note="relation is not symmetric")
    diff = relation_compose(G, G) ^ G
    for i, j in diff.index_pairs():
        where = "in G o G but not in G" if (i, j) not in G else "in G but not in G o G"
        return Verdict(name, False, (labels[i], labels[j]), "pair", note=f"not idempotent: pair {where}")
    return passed(name)


def _load_atoms(d: Datum) -> list[Fraction]:
    """``C({x}) = m(x) * mu(G-row of x)`` for each point."""
    w = d.weights
    out = []
    for i, row in enumerate(d.G.rows):
        out.append(w[i] * sum((w[j] for j in iter_bits(row)), Fraction(0)) if w[i] else Fraction(0))
    return out


def _load_direct(d: Datum, B: Subset) -> Fraction:
    return product_charge_eval(d.charge, Relation.rectangle(B, d.full()) & d.G)


def check_axiom_III(d: Datum, exhaustive: bool = False) -> tuple[Verdict, Verdict, Verdict]:
    return _check_III_a(d), _check_III_b(d, exhaustive), _check_III_c(d, exhaustive)


def _check_III_a(d: Datum) -> Verdict:
    total = d.mu(d.R) + d.mu(d.I)
    if total == d.E0 and d.E0 > 0:
        return passed("III_a")
    return Verdict(
        "III_a", False, subset_witness(d.R | d.I), "subset", lhs=total, rhs=d.E0,
        note="mu(R) + mu(I) differs from E0",
    )


def _check_III_b(d: Datum, exhaustive: bool) -> Verdict:
    if exhaustive:
        _guard(d.n)
        for B in d.R.subsets():
            lhs, rhs = d.mu(d.preimage(B)), d.mu(B)
            if lhs != rhs:
                return Verdict("III_b", False, subset_witness(B), "subset", lhs, rhs)
        return passed("III_b", "checked on every subset of R")
    w = d.weights
    fiber_mass = [Fraction(0)] * d.n
    for x, r in enumerate(d.pi):
        fiber_mass[r] += w[x]
    for r in d.R:
        if fiber_mass[r] != w[r]:
            return Verdict("III_b", False, (d.labels[r],), "subset", fiber_mass[r], w[r])
    return passed("III_b", "checked on singletons of R")


def _check_III_c(d: Datum, exhaustive: bool) -> Verdict:
    eta = d.eta
    if exhaustive:
        _guard(d.n)
        for B in d.universe.all_subsets():
            lhs = _load_direct(d, B)
            rhs = d.mu(B) + eta * _load_direct(d, d.preimage(B))
            if lhs != rhs:
                return Verdict("III_c", False, subset_witness(B), "subset", lhs, rhs)
        return passed("III_c", "checked on every subset of X")
    atoms = _load_atoms(d)
    pulled = [Fraction(0)] * d.n
    for x, r in enumerate(d.pi):
        pulled[r] += atoms[x]
    for x in range(d.n):
        # preimage of {x} is empty unless x lies in R
        rhs = d.weights[x] + eta * (pulled[x] if x in d.R else 0)
        if atoms[x] != rhs:
            return Verdict("III_c", False, (d.labels[x],), "subset", atoms[x], rhs)
    return passed("III_c", "checked on singletons of X")


def _guard(n: int) -> None:
    if n > MAX_EXHAUSTIVE_N:
        raise BudgetExceeded(f"exhaustive subset mode is limited to n <= {MAX_EXHAUSTIVE_N}, got {n}")


def check_admissible(d: Datum, exhaustive: bool = False) -> AxiomReport:
    a, b, c = check_axiom_III(d, exhaustive)
    return AxiomReport(check_axiom_I(d), check_axiom_II(d), a, b, c, exhaustive)


def is_admissible(d: Datum) -> bool:
    return check_admissible(d).admissible


def require(d: Datum, *clauses: str) -> None:
    """Raise :class:`PreconditionError` naming every listed clause that fails.

    Clause names: ``"I"``, ``"II"``, ``"III_a"``, ``"III_b"``, ``"III_c"``,
    ``"admissible"`` and ``"eta<1"``.
    """
    missing = []
    cache: AxiomReport | None = None
    for clause in clauses:
        if clause == "eta<1":
            if d.eta >= 1:
                missing.append("eta < 1")
            continue
        if cache is None:
            cache = check_admissible(d)
        if clause == "admissible":
            if not cache.admissible:
                missing.extend(f"Axiom {k}" for k in cache.failed())
        elif not cache.verdicts()[clause].holds:
            missing.append(f"Axiom {clause}")
    if missing:
        raise PreconditionError("unmet hypotheses: " + ", ".join(missing), missing)


@dataclass(frozen=True)
class ConsequenceReport:
    verdicts: list[Verdict] = field(default_factory=list)

    @property
    def holds(self) -> bool:
        return all(v.holds for v in self.verdicts)


def derived_consequence_checks(d: Datum) -> ConsequenceReport:
    """Consequences every admissible datum must satisfy.

    (i) fixed points of the retraction are exactly R; (ii) iterates Pi^n equal
    Pi for n = 2..5; (iii) G is transitive; (iv) under the full partition
    X = R + I the hidden sector is null; (v) at eta = 0 the curvature load
    equals mu on every singleton.
    """
    require(d, "admissible")
    labels = d.labels
    pi = d.pi
    out = []

    fixed = Subset(d.universe, sum(1 << x for x in range(d.n) if pi[x] == x))
    if fixed == d.R:
        out.append(passed("fixed_points_are_R"))
    else:
        bad = next(iter_bits(fixed.mask ^ d.R.mask))
        out.append(Verdict("fixed_points_are_R", False, labels[bad], "point"))

    def power(k: int) -> tuple[int, ...]:
        m = tuple(range(d.n))
        for _ in range(k):
            m = tuple(pi[j] for j in m)
        return m

    iterates = next(
        (Verdict("iterated_projection", False, labels[x], "point", note=f"Pi^{k} differs from Pi")
         for k in range(2, 6) for x, y in enumerate(power(k)) if y != pi[x]),
        passed("iterated_projection", "Pi^n = Pi for n = 2..5"),
    )
    out.append(iterates)

    G = d.G
    trans = next(
        (Verdict("transitive", False, (labels[i], labels[k]), "pair")
         for i, j in G.index_pairs() for k in iter_bits(G.rows[j]) if (i, k) not in G),
        passed("transitive"),
    )
    out.append(trans)

    if (d.R | d.I) == d.full():
        mu_I = d.mu(d.I)
        out.append(
            passed("hidden_sector_null") if mu_I == 0
            else Verdict("hidden_sector_null", False, subset_witness(d.I), "subset", mu_I, Fraction(0))
        )
    else:
        out.append(passed("hidden_sector_null", "vacuous: X is not R + I"))

    if d.eta == 0:
        atoms = _load_atoms(d)
        bad = [x for x in range(d.n) if atoms[x] != d.weights[x]]
        out.append(
            passed("baseline_load_equals_mu") if not bad
            else Verdict("baseline_load_equals_mu", False, (labels[bad[0]],), "subset",
                         atoms[bad[0]], d.weights[bad[0]])
        )
    else:
        out.append(passed("baseline_load_equals_mu", "vacuous: eta != 0"))
    return ConsequenceReport(out)
