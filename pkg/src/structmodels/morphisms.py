"""Structure-preserving maps between data, their composition and coupling transport.

Clause (M4) is checked through pushforward atoms: with atomic charges the
pullback of any target set (or set of pairs) has charge given by the pushed
forward weights, so agreement on target points settles every clause at once.
``exhaustive=True`` re-checks this against subsets, rectangles and, for tiny
targets, the whole product algebra.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from typing import Literal, Mapping

from .axioms import Verdict, check_axiom_III, passed
from .core import Datum, Relation, Subset, iter_bits, product_charge_eval
from .errors import BudgetExceeded, PreconditionError, StructuralError

ZERO = Fraction(0)
MAX_EXHAUSTIVE_TARGET = 10
MAX_PRODUCT_ALGEBRA_PAIRS = 12


@dataclass(frozen=True)
class Morphism:
    source: Datum
    target: Datum
    mapping: tuple[int, ...]

    def __post_init__(self):
        mapping = tuple(self.mapping)
        object.__setattr__(self, "mapping", mapping)
        if len(mapping) != self.source.n:
            raise StructuralError("a morphism must be defined at every source point", code="E_MAP_TOTAL")
        for j in mapping:
            if not 0 <= j < self.target.n:
                raise StructuralError(f"image index {j} outside the target", code="E_MAP_RANGE")

    @classmethod
    def from_labels(cls, source: Datum, target: Datum, mapping: Mapping[str, str]) -> "Morphism":
        missing = [x for x in source.labels if x not in mapping]
        if missing:
            raise StructuralError(f"map undefined at {missing[0]!r}", code="E_MAP_TOTAL")
        extra = [x for x in mapping if x not in source.universe._index]
        if extra:
            raise StructuralError(f"map given at unknown point {extra[0]!r}", code="E_UNKNOWN_POINT")
        return cls(source, target, tuple(target.universe.index(mapping[x]) for x in source.labels))

    def __call__(self, i: int) -> int:
        return self.mapping[i]

    def by_label(self) -> dict[str, str]:
        t = self.target.labels
        return {x: t[j] for x, j in zip(self.source.labels, self.mapping)}

    def preimage(self, B: Subset) -> Subset:
        mask = 0
        for i, j in enumerate(self.mapping):
            if j in B:
                mask |= 1 << i
        return Subset(self.source.universe, mask)

    def pullback_relation(self, S: Relation) -> Relation:
        """``(phi x phi)^{-1}(S)`` as a relation on the source."""
        rows = []
        for j in self.mapping:
            target_row = S.rows[j]
            rows.append(sum(1 << y for y, k in enumerate(self.mapping) if target_row >> k & 1))
        return Relation(self.source.universe, tuple(rows))

    def pushforward_weights(self) -> tuple[Fraction, ...]:
        out = [ZERO] * self.target.n
        for x, j in enumerate(self.mapping):
            out[j] += self.source.weights[x]
        return tuple(out)

    def is_surjective(self) -> bool:
        return len(set(self.mapping)) == self.target.n

    def image(self) -> Subset:
        return Subset(self.target.universe, sum(1 << j for j in set(self.mapping)))


def identity(d: Datum) -> Morphism:
    return Morphism(d, d, tuple(range(d.n)))


def compose(psi: Morphism, phi: Morphism) -> Morphism:
    """``psi o phi``: first ``phi``, then ``psi``."""
    if phi.target != psi.source:
        raise StructuralError("cannot compose: the target of phi is not the source of psi", code="E_ENDPOINT")
    return Morphism(phi.source, psi.target, tuple(psi.mapping[j] for j in phi.mapping))


@dataclass(frozen=True)
class MorphismReport:
    M1: Verdict
    M2: Verdict
    M3: Verdict
    M4: Verdict
    image_in_R: Verdict
    E0_target: Fraction
    mass_source: Fraction
    E0_equality: bool
    exhaustive: bool = False

    @property
    def holds(self) -> bool:
        return self.M1.holds and self.M2.holds and self.M3.holds and self.M4.holds

    def __bool__(self) -> bool:
        return self.holds

    def clauses(self) -> dict[str, Verdict]:
        return {"M1": self.M1, "M2": self.M2, "M3": self.M3, "M4": self.M4}

    def to_dict(self) -> dict:
        return {
            "clauses": {k: v.to_dict() for k, v in self.clauses().items()},
            "morphism": self.holds,
            "image_in_R": self.image_in_R.to_dict(),
            "E0_target": str(self.E0_target),
            "mu_source_X": str(self.mass_source),
            "E0_bound_holds": self.E0_target <= self.mass_source,
            "E0_equality": self.E0_equality,
            "mode": "exhaustive" if self.exhaustive else "singleton",
        }


def _check_M2(phi: Morphism) -> Verdict:
    s, t = phi.source, phi.target
    for x in range(s.n):
        lhs, rhs = phi.mapping[s.pi[x]], t.pi[phi.mapping[x]]
        if lhs != rhs:
            return Verdict("M2", False, s.labels[x], "point",
                           note=f"phi(Pi(x)) = {t.labels[lhs]} but Pi'(phi(x)) = {t.labels[rhs]}")
    return passed("M2")


def _check_M3(phi: Morphism) -> Verdict:
    s, t = phi.source, phi.target
    for x, y in s.G.index_pairs():
        if (phi.mapping[x], phi.mapping[y]) not in t.G:
            return Verdict("M3", False, (s.labels[x], s.labels[y]), "pair",
                           note="image pair is missing from G'")
    return passed("M3")


def _check_M4_atoms(phi: Morphism) -> Verdict:
    t = phi.target
    for j, (pushed, m) in enumerate(zip(phi.pushforward_weights(), t.weights)):
        if pushed != m:
            return Verdict("M4", False, (t.labels[j],), "subset", pushed, m,
                           note="pushforward weight differs from the target weight")
    return passed("M4", "checked on target atoms")


def _pair_bits(n: int) -> list[tuple[int, int]]:
    return [(i, j) for i in range(n) for j in range(n)]


def _check_M4_exhaustive(phi: Morphism) -> Verdict:
    s, t = phi.source, phi.target
    if t.n > MAX_EXHAUSTIVE_TARGET:
        raise BudgetExceeded(f"exhaustive M4 is limited to targets with n <= {MAX_EXHAUSTIVE_TARGET}")
    for B in t.universe.all_subsets():
        lhs, rhs = s.mu(phi.preimage(B)), t.mu(B)
        if lhs != rhs:
            return Verdict("M4", False, B.labels(), "subset", lhs, rhs)
    subsets = list(t.universe.all_subsets())
    for A, B in product(subsets, subsets):
        rect = Relation.rectangle(A, B)
        lhs = product_charge_eval(s.charge, phi.pullback_relation(rect))
        rhs = product_charge_eval(t.charge, rect)
        if lhs != rhs:
            return Verdict("M4", False, A.labels() + ("x",) + B.labels(), "subset", lhs, rhs,
                           note="rectangle charge is not preserved")
    pairs = _pair_bits(t.n)
    if len(pairs) <= MAX_PRODUCT_ALGEBRA_PAIRS:
        for mask in range(1 << len(pairs)):
            S = Relation.from_index_pairs(t.universe, (p for k, p in enumerate(pairs) if mask >> k & 1))
            lhs = product_charge_eval(s.charge, phi.pullback_relation(S))
            rhs = product_charge_eval(t.charge, S)
            if lhs != rhs:
                return Verdict("M4", False, tuple(f"{a}:{b}" for a, b in S.pairs()), "subset", lhs, rhs,
                               note="product charge is not preserved")
        return passed("M4", "checked on every subset, rectangle and set of pairs")
    return passed("M4", "checked on every subset and rectangle")


def check_morphism(phi: Morphism, exhaustive: bool = False) -> MorphismReport:
    s, t = phi.source, phi.target
    if s.eta != t.eta:
        raise StructuralError(f"endpoints have different eta ({s.eta} and {t.eta})", code="E_ETA_MISMATCH")
    M1 = passed("M1", "measurability is vacuous: both algebras are full power sets")
    M4 = _check_M4_exhaustive(phi) if exhaustive else _check_M4_atoms(phi)

    image_in_R = passed("image_in_R")
    for r in s.R:
        if phi.mapping[r] not in t.R:
            image_in_R = Verdict("image_in_R", False, s.labels[r], "point", note="phi(r) lies outside R'")
            break

    E0_t = t.E0
    mass = s.mu(s.full())
    return MorphismReport(M1, _check_M2(phi), _check_M3(phi), M4, image_in_R, E0_t, mass, E0_t == mass,
                          exhaustive)


@dataclass(frozen=True)
class TransportReport:
    holds: bool
    mode: str
    values: dict[str, tuple[Fraction, Fraction]]
    strict: tuple[str, ...] = ()
    witness: tuple[str, ...] | None = None

    def __bool__(self) -> bool:
        return self.holds


def transport_coupling(phi: Morphism, mode: Literal["inclusion", "exact"] = "exact") -> TransportReport:
    """Transport of the coupling law along ``phi``.

    ``inclusion`` needs ``(phi x phi)^{-1}(G') <= G`` and yields the
    source-side inequality on every target atom. ``exact`` further needs the
    pullback to equal ``G``, surjectivity and (M2); then the target satisfies
    the coupling law in full.
    """
    if mode not in ("inclusion", "exact"):
        raise ValueError(f"unknown transport mode {mode!r}")
    s, t = phi.source, phi.target
    missing: list[str] = []
    if not check_axiom_III(s)[2].holds:
        missing.append("source coupling law")
    if not _check_M4_atoms(phi).holds:
        missing.append("M4")
    pulled = phi.pullback_relation(t.G)
    extra = pulled - s.G
    for x, y in extra.index_pairs():
        missing.append(f"pullback inclusion fails at ({s.labels[x]}, {s.labels[y]})")
        break
    if mode == "exact":
        lost = s.G - pulled
        for x, y in lost.index_pairs():
            missing.append(f"pullback is not exact at ({s.labels[x]}, {s.labels[y]})")
            break
        if not phi.is_surjective():
            uncovered = (t.full() - phi.image()).labels()
            missing.append(f"phi is not surjective: {uncovered[0]} has no preimage")
        if not _check_M2(phi).holds:
            missing.append("M2")
    if missing:
        raise PreconditionError("transport hypotheses unmet: " + "; ".join(missing), missing)

    values = {}
    strict = []
    witness = None
    w_t = t.weights
    for j in range(t.n):
        lhs = w_t[j] * sum((w_t[k] for k in iter_bits(t.G.rows[j])), ZERO)
        pre = phi.preimage(t.universe.singleton(j))
        rhs = product_charge_eval(s.charge, Relation.rectangle(pre, s.full()) & s.G)
        values[t.labels[j]] = (lhs, rhs)
        if lhs < rhs:
            strict.append(t.labels[j])
        if lhs > rhs and witness is None:
            witness = (t.labels[j],)
    if mode == "inclusion":
        return TransportReport(witness is None, mode, values, tuple(strict), witness)
    target_law = check_axiom_III(t)[2]
    holds = target_law.holds and witness is None and not strict
    w = witness or (target_law.witness if not target_law.holds else None)
    return TransportReport(holds, mode, values, tuple(strict), w)  # type: ignore[arg-type]
