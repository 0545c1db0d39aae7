"""Fibers of the retraction, restriction to the core, and quotient factorization.

The core of a datum lives on ``R`` with the identity retraction, the relation
``G & (R x R)`` and scalar ``mu(R)``. Restriction is defined for every datum
with ``mu(R) > 0``; the axiom hypotheses only enter the factorization checks.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .axioms import check_admissible, check_axiom_I, check_axiom_III, require
from .classify import check_block_dichotomy, equivalence_classes
from .core import Charge, Datum, Relation, Retraction, Subset, Universe, iter_bits
from .coupling import curvature_load
from .errors import DomainError, PreconditionError, StructuralError
from .morphisms import Morphism, check_morphism

# R is finite, so fiber annihilation uses finite additivity only.
REGULARITY = "R-fin"


def fibers(d: Datum) -> dict[int, Subset]:
    """``F_r = Pi^{-1}({r})`` for each ``r`` in ``R``."""
    require(d, "I")
    masks = {r: 0 for r in d.R}
    for x, r in enumerate(d.pi):
        masks[r] |= 1 << x
    return {r: Subset(d.universe, m) for r, m in masks.items()}


def fibers_by_label(d: Datum) -> dict[str, tuple[str, ...]]:
    return {d.labels[r]: F.labels() for r, F in fibers(d).items()}


@dataclass(frozen=True)
class FiberReport:
    holds: bool
    off_representative: dict[str, Fraction]
    mass_off_R: Fraction
    III_b_holds: bool
    witness: tuple[str, ...] | None = None
    witness_fiber: str | None = None
    regularity: str = REGULARITY

    def __bool__(self) -> bool:
        return self.holds


def check_fiber_annihilation(d: Datum) -> FiberReport:
    """``mu(F_r - {r}) = 0`` for each ``r`` and ``mu(X - R) = 0``.

    Only Axiom I is required, so that data failing invariance can be
    inspected; whether III(b) holds is recorded in the report.
    """
    F = fibers(d)
    masses = {}
    witness = None
    witness_fiber = None
    for r, Fr in F.items():
        rest = Fr - d.universe.singleton(r)
        mass = d.mu(rest)
        masses[d.labels[r]] = mass
        if mass != 0 and witness is None:
            witness, witness_fiber = rest.labels(), d.labels[r]
    off_R = d.mu(d.full() - d.R)
    III_b = check_axiom_III(d)[1].holds
    return FiberReport(witness is None and off_R == 0, masses, off_R, III_b, witness, witness_fiber)


def core_positions(d: Datum) -> tuple[int, ...]:
    """Source indices of the core's points, in order."""
    return tuple(d.R)


def restrict(d: Datum) -> Datum:
    """The identity-retraction core on ``R``."""
    if not d.R:
        raise StructuralError("cannot restrict: R is empty", code="E_EMPTY")
    pos = core_positions(d)
    mass_R = d.mu(d.R)
    if mass_R <= 0:
        raise StructuralError("cannot restrict: mu(R) = 0 leaves no positive scalar", code="E_E0_RANGE")
    X = Universe(tuple(d.labels[i] for i in pos))
    local = {i: k for k, i in enumerate(pos)}
    rows = []
    for i in pos:
        row = 0
        for j in iter_bits(d.G.rows[i] & d.R.mask):
            row |= 1 << local[j]
        rows.append(row)
    return Datum(
        universe=X,
        charge=Charge(X, tuple(d.weights[i] for i in pos)),
        R=X.full(),
        I=X.empty(),
        retraction=Retraction.identity(X),
        G=Relation(X, tuple(rows)),
        E0=mass_R,
        eta=d.eta,
    )


def to_core_subset(d: Datum, core: Datum, B: Subset) -> Subset:
    """``B & R`` re-indexed into the core's universe."""
    return Subset(core.universe, sum(1 << k for k, i in enumerate(core_positions(d)) if i in B))


@dataclass(frozen=True)
class FactorPart:
    applicable: bool
    holds: bool | None
    missing: tuple[str, ...] = ()
    note: str = ""

    def to_dict(self) -> dict:
        out: dict = {"applicable": self.applicable, "holds": self.holds}
        if self.missing:
            out["missing"] = list(self.missing)
        if self.note:
            out["note"] = self.note
        return out


@dataclass(frozen=True)
class FactorizationReport:
    load_reduces: FactorPart
    coupling_equivalent: FactorPart
    admissibility_reduces: FactorPart
    details: dict = field(default_factory=dict)

    @property
    def parts(self) -> tuple[FactorPart, FactorPart, FactorPart]:
        return self.load_reduces, self.coupling_equivalent, self.admissibility_reduces

    @property
    def all_hold(self) -> bool:
        return all(p.applicable and p.holds for p in self.parts)

    def to_dict(self) -> dict:
        return {
            "load_reduces": self.load_reduces.to_dict(),
            "coupling_equivalent": self.coupling_equivalent.to_dict(),
            "admissibility_reduces": self.admissibility_reduces.to_dict(),
        }


def check_factorization(d: Datum) -> FactorizationReport:
    """The three reduction statements, each guarded by its own hypotheses.

    A part whose hypotheses fail is reported as not applicable, with the
    missing hypotheses named; nothing is raised except for ``eta = 1``.
    """
    if d.eta >= 1:
        raise DomainError("factorization needs eta < 1")
    report = check_admissible(d)
    v = report.verdicts()
    base_missing = [f"Axiom {k}" for k in ("I", "III_b") if not v[k].holds]
    try:
        core = restrict(d)
    except StructuralError:
        core = None
        base_missing.append("mu(R) > 0")

    if base_missing:
        part_i = FactorPart(False, None, tuple(base_missing))
        part_ii = FactorPart(False, None, tuple(base_missing))
    else:
        assert core is not None
        ok = d.mu(d.full() - d.R) == 0 and all(
            curvature_load(d, d.universe.singleton(x))
            == curvature_load(core, to_core_subset(d, core, d.universe.singleton(x)))
            for x in range(d.n)
        )
        part_i = FactorPart(True, ok)
        part_ii = FactorPart(True, v["III_c"].holds == check_axiom_III(core)[2].holds)

    missing_iii = [f"Axiom {k}" for k in ("I", "II", "III_a", "III_b") if not v[k].holds]
    if (d.R | d.I) != d.full():
        missing_iii.append("X = R + I")
    if core is None and "mu(R) > 0" not in missing_iii:
        missing_iii.append("mu(R) > 0")
    core_admissible = check_admissible(core).admissible if core is not None else None
    if missing_iii:
        note = ""
        if missing_iii == ["Axiom III_b"] and v["III_c"].holds and core_admissible:
            note = ("III(b) cannot be dropped here: the core is admissible "
                    "while the datum itself is not")
        part_iii = FactorPart(False, None, tuple(missing_iii), note)
    else:
        part_iii = FactorPart(True, report.admissible == core_admissible)

    details = {"datum_admissible": report.admissible, "core_admissible": core_admissible}
    return FactorizationReport(part_i, part_ii, part_iii, details)


def restrict_morphism(phi: Morphism) -> Morphism:
    """``phi|_R`` between the cores of source and target."""
    missing = []
    for side, d in (("source", phi.source), ("target", phi.target)):
        v = check_admissible(d).verdicts()
        missing.extend(f"{side} Axiom {k}" for k in ("I", "III_b") if not v[k].holds)
    if not check_morphism(phi).holds:
        missing.append("phi is a morphism")
    if missing:
        raise PreconditionError("restriction needs " + ", ".join(missing), missing)
    src, tgt = restrict(phi.source), restrict(phi.target)
    target_local = {i: k for k, i in enumerate(core_positions(phi.target))}
    mapping = []
    for r in core_positions(phi.source):
        image = phi.mapping[r]
        if image not in target_local:
            raise PreconditionError("phi sends R outside R'", ["phi(R) in R'"])
        mapping.append(target_local[image])
    return Morphism(src, tgt, tuple(mapping))


def curvature_load_closed_form(d: Datum, B: Subset) -> Fraction:
    """Load via the blocks of the core: ``sum_k mu(B_R & C_k) mu(C_k)``.

    Raises ``ArithmeticError`` if the value disagrees with the direct load or a
    core class breaks the dichotomy.
    """
    if d.eta >= 1:
        raise DomainError("closed form needs eta < 1")
    require(d, "admissible")
    core = restrict(d)
    dichotomy = check_block_dichotomy(core)
    if not dichotomy.holds:
        raise ArithmeticError(f"core class {dichotomy.witness} breaks the dichotomy")
    BR = to_core_subset(d, core, B)
    value = sum((core.mu(BR & C) * core.mu(C) for C in equivalence_classes(core.G).classes), Fraction(0))
    direct = curvature_load(d, B)
    if value != direct:
        raise ArithmeticError(f"closed form {value} differs from the load {direct}")
    return value


def is_fiber_model(d: Datum) -> bool:
    return check_axiom_I(d).holds and check_axiom_III(d)[1].holds
