"""G-classes and the blockwise normalization law for identity-retraction data."""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction

from .axioms import check_axiom_II, check_equivalence_relation
from .core import Datum, Relation, Subset, Universe, _same, product_charge_eval
from .coupling import curvature_load
from .errors import DomainError, PreconditionError

# Finite index sets make the summability hypothesis automatic.
SUMMABILITY = "K-fin"


@dataclass(frozen=True)
class BlockDecomposition:
    universe: Universe
    classes: tuple[Subset, ...]
    masses: tuple[Fraction, ...] | None = None

    def __len__(self) -> int:
        return len(self.classes)

    def relation(self) -> Relation:
        return Relation.blocks(self.universe, self.classes)

    def class_of(self, i: int) -> Subset:
        return next(C for C in self.classes if i in C)

    def with_masses(self, d: Datum) -> "BlockDecomposition":
        return BlockDecomposition(self.universe, self.classes, tuple(d.mu(C) for C in self.classes))

    def to_dict(self) -> dict:
        out = []
        for k, C in enumerate(self.classes):
            entry: dict = {"points": list(C.labels())}
            if self.masses is not None:
                entry["mass"] = str(self.masses[k])
            out.append(entry)
        return {"classes": out}


def _find(parent: list[int], i: int) -> int:
    while parent[i] != i:
        parent[i] = parent[parent[i]]
        i = parent[i]
    return i


def equivalence_classes(G: Relation) -> BlockDecomposition:
    """Classes of an equivalence relation, ordered by their smallest member."""
    verdict = check_equivalence_relation(G)
    if not verdict.holds:
        raise PreconditionError(f"G is not an equivalence relation (pair {verdict.witness})", ["Axiom II"])
    n = G.universe.n
    parent = list(range(n))
    for i, j in G.index_pairs():
        a, b = _find(parent, i), _find(parent, j)
        if a != b:
            parent[max(a, b)] = min(a, b)
    masks: dict[int, int] = {}
    for i in range(n):
        root = _find(parent, i)
        masks[root] = masks.get(root, 0) | 1 << i
    classes = tuple(Subset(G.universe, masks[r]) for r in sorted(masks))
    decomposition = BlockDecomposition(G.universe, classes)
    if decomposition.relation() != G:
        raise ArithmeticError("class reconstruction does not reproduce G")
    return decomposition


def _require_identity_core(d: Datum) -> None:
    missing = []
    if not d.is_identity_retraction():
        missing.append("identity retraction")
    if not check_axiom_II(d).holds:
        missing.append("Axiom II")
    if missing:
        raise PreconditionError("block formula needs " + " and ".join(missing), missing)


def block_curvature_load(d: Datum, B: Subset) -> Fraction:
    """``sum_k mu(B & C_k) mu(C_k)``."""
    _same(d.universe, B.universe)
    _require_identity_core(d)
    blocks = equivalence_classes(d.G)
    return sum((d.mu(B & C) * d.mu(C) for C in blocks.classes), Fraction(0))


@dataclass(frozen=True)
class ClassEntry:
    points: tuple[str, ...]
    mass: Fraction
    branch: str  # "null", "normalized" or "violating"


@dataclass(frozen=True)
class DichotomyReport:
    holds: bool
    target: Fraction
    classes: tuple[ClassEntry, ...]
    witness: tuple[str, ...] | None = None
    summability: str = SUMMABILITY

    def __bool__(self) -> bool:
        return self.holds

    def to_dict(self) -> dict:
        out = {
            "holds": self.holds,
            "target_mass": str(self.target),
            "summability": self.summability,
            "classes": [
                {"points": list(c.points), "mass": str(c.mass), "branch": c.branch} for c in self.classes
            ],
        }
        if self.witness is not None:
            out["witness"] = list(self.witness)
        return out


def _require_eta(d: Datum) -> None:
    if d.eta >= 1:
        raise DomainError("eta = 1 would force infinite class masses")


def check_block_dichotomy(d: Datum) -> DichotomyReport:
    """Every class has mass 0 or ``1/(1-eta)``."""
    _require_eta(d)
    _require_identity_core(d)
    target = 1 / (1 - d.eta)
    entries = []
    witness = None
    for C in equivalence_classes(d.G).classes:
        mass = d.mu(C)
        branch = "null" if mass == 0 else "normalized" if mass == target else "violating"
        if branch == "violating" and witness is None:
            witness = C.labels()
        entries.append(ClassEntry(C.labels(), mass, branch))
    return DichotomyReport(witness is None, target, tuple(entries), witness)


@dataclass(frozen=True)
class TotalMassSummary:
    class_count: int
    mass_X: Fraction
    mass_G: Fraction
    subsets_checked: int


def total_mass_summary(d: Datum, samples: int = 32, seed: int = 0) -> TotalMassSummary:
    """``mu(X) = m/(1-eta)`` and ``mu2(G) = m/(1-eta)^2`` when all ``m`` classes are positive.

    Also confirms the load ``mu(B)/(1-eta)`` on ``samples`` seeded random subsets.
    """
    report = check_block_dichotomy(d)
    missing = []
    if any(c.mass == 0 for c in report.classes):
        missing.append("all classes positive")
    if not report.holds:
        missing.append("block dichotomy")
    if missing:
        raise PreconditionError("total-mass summary needs " + " and ".join(missing), missing)
    m = len(report.classes)
    scale = 1 / (1 - d.eta)
    mass_X = d.mu(d.full())
    mass_G = product_charge_eval(d.charge, d.G)
    if mass_X != m * scale or mass_G != m * scale * scale:
        raise ArithmeticError(f"totals {mass_X}, {mass_G} disagree with the closed forms")
    rng = random.Random(seed)
    for _ in range(samples):
        B = Subset(d.universe, rng.getrandbits(d.n))
        if curvature_load(d, B) != scale * d.mu(B):
            raise ArithmeticError(f"load on {B} differs from mu(B)/(1-eta)")
    return TotalMassSummary(m, mass_X, mass_G, samples)
