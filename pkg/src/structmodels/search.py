"""Exhaustive enumeration over small universes.

This is the independent ground truth for the classification and the
sigma-additive constraints. Candidates are generated in a fixed canonical
order, and budgets are hard errors: a truncated enumeration would prove
nothing.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations, product
from typing import Iterable, Iterator, Sequence

from .axioms import check_admissible, check_equivalence_relation
from .classify import check_block_dichotomy, equivalence_classes
from .constructors import pad_fibers
from .core import Charge, Datum, Q, Relation, Retraction, Subset, Universe, product_charge_eval
from .errors import BudgetExceeded, DomainError

DEFAULT_BUDGET = 10**7
MAX_RELATION_N = 5
MAX_SEARCH_N = 4


def point_labels(n: int) -> tuple[str, ...]:
    return tuple(f"p{k}" for k in range(n))


def enumerate_axiomII_relations(n: int) -> list[Relation]:
    """All equivalence relations on ``n`` points, sorted by row masks.

    Up to ``n = 4`` every one of the ``2^(n^2)`` matrices is filtered; at
    ``n = 5`` only reflexive symmetric candidates are generated.
    """
    if not 1 <= n <= MAX_RELATION_N:
        raise BudgetExceeded(f"relation enumeration supports 1 <= n <= {MAX_RELATION_N}, got {n}")
    X = Universe(point_labels(n))
    out = []
    if n <= 4:
        full = (1 << n) - 1
        for code in range(1 << (n * n)):
            rows = tuple((code >> (i * n)) & full for i in range(n))
            G = Relation(X, rows)
            if check_equivalence_relation(G).holds:
                out.append(G)
    else:
        off = list(combinations(range(n), 2))
        for code in range(1 << len(off)):
            rows = [1 << i for i in range(n)]
            for k, (i, j) in enumerate(off):
                if code >> k & 1:
                    rows[i] |= 1 << j
                    rows[j] |= 1 << i
            G = Relation(X, tuple(rows))
            if check_equivalence_relation(G).holds:
                out.append(G)
    return sorted(out, key=lambda G: G.rows)


def all_relations(n: int) -> Iterator[Relation]:
    X = Universe(point_labels(n))
    full = (1 << n) - 1
    for code in range(1 << (n * n)):
        yield Relation(X, tuple((code >> (i * n)) & full for i in range(n)))


def weight_vectors(n: int, grid: Sequence) -> Iterator[tuple[Fraction, ...]]:
    values = sorted({Q(g) for g in grid})
    if any(v < 0 for v in values):
        raise DomainError("weight grid must be nonnegative")
    return product(values, repeat=n)


def shape(G: Relation) -> tuple[int, ...]:
    """Block sizes of an equivalence relation, largest first."""
    return tuple(sorted((len(C) for C in equivalence_classes(G).classes), reverse=True))


def identity_datum(G: Relation, weights: Sequence[Fraction], eta) -> Datum:
    X = G.universe
    return Datum(X, Charge(X, tuple(weights)), X.full(), X.empty(), Retraction.identity(X), G,
                 sum(weights, Fraction(0)), eta)


def _relations(n: int, relations: str) -> list[Relation]:
    if relations == "axiom_ii":
        return enumerate_axiomII_relations(n)
    if relations == "all":
        return list(all_relations(n))
    raise ValueError(f"unknown relation family {relations!r}")


def _guard_budget(count: int, budget: int) -> None:
    if count > budget:
        raise BudgetExceeded(f"{count} candidates exceed the budget of {budget}")


def iter_identity_data(n: int, eta, grid: Sequence, relations: str = "axiom_ii",
                       budget: int = DEFAULT_BUDGET) -> Iterator[Datum]:
    """Identity-retraction candidates with ``E0 = mu(X)``; null weight vectors are skipped."""
    if not 1 <= n <= MAX_SEARCH_N:
        raise BudgetExceeded(f"search supports 1 <= n <= {MAX_SEARCH_N}, got {n}")
    rels = _relations(n, relations)
    vectors = [w for w in weight_vectors(n, grid) if sum(w) > 0]
    _guard_budget(len(rels) * len(vectors), budget)
    for G in rels:
        for w in vectors:
            yield identity_datum(G, w, eta)


@dataclass
class SearchResult:
    n: int
    eta: Fraction
    grid: tuple[Fraction, ...]
    candidates: int = 0
    skipped_null: int = 0
    admissible: list[Datum] = field(default_factory=list)
    by_shape: Counter = field(default_factory=Counter)
    dichotomy_discrepancies: list[Datum] = field(default_factory=list)

    def summary(self) -> dict:
        return {
            "type": "summary",
            "n": self.n,
            "eta": str(self.eta),
            "grid": [str(g) for g in self.grid],
            "candidates": self.candidates,
            "skipped_null_mass": self.skipped_null,
            "admissible": len(self.admissible),
            "by_shape": {"+".join(map(str, k)): v for k, v in sorted(self.by_shape.items())},
            "dichotomy_discrepancies": len(self.dichotomy_discrepancies),
        }


def enumerate_admissible(n: int, eta, grid: Sequence, relations: str = "axiom_ii",
                         budget: int = DEFAULT_BUDGET) -> SearchResult:
    """Every admissible identity-retraction datum over the grid.

    Also cross-checks each candidate's admissibility against the block
    dichotomy; any disagreement is recorded.
    """
    eta = Q(eta)
    if eta >= 1:
        raise DomainError("search needs eta < 1")
    grid_q = tuple(sorted({Q(g) for g in grid}))
    result = SearchResult(n, eta, grid_q)
    for d in iter_identity_data(n, eta, grid_q, relations, budget):
        result.candidates += 1
        admissible = check_admissible(d).admissible
        if check_equivalence_relation(d.G).holds:
            if admissible != check_block_dichotomy(d).holds:
                result.dichotomy_discrepancies.append(d)
        if admissible:
            result.admissible.append(d)
            result.by_shape[shape(d.G)] += 1
    null_vectors = sum(1 for w in weight_vectors(n, grid_q) if sum(w) == 0)
    result.skipped_null = null_vectors * len(_relations(n, relations))
    return result


def idempotent_retractions(n: int) -> Iterator[tuple[int, tuple[int, ...]]]:
    """``(R mask, map)`` for every idempotent map of ``n`` points, canonical order."""
    for rmask in range(1, 1 << n):
        reps = [i for i in range(n) if rmask >> i & 1]
        others = [i for i in range(n) if not rmask >> i & 1]
        for images in product(reps, repeat=len(others)):
            mapping = list(range(n))
            for x, r in zip(others, images):
                mapping[x] = r
            yield rmask, tuple(mapping)


def iter_general_data(n: int, eta, grid: Sequence, budget: int = DEFAULT_BUDGET) -> Iterator[Datum]:
    """Data satisfying Axioms I and II with full partition and ``E0 = mu(X)``.

    Retractions range over all idempotent maps and relations over all
    equivalence relations; null weight vectors are skipped.
    """
    if not 1 <= n <= MAX_SEARCH_N:
        raise BudgetExceeded(f"search supports 1 <= n <= {MAX_SEARCH_N}, got {n}")
    rets = list(idempotent_retractions(n))
    rels = enumerate_axiomII_relations(n)
    vectors = [w for w in weight_vectors(n, grid) if sum(w) > 0]
    _guard_budget(len(rets) * len(rels) * len(vectors), budget)
    X = rels[0].universe
    for rmask, mapping in rets:
        R = Subset(X, rmask)
        ret = Retraction(X, R, mapping)
        for G in rels:
            for w in vectors:
                yield Datum(X, Charge(X, w), R, R.complement(), ret, G, sum(w, Fraction(0)), eta)


def fiber_padded_variants(core: Datum, max_extra: int = 2) -> Iterator[Datum]:
    """General-retraction variants of a core: null points added to one fiber at a time."""
    for r in core.R:
        label = core.labels[r]
        for extra in range(1, max_extra + 1):
            for join in (True, False):
                yield pad_fibers(core, {label: extra}, join=join)


@dataclass(frozen=True)
class ProbabilityScan:
    holds: bool
    data_checked: int
    admissible_positive_eta: tuple[Datum, ...]
    admissible_eta_zero: int
    eta_zero_bad_mass: tuple[Datum, ...]


def probability_eta_scan(n: int, grid: Sequence, etas: Iterable = (Fraction(1, 4), Fraction(1, 2))) -> ProbabilityScan:
    """No probability datum (``mu(X) = 1``) is admissible with ``eta > 0``.

    Grid vectors are normalized to total mass 1 (duplicates removed). Eta 0 is
    always scanned as well, checking ``mu2(G) = 1`` on its admissible hits.
    """
    if not 1 <= n <= MAX_SEARCH_N:
        raise BudgetExceeded(f"probability scan supports 1 <= n <= {MAX_SEARCH_N}, got {n}")
    eta_values = sorted({Q(e) for e in etas} | {Fraction(0)})
    if any(not 0 <= e < 1 for e in eta_values):
        raise DomainError("scan etas must lie in [0, 1)")
    vectors = sorted({tuple(x / sum(w) for x in w) for w in weight_vectors(n, grid) if sum(w) > 0})
    rels = enumerate_axiomII_relations(n)
    positive, bad = [], []
    eta0 = 0
    checked = 0
    for eta in eta_values:
        for G in rels:
            for w in vectors:
                d = identity_datum(G, w, eta)
                checked += 1
                if not check_admissible(d).admissible:
                    continue
                if eta > 0:
                    positive.append(d)
                else:
                    eta0 += 1
                    if product_charge_eval(d.charge, d.G) != 1:
                        bad.append(d)
    return ProbabilityScan(not positive and not bad, checked, tuple(positive), eta0, tuple(bad))


def oracle_fixed_point(d: Datum, B: Subset, steps: int) -> tuple[Fraction, Fraction]:
    """Bracket ``f*(B)`` by a Neumann partial sum and the same sum plus its tail.

    Iterated preimages are computed by literal repeated pullback, without
    using idempotence, so this path is independent of the closed form.
    """
    if d.eta >= 1:
        raise DomainError("the series needs eta < 1")
    if steps < 0:
        raise ValueError("steps must be nonnegative")
    partial = Fraction(0)
    current = B
    for k in range(steps + 1):
        partial += d.eta**k * d.mu(current)
        current = d.preimage(current)
    tail = d.eta ** (steps + 1) / (1 - d.eta) * d.mu(d.preimage(B))
    return partial, partial + tail
