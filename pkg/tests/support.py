"""Shared data suites and hypothesis strategies for the test modules."""

from __future__ import annotations

from fractions import Fraction as F
from functools import lru_cache

from hypothesis import strategies as st

from structmodels.axioms import check_admissible
from structmodels.constructors import (
    block_family_model,
    class_model,
    collapse_map,
    countable_truncation,
    diagonal_finite_model,
    eta_model,
    fiber_mass_example,
    pad_fibers,
    total_relation_model,
)
from structmodels.core import Charge, Datum, Relation, Retraction, Subset, Universe
from structmodels.morphisms import Morphism
from structmodels.search import enumerate_admissible, fiber_padded_variants

ETA_GRID = (F(0), F(1, 3), F(1, 2), F(2, 3), F(9, 10))
WEIGHT_GRID = (F(0), F(1, 2), F(1), F(2))


def family_suite() -> list[tuple[str, Datum]]:
    """Every canonical family over the eta grid and a spread of parameters."""
    out: list[tuple[str, Datum]] = []
    for nR, nI, w in [(1, 0, (1,)), (1, 2, (1,)), (2, 1, (1, 0)), (3, 2, (1, 1, 0)), (4, 0, (0, 1, 1, 1))]:
        out.append((f"diagonal{nR}/{nI}", diagonal_finite_model(nR, nI, w)))
    for eta in ETA_GRID:
        t = 1 / (1 - eta)
        out.append((f"eta@{eta}", eta_model(eta)))
        out.append((f"total@{eta}", total_relation_model(eta)))
        out.append((f"blocks@{eta}", block_family_model([2, 1], [[t / 3, 2 * t / 3], [t]], eta)))
        out.append((f"blocks3@{eta}", block_family_model([1, 3], [t, 0, t / 2, t / 2], eta)))
        out.append((f"class@{eta}", class_model([2, 3, 1], [1, 0, 1], eta)))
    for extra in (0, 1, 3):
        out.append((f"trunc+{extra}", countable_truncation(diagonal_finite_model(2, 1, (1, 1)), extra)))
        out.append((f"trunc-class+{extra}", countable_truncation(class_model([2, 2], [1, 1]), extra)))
    return out


@lru_cache(maxsize=None)
def searched_admissible(n: int, eta: F) -> tuple[Datum, ...]:
    return tuple(enumerate_admissible(n, eta, WEIGHT_GRID).admissible)


def identity_cores() -> list[Datum]:
    cores = [d for _, d in family_suite() if d.is_identity_retraction()]
    for n in (1, 2):
        for eta in (F(0), F(1, 2)):
            cores.extend(searched_admissible(n, eta))
    return cores


def padded_suite(limit_per_core: int = 2) -> list[Datum]:
    out = []
    for core in identity_cores():
        out.extend(fiber_padded_variants(core, max_extra=limit_per_core))
    return out


def admissible_suite() -> list[Datum]:
    """Every admissible datum the suites produce, across all generators."""
    data = [d for _, d in family_suite()]
    for n in (1, 2, 3):
        for eta in (F(0), F(1, 2)):
            data.extend(searched_admissible(n, eta))
    data.extend(padded_suite(1))
    data.append(fiber_mass_example(0))
    return [d for d in data if check_admissible(d).admissible]


def collapse_morphisms() -> list[Morphism]:
    """Maps collapsing padded fibers back onto their representatives."""
    out = []
    for core in identity_cores()[:12]:
        for r in core.R.labels():
            padded = pad_fibers(core, {r: 2}, join=True)
            out.append(Morphism.from_labels(padded, core, collapse_map(padded, core)))
    return out


# -- hypothesis strategies --------------------------------------------------

rationals = st.fractions(min_value=0, max_value=4, max_denominator=6)
etas = st.sampled_from((F(0), F(1, 4), F(1, 3), F(1, 2), F(2, 3), F(3, 4)))


@st.composite
def universes(draw, min_n: int = 1, max_n: int = 6) -> Universe:
    n = draw(st.integers(min_n, max_n))
    return Universe(tuple(f"x{k}" for k in range(n)))


@st.composite
def subsets(draw, X: Universe) -> Subset:
    return Subset(X, draw(st.integers(0, X.full_mask)))


@st.composite
def relations(draw, X: Universe) -> Relation:
    return Relation(X, tuple(draw(st.integers(0, X.full_mask)) for _ in range(X.n)))


@st.composite
def partitions(draw, X: Universe) -> list[Subset]:
    labels = draw(st.lists(st.integers(0, X.n - 1), min_size=X.n, max_size=X.n))
    blocks: dict[int, int] = {}
    for i, b in enumerate(labels):
        blocks[b] = blocks.get(b, 0) | 1 << i
    return [Subset(X, m) for m in blocks.values()]


@st.composite
def retractions(draw, X: Universe) -> Retraction:
    rmask = draw(st.integers(1, X.full_mask))
    R = Subset(X, rmask)
    reps = list(R)
    mapping = tuple(i if i in R else draw(st.sampled_from(reps)) for i in range(X.n))
    return Retraction(X, R, mapping)


@st.composite
def data(draw, max_n: int = 6, equivalence: bool = True) -> Datum:
    """Arbitrary pre-structural data; ``G`` an equivalence relation when asked."""
    X = draw(universes(max_n=max_n))
    w = tuple(draw(rationals) for _ in range(X.n))
    if sum(w) == 0:
        w = (F(1),) + w[1:]
    ret = draw(retractions(X))
    G = Relation.blocks(X, draw(partitions(X))) if equivalence else draw(relations(X))
    eta = draw(etas)
    return Datum(X, Charge(X, w), ret.target, ret.target.complement(), ret, G, sum(w), eta)


@st.composite
def admissible_cores(draw, max_blocks: int = 4) -> Datum:
    """Identity-retraction admissible data built block by block."""
    eta = draw(etas)
    t = 1 / (1 - eta)
    sizes = draw(st.lists(st.integers(1, 3), min_size=1, max_size=max_blocks))
    blocks = []
    for s in sizes:
        if draw(st.booleans()):
            cuts = sorted(draw(st.lists(st.fractions(0, 1, max_denominator=4), min_size=s - 1, max_size=s - 1)))
            pts = [F(0)] + cuts + [F(1)]
            blocks.append([t * (b - a) for a, b in zip(pts, pts[1:])])
        else:
            blocks.append([F(0)] * s)
    if not any(any(b) for b in blocks):
        blocks[0] = [t] + [F(0)] * (sizes[0] - 1)
    return _blocks_datum(blocks, eta)


def _blocks_datum(blocks: list[list[F]], eta: F) -> Datum:
    labels, weights, classes = [], [], []
    for k, ws in enumerate(blocks):
        start = len(labels)
        labels.extend(f"c{k}_{j}" for j in range(len(ws)))
        weights.extend(ws)
        classes.append(((1 << len(ws)) - 1) << start)
    X = Universe(tuple(labels))
    G = Relation.blocks(X, [Subset(X, c) for c in classes])
    return Datum(X, Charge(X, tuple(weights)), X.full(), X.empty(), Retraction.identity(X), G,
                 sum(weights), eta)
