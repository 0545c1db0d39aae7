"""Finite universes, subsets, atomic charges, relations, retractions and data.

Every scalar is a :class:`fractions.Fraction`. Subsets are integer bitmasks
over the point index, relations are tuples of row bitmasks, so set algebra is
plain integer arithmetic and equality is exact.

The algebra of measurable sets is always the full power set, and the product
charge is always the canonical atomic one, ``S -> sum m(x) m(y)`` over
``(x, y) in S``.
"""

from __future__ import annotations

from dataclasses import dataclass, replace as _replace
from fractions import Fraction
from functools import cached_property
from numbers import Rational
from typing import Iterable, Iterator, Mapping, Sequence

from .errors import StructuralError, UniverseMismatch

__all__ = [
    "Q",
    "Universe",
    "Subset",
    "Charge",
    "Relation",
    "Retraction",
    "Datum",
    "charge_eval",
    "product_charge_eval",
    "relation_compose",
    "retraction_preimage",
    "iter_bits",
]


def Q(value) -> Fraction:
    """Coerce ``value`` to an exact rational.

    Accepts ints, Fractions and strings such as ``"3/4"``. Floats are refused:
    they would smuggle binary rounding into identities that must hold exactly.
    """
    if isinstance(value, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(value, Fraction):
        return value
    if isinstance(value, (int, Rational)):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value.strip())
    raise TypeError(f"cannot use {type(value).__name__} {value!r} as an exact rational")


def iter_bits(mask: int) -> Iterator[int]:
    """Indices of set bits in ascending order."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def _same(a: "Universe", b: "Universe") -> None:
    if a is not b and a != b:
        raise UniverseMismatch(f"universe {a.labels} differs from {b.labels}")


@dataclass(frozen=True)
class Universe:
    labels: tuple[str, ...]

    def __post_init__(self):
        labels = tuple(self.labels)
        object.__setattr__(self, "labels", labels)
        if not labels:
            raise StructuralError("a universe needs at least one point", code="E_EMPTY")
        for lab in labels:
            if not isinstance(lab, str) or not lab:
                raise StructuralError(f"point labels must be non-empty strings, got {lab!r}")
        if len(set(labels)) != len(labels):
            dup = next(lab for lab in labels if labels.count(lab) > 1)
            raise StructuralError(f"duplicate point label {dup!r}", code="E_DUPLICATE")

    @property
    def n(self) -> int:
        return len(self.labels)

    @cached_property
    def _index(self) -> dict[str, int]:
        return {lab: i for i, lab in enumerate(self.labels)}

    @property
    def full_mask(self) -> int:
        return (1 << self.n) - 1

    def index(self, label: str) -> int:
        try:
            return self._index[label]
        except KeyError:
            raise StructuralError(f"unknown point {label!r}", code="E_UNKNOWN_POINT") from None

    def subset(self, labels: Iterable[str] = ()) -> "Subset":
        mask = 0
        for lab in labels:
            mask |= 1 << self.index(lab)
        return Subset(self, mask)

    def singleton(self, i: int) -> "Subset":
        return Subset(self, 1 << i)

    def empty(self) -> "Subset":
        return Subset(self, 0)

    def full(self) -> "Subset":
        return Subset(self, self.full_mask)

    def all_subsets(self) -> Iterator["Subset"]:
        for mask in range(1 << self.n):
            yield Subset(self, mask)


@dataclass(frozen=True)
class Subset:
    universe: Universe
    mask: int

    def __post_init__(self):
        if self.mask < 0 or self.mask > self.universe.full_mask:
            raise StructuralError(f"mask {self.mask} out of range for {self.universe.n} points")

    def __contains__(self, i: int) -> bool:
        return bool(self.mask >> i & 1)

    def __iter__(self) -> Iterator[int]:
        return iter_bits(self.mask)

    def __len__(self) -> int:
        return bin(self.mask).count("1")

    def __bool__(self) -> bool:
        return self.mask != 0

    def __or__(self, other: "Subset") -> "Subset":
        _same(self.universe, other.universe)
        return Subset(self.universe, self.mask | other.mask)

    def __and__(self, other: "Subset") -> "Subset":
        _same(self.universe, other.universe)
        return Subset(self.universe, self.mask & other.mask)

    def __sub__(self, other: "Subset") -> "Subset":
        _same(self.universe, other.universe)
        return Subset(self.universe, self.mask & ~other.mask)

    def complement(self) -> "Subset":
        return Subset(self.universe, self.universe.full_mask & ~self.mask)

    def issubset(self, other: "Subset") -> bool:
        _same(self.universe, other.universe)
        return self.mask & ~other.mask == 0

    def isdisjoint(self, other: "Subset") -> bool:
        _same(self.universe, other.universe)
        return self.mask & other.mask == 0

    def labels(self) -> tuple[str, ...]:
        return tuple(self.universe.labels[i] for i in self)

    def subsets(self) -> Iterator["Subset"]:
        """All subsets of this subset (the empty set first)."""
        sub = 0
        while True:
            yield Subset(self.universe, sub)
            if sub == self.mask:
                return
            sub = (sub - self.mask) & self.mask

    def __repr__(self) -> str:
        return "{" + ", ".join(self.labels()) + "}"


@dataclass(frozen=True)
class Charge:
    """Atomic finitely additive measure: ``mu(B) = sum of weights over B``."""

    universe: Universe
    weights: tuple[Fraction, ...]

    def __post_init__(self):
        weights = tuple(Q(w) for w in self.weights)
        object.__setattr__(self, "weights", weights)
        if len(weights) != self.universe.n:
            raise StructuralError(
                f"{len(weights)} weights for {self.universe.n} points", code="E_WEIGHTS"
            )
        for lab, w in zip(self.universe.labels, weights):
            if w < 0:
                raise StructuralError(f"negative weight {w} at {lab!r}", code="E_NEGATIVE_WEIGHT")

    def __call__(self, B: Subset) -> Fraction:
        return charge_eval(self, B)

    def total(self) -> Fraction:
        return sum(self.weights, Fraction(0))


@dataclass(frozen=True)
class Relation:
    """Binary relation as an n x n boolean matrix; row ``i`` is a bitmask."""

    universe: Universe
    rows: tuple[int, ...]

    def __post_init__(self):
        rows = tuple(self.rows)
        object.__setattr__(self, "rows", rows)
        if len(rows) != self.universe.n:
            raise StructuralError(f"{len(rows)} rows for {self.universe.n} points")
        full = self.universe.full_mask
        if any(r < 0 or r > full for r in rows):
            raise StructuralError("relation row out of range")

    @classmethod
    def from_pairs(cls, universe: Universe, pairs: Iterable[tuple[str, str]]) -> "Relation":
        rows = [0] * universe.n
        for x, y in pairs:
            rows[universe.index(x)] |= 1 << universe.index(y)
        return cls(universe, tuple(rows))

    @classmethod
    def from_index_pairs(cls, universe: Universe, pairs: Iterable[tuple[int, int]]) -> "Relation":
        rows = [0] * universe.n
        for i, j in pairs:
            rows[i] |= 1 << j
        return cls(universe, tuple(rows))

    @classmethod
    def diagonal(cls, universe: Universe) -> "Relation":
        return cls(universe, tuple(1 << i for i in range(universe.n)))

    @classmethod
    def total(cls, universe: Universe) -> "Relation":
        return cls(universe, (universe.full_mask,) * universe.n)

    @classmethod
    def rectangle(cls, A: Subset, B: Subset) -> "Relation":
        _same(A.universe, B.universe)
        return cls(A.universe, tuple(B.mask if i in A else 0 for i in range(A.universe.n)))

    @classmethod
    def blocks(cls, universe: Universe, classes: Iterable[Subset]) -> "Relation":
        """Union of ``C x C`` over the given classes."""
        rows = [0] * universe.n
        for C in classes:
            _same(universe, C.universe)
            for i in C:
                rows[i] |= C.mask
        return cls(universe, tuple(rows))

    def __contains__(self, pair: tuple[int, int]) -> bool:
        i, j = pair
        return bool(self.rows[i] >> j & 1)

    def __or__(self, other: "Relation") -> "Relation":
        _same(self.universe, other.universe)
        return Relation(self.universe, tuple(a | b for a, b in zip(self.rows, other.rows)))

    def __and__(self, other: "Relation") -> "Relation":
        _same(self.universe, other.universe)
        return Relation(self.universe, tuple(a & b for a, b in zip(self.rows, other.rows)))

    def __sub__(self, other: "Relation") -> "Relation":
        _same(self.universe, other.universe)
        return Relation(self.universe, tuple(a & ~b for a, b in zip(self.rows, other.rows)))

    def __xor__(self, other: "Relation") -> "Relation":
        _same(self.universe, other.universe)
        return Relation(self.universe, tuple(a ^ b for a, b in zip(self.rows, other.rows)))

    def __le__(self, other: "Relation") -> bool:
        _same(self.universe, other.universe)
        return all(a & ~b == 0 for a, b in zip(self.rows, other.rows))

    def transpose(self) -> "Relation":
        n = self.universe.n
        cols = [0] * n
        for i, row in enumerate(self.rows):
            for j in iter_bits(row):
                cols[j] |= 1 << i
        return Relation(self.universe, tuple(cols))

    def index_pairs(self) -> Iterator[tuple[int, int]]:
        for i, row in enumerate(self.rows):
            for j in iter_bits(row):
                yield i, j

    def pairs(self) -> list[tuple[str, str]]:
        labels = self.universe.labels
        return [(labels[i], labels[j]) for i, j in self.index_pairs()]

    def __len__(self) -> int:
        return sum(bin(r).count("1") for r in self.rows)

    def row(self, i: int) -> Subset:
        return Subset(self.universe, self.rows[i])


@dataclass(frozen=True)
class Retraction:
    """A total map ``X -> R``. Idempotence is not enforced here (that is Axiom I)."""

    universe: Universe
    target: Subset
    mapping: tuple[int, ...]

    def __post_init__(self):
        mapping = tuple(self.mapping)
        object.__setattr__(self, "mapping", mapping)
        _same(self.universe, self.target.universe)
        if len(mapping) != self.universe.n:
            raise StructuralError("retraction must be total on the universe", code="E_PI_TOTAL")
        for i, j in enumerate(mapping):
            if not 0 <= j < self.universe.n:
                raise StructuralError(f"retraction image index {j} out of range", code="E_PI_RANGE")
            if j not in self.target:
                raise StructuralError(
                    f"retraction sends {self.universe.labels[i]!r} to "
                    f"{self.universe.labels[j]!r}, which is not in R",
                    code="E_PI_RANGE",
                )

    @classmethod
    def from_labels(cls, universe: Universe, target: Subset, mapping: Mapping[str, str]) -> "Retraction":
        missing = [lab for lab in universe.labels if lab not in mapping]
        if missing:
            raise StructuralError(f"retraction undefined at {missing[0]!r}", code="E_PI_TOTAL")
        return cls(universe, target, tuple(universe.index(mapping[lab]) for lab in universe.labels))

    @classmethod
    def identity(cls, universe: Universe) -> "Retraction":
        return cls(universe, universe.full(), tuple(range(universe.n)))

    def __call__(self, i: int) -> int:
        return self.mapping[i]

    def is_identity(self) -> bool:
        return all(i == j for i, j in enumerate(self.mapping))


@dataclass(frozen=True)
class Datum:
    """A pre-structural datum over a finite universe with the power-set algebra."""

    universe: Universe
    charge: Charge
    R: Subset
    I: Subset
    retraction: Retraction
    G: Relation
    E0: Fraction
    eta: Fraction

    def __post_init__(self):
        object.__setattr__(self, "E0", Q(self.E0))
        object.__setattr__(self, "eta", Q(self.eta))
        for part in (self.charge, self.R, self.I, self.retraction, self.G):
            _same(self.universe, part.universe)
        if self.retraction.target != self.R:
            raise StructuralError("the retraction's target must be R", code="E_PI_RANGE")
        if not self.R.isdisjoint(self.I):
            shared = (self.R & self.I).labels()
            raise StructuralError(f"R and I share the point {shared[0]!r}", code="E_OVERLAP_RI")
        if self.E0 <= 0:
            raise StructuralError(f"E0 must be positive, got {self.E0}", code="E_E0_RANGE")
        if not 0 <= self.eta <= 1:
            raise StructuralError(f"eta out of range [0, 1]: {self.eta}", code="E_ETA_RANGE")

    @classmethod
    def from_labels(
        cls,
        points: Sequence[str],
        weights: Mapping[str, object] | Sequence[object],
        R: Iterable[str],
        I: Iterable[str],
        pi: Mapping[str, str],
        G: Iterable[tuple[str, str]],
        E0,
        eta,
    ) -> "Datum":
        X = Universe(tuple(points))
        if isinstance(weights, Mapping):
            missing = [p for p in X.labels if p not in weights]
            if missing:
                raise StructuralError(f"no weight for {missing[0]!r}", code="E_WEIGHTS")
            extra = [p for p in weights if p not in X._index]
            if extra:
                raise StructuralError(f"weight for unknown point {extra[0]!r}", code="E_UNKNOWN_POINT")
            wts = tuple(Q(weights[p]) for p in X.labels)
        else:
            wts = tuple(Q(w) for w in weights)
        Rs = X.subset(R)
        return cls(
            universe=X,
            charge=Charge(X, wts),
            R=Rs,
            I=X.subset(I),
            retraction=Retraction.from_labels(X, Rs, pi),
            G=Relation.from_pairs(X, G),
            E0=Q(E0),
            eta=Q(eta),
        )

    @property
    def n(self) -> int:
        return self.universe.n

    @property
    def labels(self) -> tuple[str, ...]:
        return self.universe.labels

    @property
    def weights(self) -> tuple[Fraction, ...]:
        return self.charge.weights

    @property
    def pi(self) -> tuple[int, ...]:
        return self.retraction.mapping

    def mu(self, B: Subset) -> Fraction:
        return charge_eval(self.charge, B)

    def preimage(self, B: Subset) -> Subset:
        return retraction_preimage(self.retraction, B)

    def full(self) -> Subset:
        return self.universe.full()

    def is_identity_retraction(self) -> bool:
        return self.retraction.is_identity()

    def replace(self, **changes) -> "Datum":
        return _replace(self, **changes)


def charge_eval(c: Charge, B: Subset) -> Fraction:
    _same(c.universe, B.universe)
    w = c.weights
    return sum((w[i] for i in B), Fraction(0))


def product_charge_eval(c: Charge, S: Relation) -> Fraction:
    """Canonical atomic product charge of a set of pairs."""
    _same(c.universe, S.universe)
    w = c.weights
    total = Fraction(0)
    for i, row in enumerate(S.rows):
        if row and w[i]:
            total += w[i] * sum((w[j] for j in iter_bits(row)), Fraction(0))
    return total


def relation_compose(H: Relation, K: Relation) -> Relation:
    """``H o K = {(x, z) : exists y with (x, y) in H and (y, z) in K}``."""
    _same(H.universe, K.universe)
    rows = []
    for row in H.rows:
        acc = 0
        for j in iter_bits(row):
            acc |= K.rows[j]
        rows.append(acc)
    return Relation(H.universe, tuple(rows))


def retraction_preimage(p: Retraction, B: Subset) -> Subset:
    _same(p.universe, B.universe)
    mask = 0
    for i, j in enumerate(p.mapping):
        if j in B:
            mask |= 1 << i
    return Subset(p.universe, mask)
