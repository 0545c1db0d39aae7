"""Canonical model families and the separating counterexamples.

Every family except the separating models validates its parameters eagerly
and returns an admissible datum. The separating models are the only
deliberately inadmissible outputs; each comes with its expected verdicts.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Mapping, Sequence

from .axioms import check_admissible
from .core import Charge, Datum, Q, Relation, Retraction, Subset, Universe
from .errors import DomainError, PreconditionError, StructuralError

VERDICT_KEYS = ("I", "II", "III_a", "III_b", "III_c")
SEPARATING_KINDS = ("notI", "notII", "notIII", "not_a", "not_b", "not_c")


def _check_flags(flags: Sequence[int], what: str) -> tuple[Fraction, ...]:
    out = []
    for f in flags:
        if f not in (0, 1) or isinstance(f, bool):
            raise StructuralError(f"{what} must be 0/1 flags, got {f!r}", code="E_WEIGHTS")
        out.append(Fraction(f))
    if not any(out):
        raise StructuralError(f"{what} must contain at least one 1", code="E_WEIGHTS")
    return tuple(out)


def _eta_below_one(eta) -> Fraction:
    eta = Q(eta)
    if not 0 <= eta < 1:
        raise DomainError(f"eta must lie in [0, 1), got {eta}")
    return eta


def infer_E0(d: Datum) -> Datum:
    """Copy of ``d`` with ``E0 := mu(R) + mu(I)``; needs that sum to be positive."""
    return d.replace(E0=d.mu(d.R) + d.mu(d.I))


def diagonal_finite_model(nR: int, nI: int, weights01: Sequence[int]) -> Datum:
    """Diagonal relation, every hidden point sent to ``r0``, 0/1 weights on ``R``, eta = 0."""
    if nR < 1 or nI < 0:
        raise StructuralError("need nR >= 1 and nI >= 0")
    if len(weights01) != nR:
        raise StructuralError(f"{len(weights01)} weights for {nR} representatives", code="E_WEIGHTS")
    w = _check_flags(weights01, "weights on R")
    labels = tuple(f"r{k}" for k in range(nR)) + tuple(f"i{k}" for k in range(nI))
    X = Universe(labels)
    R = Subset(X, (1 << nR) - 1)
    return Datum(
        universe=X,
        charge=Charge(X, w + (Fraction(0),) * nI),
        R=R,
        I=R.complement(),
        retraction=Retraction(X, R, tuple(range(nR)) + (0,) * nI),
        G=Relation.diagonal(X),
        E0=sum(w),
        eta=0,
    )


def eta_model(eta) -> Datum:
    """``X = {r0, r1, i}``, diagonal relation, ``m(r0) = m(r1) = 1/(1-eta)``."""
    eta = _eta_below_one(eta)
    m = 1 / (1 - eta)
    return Datum.from_labels(
        ["r0", "r1", "i"],
        [m, m, 0],
        R=["r0", "r1"],
        I=["i"],
        pi={"r0": "r0", "r1": "r1", "i": "r0"},
        G=[("r0", "r0"), ("r1", "r1"), ("i", "i")],
        E0=2 * m,
        eta=eta,
    )


def total_relation_model(eta) -> Datum:
    """``X = {r0, r1}``, total relation, ``m = 1/(2(1-eta))`` on each point."""
    eta = _eta_below_one(eta)
    m = 1 / (2 * (1 - eta))
    X = Universe(("r0", "r1"))
    return Datum(X, Charge(X, (m, m)), X.full(), X.empty(), Retraction.identity(X),
                 Relation.total(X), 1 / (1 - eta), eta)


def block_family_model(block_sizes: Sequence[int], within_block_weights, eta) -> Datum:
    """Identity retraction, ``G`` a union of blocks, every block of mass ``1/(1-eta)``.

    ``within_block_weights`` is one weight sequence per block, or one flat
    sequence covering all points. Points are labelled ``c{k}_{j}``.
    """
    eta = _eta_below_one(eta)
    if not block_sizes or any(s < 1 for s in block_sizes):
        raise StructuralError("block sizes must be positive")
    nested = [list(ws) for ws in within_block_weights] if _is_nested(within_block_weights) else None
    if nested is None:
        flat = list(within_block_weights)
        if len(flat) != sum(block_sizes):
            raise StructuralError("weight count does not match the block sizes", code="E_WEIGHTS")
        nested, start = [], 0
        for s in block_sizes:
            nested.append(flat[start:start + s])
            start += s
    if len(nested) != len(block_sizes) or any(len(ws) != s for ws, s in zip(nested, block_sizes)):
        raise StructuralError("weight shape does not match the block sizes", code="E_WEIGHTS")
    target = 1 / (1 - eta)
    labels, weights, classes = [], [], []
    for k, ws in enumerate(nested):
        ws = [Q(w) for w in ws]
        if sum(ws) != target:
            raise StructuralError(f"block {k} has mass {sum(ws)}, expected {target}", code="E_BLOCK_MASS")
        start = len(labels)
        labels.extend(f"c{k}_{j}" for j in range(len(ws)))
        weights.extend(ws)
        classes.append(((1 << len(ws)) - 1) << start)
    X = Universe(tuple(labels))
    G = Relation.blocks(X, [Subset(X, c) for c in classes])
    return Datum(X, Charge(X, tuple(weights)), X.full(), X.empty(), Retraction.identity(X), G,
                 sum(weights), eta)


def _is_nested(ws) -> bool:
    return len(ws) > 0 and all(isinstance(w, (list, tuple)) for w in ws)


def class_model(class_sizes: Sequence[int], rep_weights01: Sequence[int], eta=0) -> Datum:
    """Each class collapses to its representative ``r{j}``; others are ``x{j}_{k}``.

    Representatives carry all mass: ``w_j/(1-eta)`` with ``w_j`` in {0, 1}.
    The classic family is ``eta = 0``.
    """
    eta = _eta_below_one(eta)
    if not class_sizes or any(s < 1 for s in class_sizes):
        raise StructuralError("class sizes must be positive")
    if len(rep_weights01) != len(class_sizes):
        raise StructuralError("one weight per class is required", code="E_WEIGHTS")
    w = _check_flags(rep_weights01, "representative weights")
    scale = 1 / (1 - eta)
    labels, weights, pi, reps, classes = [], [], [], 0, []
    for j, size in enumerate(class_sizes):
        r = len(labels)
        labels.append(f"r{j}")
        labels.extend(f"x{j}_{k}" for k in range(1, size))
        weights.append(w[j] * scale)
        weights.extend([Fraction(0)] * (size - 1))
        pi.extend([r] * size)
        reps |= 1 << r
        classes.append(((1 << size) - 1) << r)
    X = Universe(tuple(labels))
    R = Subset(X, reps)
    return Datum(X, Charge(X, tuple(weights)), R, R.complement(), Retraction(X, R, tuple(pi)),
                 Relation.blocks(X, [Subset(X, c) for c in classes]), sum(weights), eta)


def countable_truncation(base: Datum, extra_points: int, sink: str | None = None) -> Datum:
    """Finite stage of the countable construction: ``extra_points`` null points ``y{k}``.

    Each new point is hidden, retracts to ``sink`` (default: the first point
    of ``R``) and is related only to itself.
    """
    if extra_points < 0:
        raise StructuralError("extra_points must be nonnegative")
    missing = [f"Axiom {k}" for k in check_admissible(base).failed()]
    if base.eta != 0:
        missing.append("eta = 0")
    if missing:
        raise PreconditionError("truncation needs an admissible base with eta = 0", missing)
    r0 = base.universe.index(sink) if sink is not None else next(iter(base.R))
    if r0 not in base.R:
        raise StructuralError(f"sink {sink!r} is not in R", code="E_PI_RANGE")
    n = base.n
    new = tuple(f"y{k}" for k in range(extra_points))
    X = Universe(base.labels + new)
    high = ((1 << extra_points) - 1) << n
    R = Subset(X, base.R.mask)
    return Datum(
        universe=X,
        charge=Charge(X, base.weights + (Fraction(0),) * extra_points),
        R=R,
        I=Subset(X, base.I.mask | high),
        retraction=Retraction(X, R, base.pi + (r0,) * extra_points),
        G=Relation(X, base.G.rows + tuple(1 << (n + k) for k in range(extra_points))),
        E0=base.E0,
        eta=base.eta,
    )


def separating_model(kind: str) -> tuple[Datum, dict[str, bool]]:
    """A datum breaking exactly one axiom or subclause, with its expected verdicts."""
    if kind == "notI":
        d = Datum.from_labels(
            ["a", "b", "c"], [1, 1, 0], R=["a", "b"], I=["c"],
            pi={"a": "b", "b": "a", "c": "a"},
            G=[("a", "a"), ("b", "b"), ("c", "c")], E0=2, eta=0,
        )
        fails = "I"
    elif kind == "notII":
        d = Datum.from_labels(
            ["a", "b", "c"], [1, 0, 1], R=["a", "b", "c"], I=[],
            pi={"a": "a", "b": "b", "c": "c"},
            G=[("a", "a"), ("b", "b"), ("c", "c"), ("a", "b"), ("b", "a"), ("b", "c"), ("c", "b")],
            E0=2, eta=0,
        )
        fails = "II"
    elif kind in ("notIII", "not_b"):
        d = Datum.from_labels(
            ["r", "i"], [1, 1], R=["r"], I=["i"], pi={"r": "r", "i": "r"},
            G=[("r", "r"), ("i", "i")], E0=2, eta=0,
        )
        fails = "III_b"
    elif kind == "not_a":
        # the zero charge admits no positive E0; any positive value exhibits the failure
        d = Datum.from_labels(["r"], [0], R=["r"], I=[], pi={"r": "r"}, G=[("r", "r")], E0=1, eta=0)
        fails = "III_a"
    elif kind == "not_c":
        d = Datum.from_labels(
            ["a", "b"], [1, 0], R=["a", "b"], I=[], pi={"a": "a", "b": "b"},
            G=[("a", "a"), ("a", "b"), ("b", "a"), ("b", "b")], E0=1, eta=Fraction(1, 2),
        )
        fails = "III_c"
    else:
        raise ValueError(f"unknown separating model {kind!r}; expected one of {SEPARATING_KINDS}")
    return d, {k: k != fails for k in VERDICT_KEYS}


def fiber_mass_example(mass_a=1) -> Datum:
    """Two nontrivial fibers ``{r0, a}`` and ``{r1, b}``; ``a`` carries ``mass_a``."""
    mass_a = Q(mass_a)
    d = Datum.from_labels(
        ["r0", "r1", "a", "b"], [1, 1, mass_a, 0], R=["r0", "r1"], I=["a", "b"],
        pi={"r0": "r0", "r1": "r1", "a": "r0", "b": "r1"},
        G=[(x, x) for x in ("r0", "r1", "a", "b")], E0=1, eta=0,
    )
    return infer_E0(d)


def pad_fibers(d: Datum, padding: Mapping[str, int], join: bool = True) -> Datum:
    """Add null hidden points to the fibers of ``d``.

    ``padding`` maps a point of ``R`` to how many points to add to its fiber.
    With ``join=True`` each new point joins the G-class of its representative,
    so the map collapsing the new points onto it is an exact-pullback morphism;
    otherwise new points are related only to themselves.
    """
    labels = list(d.labels)
    taken = set(labels)
    weights = list(d.weights)
    pi = list(d.pi)
    owners: list[int] = []
    for rep, count in padding.items():
        r = d.universe.index(rep)
        if r not in d.R:
            raise StructuralError(f"{rep!r} is not in R", code="E_PI_RANGE")
        k = 0
        for _ in range(count):
            while f"{rep}.h{k}" in taken:
                k += 1
            label = f"{rep}.h{k}"
            taken.add(label)
            labels.append(label)
            weights.append(Fraction(0))
            pi.append(r)
            owners.append(r)
    n = d.n
    X = Universe(tuple(labels))
    anchor = list(range(n)) + owners
    if join:
        # (x, y) is related iff their anchors are related in d
        rows = [sum(1 << y for y, b in enumerate(anchor) if d.G.rows[a] >> b & 1) for a in anchor]
    else:
        rows = list(d.G.rows) + [1 << (n + k) for k in range(len(owners))]
    R = Subset(X, d.R.mask)
    extra = ((1 << len(owners)) - 1) << n
    return Datum(X, Charge(X, tuple(weights)), R, Subset(X, d.I.mask | extra),
                 Retraction(X, R, tuple(pi)), Relation(X, tuple(rows)), d.E0, d.eta)


def collapse_map(padded: Datum, base: Datum) -> dict[str, str]:
    """Send every point of ``padded`` present in ``base`` to itself, and the rest to its representative."""
    out = {}
    for x, label in enumerate(padded.labels):
        out[label] = label if label in base.universe._index else padded.labels[padded.pi[x]]
    return out
