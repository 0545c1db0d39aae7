"""Curvature load, the projection-update operator and its fixed point.

Set functions on the power set are stored by their atoms, so the operator
``T_eta f (B) = mu(B) + eta * f(Pi^{-1}(B))`` acts on a length-``n`` vector.
Everything is exact; "convergence" of the iteration is certified through the
geometric bound rather than a stopping tolerance.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .axioms import (
    Verdict,
    _guard,
    check_axiom_I,
    passed,
    require,
)
from .core import Datum, Relation, Subset, Universe, _same, iter_bits, product_charge_eval
from .errors import BudgetExceeded, DomainError, PreconditionError

ZERO = Fraction(0)
MAX_DECOUPLING_N = 12


@dataclass(frozen=True)
class SetFunction:
    """A finitely additive signed set function, determined by its atoms."""

    universe: Universe
    atoms: tuple[Fraction, ...]

    def __post_init__(self):
        atoms = tuple(Fraction(a) for a in self.atoms)
        object.__setattr__(self, "atoms", atoms)
        if len(atoms) != self.universe.n:
            raise ValueError(f"{len(atoms)} atoms for {self.universe.n} points")

    @classmethod
    def zero(cls, universe: Universe) -> "SetFunction":
        return cls(universe, (ZERO,) * universe.n)

    @classmethod
    def of_charge(cls, d: Datum) -> "SetFunction":
        return cls(d.universe, d.weights)

    def __call__(self, B: Subset) -> Fraction:
        _same(self.universe, B.universe)
        return sum((self.atoms[i] for i in B), ZERO)

    def __add__(self, other: "SetFunction") -> "SetFunction":
        _same(self.universe, other.universe)
        return SetFunction(self.universe, tuple(a + b for a, b in zip(self.atoms, other.atoms)))

    def __sub__(self, other: "SetFunction") -> "SetFunction":
        _same(self.universe, other.universe)
        return SetFunction(self.universe, tuple(a - b for a, b in zip(self.atoms, other.atoms)))

    def __neg__(self) -> "SetFunction":
        return SetFunction(self.universe, tuple(-a for a in self.atoms))

    def scale(self, c) -> "SetFunction":
        c = Fraction(c)
        return SetFunction(self.universe, tuple(c * a for a in self.atoms))

    def by_label(self) -> dict[str, Fraction]:
        return dict(zip(self.universe.labels, self.atoms))


def norm_sup(f: SetFunction, exhaustive: bool = False) -> Fraction:
    """``sup_B |f(B)|``: the larger of the positive and negative atom totals."""
    pos = sum((a for a in f.atoms if a > 0), ZERO)
    neg = -sum((a for a in f.atoms if a < 0), ZERO)
    closed = max(pos, neg)
    if exhaustive:
        _guard(f.universe.n)
        brute = max(abs(f(B)) for B in f.universe.all_subsets())
        if brute != closed:
            raise ArithmeticError(f"norm closed form {closed} disagrees with enumeration {brute}")
    return closed


# -- curvature load ---------------------------------------------------------

def curvature_load(d: Datum, B: Subset) -> Fraction:
    """``C(B) = mu2((B x X) & G)``."""
    _same(d.universe, B.universe)
    w = d.weights
    total = ZERO
    for i in B:
        if w[i]:
            total += w[i] * sum((w[j] for j in iter_bits(d.G.rows[i])), ZERO)
    return total


def curvature_load_function(d: Datum) -> SetFunction:
    return SetFunction(d.universe, tuple(curvature_load(d, d.universe.singleton(i)) for i in range(d.n)))


# -- the operator T_eta -----------------------------------------------------

def _pulled_back(d: Datum, f: SetFunction) -> list[Fraction]:
    """``f(Pi^{-1}({x} & R))`` for every point x."""
    out = [ZERO] * d.n
    for y, r in enumerate(d.pi):
        out[r] += f.atoms[y]
    return [out[x] if x in d.R else ZERO for x in range(d.n)]


def apply_T(d: Datum, f: SetFunction) -> SetFunction:
    _same(d.universe, f.universe)
    pulled = _pulled_back(d, f)
    return SetFunction(d.universe, tuple(m + d.eta * p for m, p in zip(d.weights, pulled)))


def _require_contraction(d: Datum) -> None:
    if d.eta >= 1:
        raise DomainError("eta = 1: the update operator is not a contraction")


def fixed_point_closed_form(d: Datum) -> SetFunction:
    """``f*(B) = mu(B) + eta/(1-eta) * mu(Pi^{-1}(B))``."""
    _require_contraction(d)
    if not check_axiom_I(d).holds:
        raise PreconditionError("the closed form needs an idempotent retraction", ["Axiom I"])
    c = d.eta / (1 - d.eta)
    pulled = _pulled_back(d, SetFunction.of_charge(d))
    return SetFunction(d.universe, tuple(m + c * p for m, p in zip(d.weights, pulled)))


@dataclass(frozen=True)
class Trajectory:
    iterates: tuple[SetFunction, ...]
    errors: tuple[Fraction, ...]
    bounds: tuple[Fraction, ...]
    fixed_point: SetFunction

    def __len__(self) -> int:
        return len(self.iterates)


def iterate_T(d: Datum, f0: SetFunction, steps: int) -> Trajectory:
    """Iterates ``f_1..f_steps`` with exact errors and bounds ``eta^n ||f0 - f*||``.

    Raises ``ArithmeticError`` if any iterate breaks its bound.
    """
    if steps < 0:
        raise ValueError("steps must be nonnegative")
    fstar = fixed_point_closed_form(d)
    e0 = norm_sup(f0 - fstar)
    iterates, errors, bounds = [], [], []
    f = f0
    for k in range(1, steps + 1):
        f = apply_T(d, f)
        err = norm_sup(f - fstar)
        bound = d.eta**k * e0
        if err > bound:
            raise ArithmeticError(f"iterate {k}: error {err} exceeds bound {bound}")
        iterates.append(f)
        errors.append(err)
        bounds.append(bound)
    return Trajectory(tuple(iterates), tuple(errors), tuple(bounds), fstar)


def neumann_partial(d: Datum, B: Subset, N: int) -> Fraction:
    """``sum_{n=0}^{N} eta^n mu(Pi^{-n}(B))``, using ``Pi^{-n} = Pi^{-1}`` for n >= 1."""
    _require_contraction(d)
    if N < 0:
        raise ValueError("N must be nonnegative")
    require(d, "I")
    geometric = sum((d.eta**k for k in range(1, N + 1)), ZERO)
    return d.mu(B) + geometric * d.mu(d.preimage(B))


def neumann_tail(d: Datum, B: Subset, N: int) -> Fraction:
    """The telescoped remainder ``eta^{N+1}/(1-eta) * mu(Pi^{-1}(B))``."""
    _require_contraction(d)
    return d.eta ** (N + 1) / (1 - d.eta) * d.mu(d.preimage(B))


def check_identification(d: Datum) -> Verdict:
    """Does the curvature load coincide with the fixed point ``f*``?"""
    _require_contraction(d)
    require(d, "I", "II")
    load = curvature_load_function(d)
    fstar = fixed_point_closed_form(d)
    for x in range(d.n):
        if load.atoms[x] != fstar.atoms[x]:
            return Verdict("identification", False, (d.labels[x],), "subset", load.atoms[x], fstar.atoms[x],
                           note="curvature load differs from the fixed point")
    return passed("identification", "checked on singletons of X")


# -- decoupling on R --------------------------------------------------------

@dataclass(frozen=True)
class DecouplingReport:
    holds: bool
    witness: tuple[str, ...] | None = None
    slab_mass: Fraction | None = None
    support_reduction_ok: bool | None = None
    closed_form_ok: bool | None = None
    values: dict[str, tuple[Fraction, Fraction]] = field(default_factory=dict)

    def __bool__(self) -> bool:
        return self.holds


def _fiber_masks(d: Datum) -> dict[int, int]:
    out = {r: 0 for r in d.R}
    for x, r in enumerate(d.pi):
        out[r] |= 1 << x
    return out


def _slab(d: Datum, mask: int) -> Fraction:
    return product_charge_eval(d.charge, Relation.rectangle(Subset(d.universe, mask), d.full()) & d.G)


def check_decoupling(d: Datum, exhaustive: bool = False, check_preconditions: bool = True) -> DecouplingReport:
    """Global decoupling: every slab ``(F_r - {r}) x X`` meets ``G`` in zero two-point mass.

    When it holds, also confirms that ``G`` outside ``R x R`` is null and that
    the load on ``B`` inside ``R`` is ``mu(B)/(1-eta)``.
    """
    _require_contraction(d)
    if check_preconditions:
        require(d, "admissible")
    fibers = _fiber_masks(d)
    witness = None
    slab_mass = None
    if exhaustive:
        if d.n > MAX_DECOUPLING_N:
            raise BudgetExceeded(f"exhaustive decoupling mode is limited to n <= {MAX_DECOUPLING_N}")
        for B in d.R.subsets():
            mask = 0
            for r in B:
                mask |= fibers[r] & ~(1 << r)
            mass = _slab(d, mask)
            if mass != 0:
                witness, slab_mass = B.labels(), mass
                break
    else:
        for r in d.R:
            mass = _slab(d, fibers[r] & ~(1 << r))
            if mass != 0:
                witness, slab_mass = (d.labels[r],), mass
                break
    if witness is not None:
        return DecouplingReport(False, witness, slab_mass)

    RR = Relation.rectangle(d.R, d.R)
    support_ok = product_charge_eval(d.charge, d.G - RR) == 0
    scale = 1 / (1 - d.eta)
    values = {}
    closed_ok = True
    for r in d.R:
        B = d.universe.singleton(r)
        load, closed = curvature_load(d, B), scale * d.mu(B)
        values[d.labels[r]] = (load, closed)
        closed_ok &= load == closed
    if exhaustive and closed_ok:
        closed_ok = all(curvature_load(d, B) == scale * d.mu(B) for B in d.R.subsets())
    return DecouplingReport(True, None, Fraction(0), support_ok, closed_ok, values)


# -- sigma-additive constraints ---------------------------------------------

@dataclass(frozen=True)
class GlobalConstraint:
    holds: bool
    mass_G: Fraction
    mass_X: Fraction
    lhs: Fraction
    eta: Fraction
    mass_G_closed: Fraction | None = None

    def to_dict(self) -> dict:
        out = {
            "holds": self.holds,
            "mu2_G": str(self.mass_G),
            "mu_X": str(self.mass_X),
            "eta": str(self.eta),
            "one_minus_eta_times_mu2_G": str(self.lhs),
        }
        if self.mass_G_closed is not None:
            out["mu_X_over_one_minus_eta"] = str(self.mass_G_closed)
        return out


def sigma_global_constraint(d: Datum) -> GlobalConstraint:
    """``(1 - eta) mu2(G) = mu(X)``: the coupling law at ``B = X``."""
    mass_G = product_charge_eval(d.charge, d.G)
    mass_X = d.mu(d.full())
    lhs = (1 - d.eta) * mass_G
    closed = mass_X / (1 - d.eta) if mass_X > 0 and d.eta < 1 else None
    return GlobalConstraint(lhs == mass_X, mass_G, mass_X, lhs, d.eta, closed)


@dataclass(frozen=True)
class EtaWindow:
    """Feasible values of eta given ``mu(X) <= M``: the interval ``[lo, hi]``, or empty."""

    M: Fraction
    lo: Fraction | None
    hi: Fraction | None

    @property
    def feasible(self) -> bool:
        return self.lo is not None

    def __contains__(self, eta) -> bool:
        return self.feasible and self.lo <= Fraction(eta) <= self.hi

    def to_dict(self) -> dict:
        if not self.feasible:
            return {"M": str(self.M), "feasible": False}
        return {"M": str(self.M), "feasible": True, "lo": str(self.lo), "hi": str(self.hi)}


def eta_feasibility(M) -> EtaWindow:
    M = Fraction(M)
    if M <= 0:
        raise DomainError(f"the mass bound must be positive, got {M}")
    if M < 1:
        return EtaWindow(M, None, None)
    return EtaWindow(M, Fraction(0), 1 - 1 / M)


def admissible_eta_check(d: Datum, M) -> bool:
    """Whether ``d.eta`` lies in the window allowed by the bound ``M``."""
    return d.eta in eta_feasibility(M)

