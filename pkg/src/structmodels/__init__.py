"""Exact-arithmetic workbench for finite structural models.

A datum couples an atomic charge, a retraction onto a representative set,
an interaction relation and two scalars. This package decides the axioms on
such data, solves the coupling law as a contraction fixed point, classifies
relation blocks, and reduces general models to their identity-retraction
cores. Every scalar is a :class:`fractions.Fraction`.
"""

from .axioms import AxiomReport, Verdict, check_admissible, check_axiom_I, check_axiom_II, check_axiom_III
from .core import Charge, Datum, Q, Relation, Retraction, Subset, Universe
from .errors import BudgetExceeded, DomainError, PreconditionError, StructuralError, UniverseMismatch

__version__ = "0.1.0"

__all__ = [
    "AxiomReport",
    "BudgetExceeded",
    "Charge",
    "Datum",
    "DomainError",
    "PreconditionError",
    "Q",
    "Relation",
    "Retraction",
    "StructuralError",
    "Subset",
    "Universe",
    "UniverseMismatch",
    "Verdict",
    "check_admissible",
    "check_axiom_I",
    "check_axiom_II",
    "check_axiom_III",
]
