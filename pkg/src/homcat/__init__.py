"""Homological algebra for finitely generated abelian groups and finite groups."""

from .errors import (
    BudgetError,
    ConsistencyError,
    DegreeError,
    GroupAxiomError,
    HomcatError,
    ParseError,
    PreconditionError,
    VerificationError,
)
from .fgab import AbElement, AbMorphism, FgAbGroup, IntMatrix, smith_normal_form
from .chains import ChainComplex, ChainMap, ComplexSES, homology, long_exact_sequence
from .grp import Extension, FiniteGroup, GroupHom, Subgroup
from .grphom import group_cohomology, group_ext, group_homology, derived_reflector

__version__ = "0.1.0"
