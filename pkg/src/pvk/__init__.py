"""Exact extended probabilistic powerdomain on finite T0 spaces.

Valuations, Choquet integrals, the Kleisli extension of the valuation monad,
finite topological cones with their barycentre algebras, and a small kernel
language whose semantics is the monad.  All arithmetic is over nonnegative
rationals extended with ``INF``.
"""

from __future__ import annotations

from types import ModuleType

from .extrat import INF, ExtRat, fmt, parse_extrat
from .space import ContinuousMap, FinLattice, FinSpace, ParseError, SpaceError, check_lattice, parse_map, parse_space
from .valuation import (
    NonRepresentableError,
    SimpleValuation,
    ValuationTable,
    decompose,
    dirac,
    evaluate,
    parse_table,
    parse_valuation,
    pushforward,
    stochastic_le,
    to_table,
    validate_table,
)
from .integral import LscFun, chi, integrate, parse_function, step_approx, valuation_from_functional
from .monad import Kernel, MetaValuation, apply_extension, extend, kleisli_compose, multiply, parse_kernel, unit
from .cone import FiniteCone, LinearMap, classify_convexity, dual_cone, keimel_separate
from .algebra import AlgebraMap, barycentre_search, lattice_barycentre, standard_barycentre
from .lang import parse as parse_program, run as run_program
from .report import LawReport

__all__ = sorted(n for n, v in globals().items() if not n.startswith("_") and not isinstance(v, ModuleType) and n not in ("annotations", "ModuleType"))
