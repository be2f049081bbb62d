"""Regular non-clausal formulas: Horn recognition, unit resolution and logic programs."""

__version__ = "0.1.0"

from .core import Conj, Const, Disj, Formula, Lit, Sign, conj, disj, geq, leq
from .parser import parse, print_formula
from .semantics import Status, evaluate, oracle_sat
from .hornnc import is_horn_nc_inductive, is_horn_nc_pattern
from .clausal import clausal_unit_resolution_sat, to_clausal
from .solver import simplify_constants, solve

__all__ = [
    "Conj", "Const", "Disj", "Formula", "Lit", "Sign", "conj", "disj", "geq", "leq",
    "parse", "print_formula", "Status", "evaluate", "oracle_sat",
    "is_horn_nc_inductive", "is_horn_nc_pattern", "clausal_unit_resolution_sat",
    "to_clausal", "simplify_constants", "solve",
]
