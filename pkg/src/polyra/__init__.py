"""Principal polymorphic type inference for relational algebra expressions."""
from .ra_ast import parse_expr, render_expr
from .typing_rules import typecheck, well_typed
from .inference import Mode, infer, infer_formula, typable
from .type_formulas import render_formula
from .evaluator import evaluate, load_database
from .equivalence import poly_equiv_bounded

__version__ = "0.1.0"

__all__ = [
    "parse_expr", "render_expr", "typecheck", "well_typed", "Mode", "infer", "infer_formula",
    "typable", "render_formula", "evaluate", "load_database", "poly_equiv_bounded",
]
