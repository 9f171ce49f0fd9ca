"""Sorted first-order syntax, normal forms and reference semantics for MuCLP."""

from .ast import (
    BOT,
    TOP,
    Add,
    And,
    BoolLit,
    Cmp,
    Equation,
    Exists,
    Fixpoint,
    Forall,
    Formula,
    FunApp,
    FunSort,
    Holds,
    IntLit,
    Ite,
    Lambda,
    Mul,
    Neg,
    Not,
    Or,
    PredApp,
    Program,
    Sort,
    Term,
    Truth,
    Var,
)
from .names import NameSupply, dual_name
from .parser import parse_formula, parse_muclp, parse_term
from .printer import format_formula, format_lambda, format_program, format_term
from .semantics import Verdict, bounded_evaluate, eval_formula, eval_term
from .transform import (
    alpha_equivalent,
    free_vars,
    nnf,
    prenex_cnf,
    programs_alpha_equivalent,
    simplify,
    substitute,
)
from .wellformed import check_wellformed, demorgan_dual, normalize_query

__all__ = [
    # Syntax
    "BOT",
    "TOP",
    "Add",
    "And",
    "BoolLit",
    "Cmp",
    "Equation",
    "Exists",
    "Fixpoint",
    "Forall",
    "Formula",
    "FunApp",
    "FunSort",
    "Holds",
    "IntLit",
    "Ite",
    "Lambda",
    "Mul",
    "Neg",
    "Not",
    "Or",
    "PredApp",
    "Program",
    "Sort",
    "Term",
    "Truth",
    "Var",
    # Names
    "NameSupply",
    "dual_name",
    # Text
    "parse_formula",
    "parse_muclp",
    "parse_term",
    "format_formula",
    "format_lambda",
    "format_program",
    "format_term",
    # Semantics
    "Verdict",
    "bounded_evaluate",
    "eval_formula",
    "eval_term",
    # Transformations
    "alpha_equivalent",
    "free_vars",
    "nnf",
    "prenex_cnf",
    "programs_alpha_equivalent",
    "simplify",
    "substitute",
    "check_wellformed",
    "demorgan_dual",
    "normalize_query",
]
