"""SMT-LIB2 text protocol: printing, s-expression reading and the solver process."""

from .backend import (
    SmtBackend,
    SmtOutcome,
    SmtQuery,
    Status,
    ValidityResult,
    parse_model,
    split_prefix,
)
from .printer import declare_const, declare_fun, define_fun, smt_formula, smt_term
from .process import SmtProcess
from .sexpr import SymbolTable, parse_sexprs, to_formula, to_term, to_value

__all__ = [
    # Backend
    "SmtBackend",
    "SmtOutcome",
    "SmtQuery",
    "Status",
    "ValidityResult",
    "parse_model",
    "split_prefix",
    "SmtProcess",
    # Text
    "declare_const",
    "declare_fun",
    "define_fun",
    "smt_formula",
    "smt_term",
    "SymbolTable",
    "parse_sexprs",
    "to_formula",
    "to_term",
    "to_value",
]
