"""pfwCSP problems: clauses with predicate, function and well-founded variables."""

from .model import CandidateSolution, Clause, ExampleInstance, PfwCsp
from .ops import (
    Label,
    apply_solution,
    classify,
    instantiate,
    negate_cochc_to_chc,
    solution_from_negated,
)
from .smtlib import (
    format_clause,
    format_examples,
    format_pfwcsp,
    format_solution,
    parse_pfwcsp,
    parse_solution,
)

__all__ = [
    # Model
    "CandidateSolution",
    "Clause",
    "ExampleInstance",
    "PfwCsp",
    # Judgments
    "Label",
    "apply_solution",
    "classify",
    "instantiate",
    "negate_cochc_to_chc",
    "solution_from_negated",
    # Text format
    "format_clause",
    "format_examples",
    "format_pfwcsp",
    "format_solution",
    "parse_pfwcsp",
    "parse_solution",
]
