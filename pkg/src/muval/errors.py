"""Exception hierarchy shared by every muval subpackage.

Errors caused by malformed user input also derive from ``ValueError`` so that
callers (and the CLI) can treat them uniformly.
"""

from __future__ import annotations

from typing import Optional, Sequence


class MuvalError(Exception):
    """Base class for all muval errors."""


class ParseError(MuvalError, ValueError):
    """Syntax error in an input text, with a 1-based source position."""

    def __init__(self, message: str, line: int = 0, col: int = 0) -> None:
        self.line = line
        self.col = col
        where = f" (line {line}, col {col})" if line else ""
        super().__init__(f"{message}{where}")


class SortError(MuvalError, ValueError):
    """Ill-sorted term or formula, or an arity mismatch."""


class DuplicateEquationError(MuvalError, ValueError):
    """Two equations define the same predicate variable."""


class UnboundPredicateError(MuvalError, ValueError):
    """A predicate variable is applied but never defined or declared."""


class PositivityViolation(MuvalError, ValueError):
    """A defined predicate occurs under an odd number of negations."""

    def __init__(self, pvar: str, path: Sequence[str]) -> None:
        self.pvar = pvar
        self.path = tuple(path)
        super().__init__(
            f"predicate {pvar} occurs negatively at {'/'.join(self.path) or '<root>'}"
        )


class OpenQueryError(MuvalError, ValueError):
    """The query mentions free term variables."""


class ResidualExistentialError(MuvalError, ValueError):
    """An existential quantifier survived where only universals are allowed."""


class ClauseShapeError(MuvalError, ValueError):
    """A formula does not have the shape of a pfwCSP clause."""


class IncompleteSolutionError(MuvalError, ValueError):
    """A candidate solution does not cover every variable it is applied to."""


class DomainMismatchError(MuvalError, ValueError):
    """A term substitution does not cover exactly the clause's variables."""


class NotCoChcError(MuvalError, ValueError):
    """The clause set is not co-Horn, so it cannot be negated into CHC."""


class UnsupportedWfError(MuvalError, ValueError):
    """Well-founded or function variables block the requested operation."""


class OddArityError(MuvalError, ValueError):
    """A well-founded predicate variable was declared with odd arity."""


class TemplateError(MuvalError, ValueError):
    """A template cannot be built for the requested variable."""


class ConfigError(MuvalError, ValueError):
    """Invalid run configuration."""


class LabelMismatchError(MuvalError, ValueError):
    """Transition systems / automata disagree on their label alphabets."""


class ObjectiveKindError(MuvalError, ValueError):
    """A game encoder was given a game with the wrong objective kind."""


class EvaluationTimeout(MuvalError):
    """The bounded reference evaluator ran out of time."""


class BudgetExhausted(MuvalError):
    """An iteration or bump budget ran out."""


class SmtBackendError(MuvalError):
    """The SMT child process crashed or answered outside the protocol."""

    def __init__(self, message: str, response: Optional[str] = None) -> None:
        self.response = response
        super().__init__(message)


class InternalSolverError(MuvalError):
    """Primal and dual pipelines returned contradicting verdicts."""
