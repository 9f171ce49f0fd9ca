"""Checking a candidate against every clause of the problem."""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Dict, List, Tuple

from ..logic.ast import Sort
from ..pcsp.model import CandidateSolution, PfwCsp, Value
from ..pcsp.ops import apply_solution
from ..smt.backend import SmtBackend

logger = logging.getLogger(__name__)


@dataclass
class ValidationResult:
    """Per-clause outcome of :func:`validate`.

    Attributes:
        failures: ``(clause index, assignment)`` for each violated clause.
        undecided: Indices of clauses the backend could not decide.
    """

    failures: List[Tuple[int, Dict[str, Value]]] = field(default_factory=list)
    undecided: List[int] = field(default_factory=list)

    @property
    def valid(self) -> bool:
        return not self.failures and not self.undecided


def validate(
    problem: PfwCsp, candidate: CandidateSolution, backend: SmtBackend
) -> ValidationResult:
    """Check each applied clause for validity; one countermodel per failed clause."""
    result = ValidationResult()
    applied = apply_solution(problem, candidate)
    for i, (clause, f) in enumerate(zip(problem.clauses, applied)):
        outcome = backend.check_validity(f)
        if outcome.valid:
            continue
        if outcome.valid is None:
            logger.warning("clause %d undecided: %s", i, outcome.reason)
            result.undecided.append(i)
            continue
        theta: Dict[str, Value] = {}
        for name, sort in clause.term_vars:
            default: Value = False if sort is Sort.BOOL else 0
            theta[name] = outcome.countermodel.get(name, default)
        result.failures.append((i, theta))
    logger.debug(
        "validation: %d failed, %d undecided of %d clause(s)",
        len(result.failures),
        len(result.undecided),
        len(problem.clauses),
    )
    return result
