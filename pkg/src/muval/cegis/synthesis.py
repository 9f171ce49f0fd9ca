"""Template-based synthesis of candidates that satisfy the stored examples."""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Dict, List, Sequence

from ..errors import BudgetExhausted, InternalSolverError, SmtBackendError
from ..logic.ast import Sort, Var
from ..logic.transform import free_vars
from ..pcsp.model import CandidateSolution, ExampleInstance, PfwCsp
from ..smt.backend import SmtBackend, SmtQuery, Status
from ..templates import (
    ParamVector,
    build_templates,
    bump_params,
    extract_candidate,
    ground_check,
    hypothesis_constraint,
    implicated_variables,
)

logger = logging.getLogger(__name__)


@dataclass
class Synthesized:
    """A candidate together with the parameters it was found at.

    Attributes:
        candidate: Closed solution satisfying every stored example.
        params: Parameters after any bumps made on the way.
        theta: The coefficient assignment the candidate was extracted from.
        bumps: Number of parameter bumps this call needed.
    """

    candidate: CandidateSolution
    params: ParamVector
    theta: Dict[str, int]
    bumps: int = 0


def synthesize(
    examples: Sequence[ExampleInstance],
    problem: PfwCsp,
    params: ParamVector,
    backend: SmtBackend,
    *,
    fairness_cap: int = 3,
    bool_split_cap: int = 6,
    max_bumps: int = 64,
) -> Synthesized:
    """Find coefficients under ``params`` satisfying ``examples``, bumping on failure.

    Every unsatisfiable hypothesis constraint bumps the variables its unsat
    core implicates and retries.

    Raises:
        BudgetExhausted: If ``max_bumps`` bumps did not produce a candidate.
        SmtBackendError: If the backend gives up on a hypothesis constraint.
        InternalSolverError: If a candidate fails its own examples.
    """
    relevant = [ex for ex in examples if not ex.trivially_true]
    for bump in range(max_bumps + 1):
        templates = build_templates(problem, params, bool_split_cap)
        named = hypothesis_constraint(relevant, templates)
        consts: Dict[str, Sort] = {}
        for _, f in named:
            consts.update(free_vars(f))
        unknowns: List[str] = templates.unknowns()
        for u in unknowns:
            consts.setdefault(u, Sort.INT)
        query = SmtQuery(
            consts=consts,
            assertions=list(named),
            logic="QF_LIA",
            values=tuple(Var(u, Sort.INT) for u in unknowns),
            unsat_core=True,
        )
        outcome = backend.check_sat_named(query)
        if outcome.status is Status.SAT:
            theta = {
                t.name: int(v) for t, v in outcome.values.items() if isinstance(t, Var)
            }
            candidate = extract_candidate(templates, theta)
            failing = ground_check(candidate, relevant)
            if failing:
                raise InternalSolverError(
                    f"synthesized candidate violates example(s) {failing[:5]}"
                )
            return Synthesized(candidate, params, theta, bump)
        if outcome.status is Status.UNKNOWN:
            raise SmtBackendError(f"hypothesis constraint undecided: {outcome.reason}")
        implicated = implicated_variables(outcome.core, relevant)
        params = bump_params(params, implicated, fairness_cap)
        logger.info(
            "no candidate at current parameters; bumped %s",
            ", ".join(sorted(implicated)) or "all",
        )
    raise BudgetExhausted(f"no candidate after {max_bumps} parameter bump(s)")
