"""The counterexample-guided solving loop for pfwCSP problems."""

from __future__ import annotations

import logging
import time
from dataclasses import dataclass, field
from typing import Callable, List, Optional, Protocol, Set, Tuple, Union

from ..errors import BudgetExhausted, InternalSolverError, SmtBackendError
from ..logic.semantics import eval_formula
from ..pcsp.model import CandidateSolution, ExampleInstance, PfwCsp
from ..pcsp.ops import instantiate
from ..schema import Counterexample, IterationRecord
from ..smt.backend import SmtBackend, Status
from ..templates import TemplateDefaults, initial_params
from .resolution import resolution_closure
from .store import ExampleStore
from .synthesis import synthesize
from .unsat import check_examples_unsat
from .validation import validate
from .wfcheck import find_cycle

logger = logging.getLogger(__name__)


class StopSignal(Protocol):
    def is_set(self) -> bool: ...


@dataclass
class Sat:
    solution: CandidateSolution
    iterations: int = 0


@dataclass
class Unsat:
    examples: List[ExampleInstance] = field(default_factory=list)
    iterations: int = 0


@dataclass
class Unknown:
    reason: str
    timeout: bool = False
    iterations: int = 0


SolveResult = Union[Sat, Unsat, Unknown]


@dataclass
class SolverOptions:
    """Budgets and knobs of one :func:`solve` run.

    Attributes:
        max_iterations: Iteration budget.
        timeout: Wall-clock budget in seconds (``None`` for unlimited).
        fairness_cap: Largest gap between per-variable bump counts.
        bool_split_cap: Most Boolean parameters a predicate template splits on.
        max_bumps: Parameter bumps allowed per synthesis call.
        resolution_depth: Rounds of resolution after each validation failure.
        wf_check_points: Sample size of the well-foundedness spot check.
        seed: Seed of the spot-check sampler.
        defaults: Initial template parameters.
    """

    max_iterations: int = 200
    timeout: Optional[float] = 300.0
    fairness_cap: int = 3
    bool_split_cap: int = 6
    max_bumps: int = 64
    resolution_depth: int = 2
    wf_check_points: int = 100
    seed: Optional[int] = None
    defaults: TemplateDefaults = field(default_factory=TemplateDefaults)


def solve(
    problem: PfwCsp,
    backend: SmtBackend,
    options: Optional[SolverOptions] = None,
    stop: Optional[StopSignal] = None,
    on_iteration: Optional[Callable[[IterationRecord], None]] = None,
) -> SolveResult:
    """Decide ``problem`` by alternating synthesis, validation and resolution.

    Starting from no examples, each iteration first checks whether the
    examples already admit no well-founded model (``Unsat``), then
    synthesizes a candidate satisfying them and validates it against every
    clause. Each violated clause contributes one new ground instance.

    Args:
        problem: Sort-checked clause problem.
        backend: SMT backend owned by this run.
        options: Budgets; defaults when omitted.
        stop: Cooperative cancellation, polled between iterations.
        on_iteration: Receives one record per iteration.

    Returns:
        ``Sat`` with a validated solution, ``Unsat`` with an example set that
        has no well-founded model, or ``Unknown`` with the reason.
    """
    options = options or SolverOptions()
    problem.validate()
    store = ExampleStore()
    params = initial_params(problem, options.defaults)
    seen: Set[Tuple] = set()
    started = time.monotonic()

    def emit(record: IterationRecord) -> None:
        if on_iteration is not None:
            on_iteration(record)

    for iteration in range(1, options.max_iterations + 1):
        if stop is not None and stop.is_set():
            return Unknown("cancelled", iterations=iteration - 1)
        if options.timeout is not None and time.monotonic() - started > options.timeout:
            return Unknown(
                "time budget exhausted", timeout=True, iterations=iteration - 1
            )
        record = IterationRecord(iteration=iteration)
        try:
            check = check_examples_unsat(store, problem, backend)
            record.cycles = [
                [name] + [repr(n) for n in cycle] for name, cycle in check.learnt
            ]
            if check.status is Status.UNKNOWN:
                return Unknown(f"backend: {check.reason}", iterations=iteration)
            if check.status is Status.UNSAT:
                recheck = check_examples_unsat(store, problem, backend)
                if recheck.status is not Status.UNSAT:
                    raise InternalSolverError("example set did not re-check as unsat")
                record.note = "examples unsatisfiable"
                record.num_examples = len(store)
                emit(record)
                return Unsat(list(store.instances), iterations=iteration)
            found = synthesize(
                store.instances,
                problem,
                params,
                backend,
                fairness_cap=options.fairness_cap,
                bool_split_cap=options.bool_split_cap,
                max_bumps=options.max_bumps,
            )
            params = found.params
            candidate = found.candidate
            record.candidate = candidate.render()
            record.params = params.describe()
            key = candidate.key()
            if key in seen:
                raise InternalSolverError("candidate repeated across iterations")
            seen.add(key)
            _spot_check(problem, candidate, options)
            result = validate(problem, candidate, backend)
        except (SmtBackendError, BudgetExhausted) as exc:
            record.note = str(exc)
            emit(record)
            return Unknown(str(exc), iterations=iteration)
        if result.undecided:
            record.note = f"undecided clause(s) {result.undecided}"
            emit(record)
            reason = f"backend left clause(s) {result.undecided} undecided"
            return Unknown(reason, iterations=iteration)
        if result.valid:
            if not validate(problem, candidate, backend).valid:
                raise InternalSolverError("solution did not re-validate")
            record.note = "solution found"
            record.num_examples = len(store)
            emit(record)
            return Sat(candidate, iterations=iteration)
        added = 0
        for idx, theta in result.failures:
            ex = instantiate(problem.clauses[idx], theta, source=idx)
            _check_counterexample(ex, candidate)
            if store.add(ex):
                added += 1
            record.failed_clauses.append(idx)
            record.counterexamples.append(Counterexample(clause=idx, theta=dict(theta)))
        if not added:
            raise InternalSolverError("validation produced no new example")
        resolution_closure(store, problem, options.resolution_depth)
        record.num_examples = len(store)
        if store.conflict is not None:
            record.note = f"unit facts contradict clause {store.conflict.source}"
            emit(record)
            return Unsat(list(store.instances), iterations=iteration)
        logger.info(
            "iteration %d: %d example(s), %d failed clause(s), params %s",
            iteration,
            len(store),
            len(result.failures),
            params.describe(),
        )
        emit(record)
    return Unknown("iteration budget exhausted", iterations=options.max_iterations)


def _spot_check(
    problem: PfwCsp, candidate: CandidateSolution, options: SolverOptions
) -> None:
    for name in sorted(problem.wf):
        lam = candidate.preds[name]
        cycle = find_cycle(lam, options.wf_check_points, seed=options.seed)
        if cycle is not None:
            raise InternalSolverError(
                f"candidate for {name} has a cycle through {cycle}"
            )


def _check_counterexample(ex: ExampleInstance, candidate: CandidateSolution) -> None:
    holds = eval_formula(ex.clause.as_formula(), {}, candidate.preds, candidate.funs)
    if holds:
        raise InternalSolverError(
            f"countermodel {dict(ex.theta)} does not falsify clause {ex.source}"
        )
