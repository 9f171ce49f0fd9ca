"""Top-level orchestration for ``muval solve`` and ``pcsat``."""

from __future__ import annotations

import logging
import time
from pathlib import Path
from typing import Dict, Optional, Sequence, Tuple

from ..cegis import validate
from ..errors import InternalSolverError
from ..logic.ast import Program
from ..logic.semantics import Verdict, bounded_evaluate
from ..logic.wellformed import check_wellformed, demorgan_dual
from ..pcsp.model import CandidateSolution, PfwCsp
from ..pcsp.ops import Label, classify, negate_cochc_to_chc, solution_from_negated
from ..pcsp.smtlib import format_solution
from ..reduction import reduce_with_trace
from ..schema import FinalReport, RunStats
from .config import RunConfig
from .io import load_pfwcsp, load_program, write_pfwcsp
from .parallel import run_sides_parallel
from .sequential import run_sides_sequential
from .side import SideJob, SideResult

logger = logging.getLogger(__name__)

# (side, outcome) -> validity verdict of the original query.
_VERDICTS: Dict[Tuple[Optional[str], str], str] = {
    ("primal", "sat"): "valid",
    ("primal", "unsat"): "invalid",
    ("dual", "sat"): "invalid",
    ("dual", "unsat"): "valid",
}


def reduce_both(program: Program, cfg: RunConfig) -> Tuple[PfwCsp, PfwCsp]:
    """Reduce ``program`` and its De Morgan dual to clause problems."""
    check_wellformed(program)
    primal, _ = reduce_with_trace(program, cfg.suppress_flags)
    dual, _ = reduce_with_trace(demorgan_dual(program), cfg.suppress_flags)
    return primal, dual


def decide(results: Sequence[SideResult]) -> FinalReport:
    """Combine side outcomes into one validity report.

    Raises:
        InternalSolverError: If two sides reached contradicting answers.
    """
    definitive = [r for r in results if r.definitive]
    if sum(r.outcome == "sat" for r in definitive) > 1:
        raise InternalSolverError("primal and dual problems are both satisfiable")
    verdicts = {_VERDICTS[(r.side, r.outcome)] for r in definitive}
    if len(verdicts) > 1:
        sides = ", ".join(f"{r.side} {r.outcome}" for r in definitive)
        raise InternalSolverError(f"contradicting answers: {sides}")
    if definitive:
        winner = definitive[0]
        return FinalReport(
            verdict=_VERDICTS[(winner.side, winner.outcome)],
            side=winner.side,
            certificate=winner.certificate,
            stats=winner.stats,
        )
    timed_out = any(r.outcome == "timeout" for r in results)
    reason = "; ".join(f"{r.side}: {r.reason}" for r in results if r.reason)
    stats = results[0].stats if results else RunStats()
    return FinalReport(
        verdict="timeout" if timed_out else "unknown",
        reason=reason or None,
        stats=stats,
    )


def solve_program(
    program: Program, cfg: RunConfig, emit_pcsp: Optional[Path] = None
) -> FinalReport:
    """Decide the validity of ``program`` by primal-dual CEGIS.

    Args:
        program: Parsed MuCLP program.
        cfg: Run configuration.
        emit_pcsp: Where to write the primal clause problem, if anywhere.

    Returns:
        ``valid``/``invalid`` with the deciding side's certificate, or
        ``unknown``/``timeout`` with the reasons of both sides.
    """
    started = time.monotonic()
    primal, dual = reduce_both(program, cfg)
    if emit_pcsp is not None:
        write_pfwcsp(primal, emit_pcsp)
    jobs = [SideJob(primal, "primal"), SideJob(dual, "dual")]
    logger.info(
        "primal: %d clause(s) (%s); dual: %d clause(s) (%s)",
        len(primal.clauses),
        classify(primal).value,
        len(dual.clauses),
        classify(dual).value,
    )
    if cfg.parallel_dual:
        results = run_sides_parallel(jobs, cfg, cfg.log_path)
    else:
        results = run_sides_sequential(jobs, cfg, cfg.log_path)
    report = decide(results)
    report.stats.wall_time = time.monotonic() - started
    return report


def muval_solve(
    path: Path, cfg: RunConfig, emit_pcsp: Optional[Path] = None
) -> FinalReport:
    """Load a ``.muclp`` file and decide its validity (see :func:`solve_program`)."""
    return solve_program(load_program(path), cfg, emit_pcsp)


def bounded_solve(path: Path, bound: int, timeout: Optional[float] = None) -> Verdict:
    """Evaluate a ``.muclp`` file by fixpoint iteration over ``[-bound, bound]``."""
    program = load_program(path)
    check_wellformed(program)
    return bounded_evaluate(program, bound, timeout)


def _recheck(problem: PfwCsp, solution: CandidateSolution, cfg: RunConfig) -> None:
    backend = cfg.smt_backend()
    with backend:
        result = validate(problem, solution, backend)
    if not result.valid:
        raise InternalSolverError("mapped solution does not solve the original problem")


def solve_pfwcsp(problem: PfwCsp, cfg: RunConfig) -> FinalReport:
    """Decide satisfiability of ``problem``.

    With ``cfg.negate_cochc`` a coCHC problem without well-founded or
    function variables is solved through its negated CHC problem; a solution
    found there is mapped back and re-validated against ``problem``.
    """
    started = time.monotonic()
    label = classify(problem)
    target = problem
    negated = False
    if cfg.negate_cochc and label in (Label.COCHC, Label.LINEAR_CHC):
        if problem.wf or problem.funs:
            logger.warning(
                "not negating: problem has well-founded or function variables"
            )
        else:
            target = negate_cochc_to_chc(problem)
            negated = True
            logger.info("solving the negated CHC problem instead")

    results = run_sides_sequential([SideJob(target)], cfg, cfg.log_path)
    result = results[0]
    if negated and result.outcome == "sat" and result.solution is not None:
        solution = solution_from_negated(result.solution)
        _recheck(problem, solution, cfg)
        result.solution = solution
        result.certificate = format_solution(solution)

    stats = result.stats
    stats.classification = label.value
    stats.wall_time = time.monotonic() - started
    if result.definitive:
        return FinalReport(
            verdict=result.outcome, certificate=result.certificate, stats=stats
        )
    return FinalReport(verdict=result.outcome, reason=result.reason, stats=stats)


def pcsat_solve(path: Path, cfg: RunConfig) -> FinalReport:
    """Load a pfwCSP file and decide its satisfiability (see :func:`solve_pfwcsp`)."""
    return solve_pfwcsp(load_pfwcsp(path), cfg)
