"""Tests for run orchestration and the primal/dual verdict."""

from __future__ import annotations

from pathlib import Path
from unittest.mock import MagicMock, patch

import pytest
from conftest import NU_OUTSIDE, P_TERM, P_TERM_DUAL

from muval.cegis import Sat, Unknown, Unsat
from muval.core import (
    RunConfig,
    SideJob,
    SideResult,
    bounded_solve,
    decide,
    reduce_both,
    run_side,
    run_sides_sequential,
    solve_pfwcsp,
    solve_program,
)
from muval.errors import InternalSolverError, SmtBackendError
from muval.logic import (
    Lambda,
    Sort,
    Verdict,
    bounded_evaluate,
    parse_formula,
    parse_muclp,
)
from muval.pcsp import CandidateSolution, Label, classify, instantiate, parse_pfwcsp
from muval.schema import IterationRecord, RunStats

COCHC = """\
(declare-fun P (Int) Bool)
(declare-fun Q (Int) Bool)
(assert (forall ((x Int)) (=> (P x) (or (Q x) (P (+ x 1))))))
(assert (forall ((x Int)) (=> (< x 0) (P x))))
"""


def _result(side, outcome, reason=None) -> SideResult:
    certificate = None if reason else f"{outcome} certificate"
    return SideResult(side, outcome, certificate=certificate, reason=reason)


@pytest.mark.parametrize(
    "side,outcome,verdict",
    [
        ("primal", "sat", "valid"),
        ("primal", "unsat", "invalid"),
        ("dual", "sat", "invalid"),
        ("dual", "unsat", "valid"),
    ],
)
def test_decide_single_side(side: str, outcome: str, verdict: str) -> None:
    """Test the verdict implied by each definitive side outcome."""
    report = decide([_result(side, outcome)])
    assert report.verdict == verdict
    assert report.side == side
    assert report.certificate == f"{outcome} certificate"


def test_decide_agreeing_sides() -> None:
    """Test that agreeing definitive answers are accepted."""
    report = decide([_result("primal", "sat"), _result("dual", "unsat")])
    assert report.verdict == "valid"
    assert report.side == "primal"


def test_decide_both_satisfiable() -> None:
    """Test that two satisfiable sides are an internal error."""
    with pytest.raises(InternalSolverError, match="both satisfiable"):
        decide([_result("primal", "sat"), _result("dual", "sat")])


def test_decide_contradicting_answers() -> None:
    """Test that opposite verdicts are an internal error."""
    with pytest.raises(InternalSolverError, match="contradicting answers"):
        decide([_result("primal", "unsat"), _result("dual", "unsat")])


def test_decide_undecided() -> None:
    """Test that undecided sides report timeout before unknown."""
    report = decide(
        [
            _result("primal", "timeout", "time budget exhausted"),
            _result("dual", "unknown", "parameter bumps exhausted"),
        ]
    )
    assert report.verdict == "timeout"
    assert report.reason == (
        "primal: time budget exhausted; dual: parameter bumps exhausted"
    )
    assert report.certificate is None


def test_decide_unknown_without_reasons() -> None:
    """Test the empty result list."""
    report = decide([])
    assert report.verdict == "unknown"
    assert report.reason is None


def test_reduce_both(p_term_text: str) -> None:
    """Test that both sides of the termination program are reduced."""
    primal, dual = reduce_both(parse_muclp(p_term_text), RunConfig())
    assert classify(primal) is Label.COCHC
    assert primal.wf == frozenset({"WF_I", "WF_J"})
    assert dual.funs


@pytest.mark.parametrize("parallel", [True, False])
def test_solve_program_engines(
    p_term_text: str, parallel: bool, tmp_path: Path
) -> None:
    """Test that the configured engine receives the primal and dual jobs."""
    cfg = RunConfig(parallel_dual=parallel)
    emitted = tmp_path / "primal.smt2"
    target = "run_sides_parallel" if parallel else "run_sides_sequential"
    with patch(f"muval.core.solver.{target}") as engine:
        engine.return_value = [_result("primal", "sat")]
        report = solve_program(parse_muclp(p_term_text), cfg, emit_pcsp=emitted)
    jobs = engine.call_args.args[0]
    assert [job.side for job in jobs] == ["primal", "dual"]
    assert report.verdict == "valid"
    assert report.stats.wall_time >= 0.0
    assert parse_pfwcsp(emitted.read_text(encoding="utf-8")).wf == jobs[0].problem.wf


@patch("muval.core.solver._recheck")
@patch("muval.core.solver.run_sides_sequential")
def test_solve_pfwcsp_through_negation(engine: MagicMock, recheck: MagicMock) -> None:
    """Test that a coCHC problem is solved as CHC and mapped back."""
    params = (("x", Sort.INT),)
    negated_solution = CandidateSolution(
        {
            "P_neg": Lambda(params, parse_formula("x >= 0", dict(params))),
            "Q_neg": Lambda(params, parse_formula("x >= 0", dict(params))),
        }
    )
    engine.return_value = [
        SideResult(None, "sat", certificate="sat", solution=negated_solution)
    ]
    problem = parse_pfwcsp(COCHC)
    report = solve_pfwcsp(problem, RunConfig(negate_cochc=True))

    (job,) = engine.call_args.args[0]
    assert set(job.problem.preds) == {"P_neg", "Q_neg"}
    assert classify(job.problem) is Label.CHC
    recheck.assert_called_once()
    assert report.verdict == "sat"
    assert "(define-fun P ((x Int)) Bool" in report.certificate
    assert report.stats.classification == "coCHC"


@patch("muval.core.solver.run_sides_sequential")
def test_solve_pfwcsp_reports_reason(engine: MagicMock) -> None:
    """Test that undecided pcsat runs keep their reason."""
    engine.return_value = [
        SideResult(None, "unknown", reason="iteration budget exhausted")
    ]
    report = solve_pfwcsp(parse_pfwcsp(COCHC), RunConfig())
    (job,) = engine.call_args.args[0]
    assert set(job.problem.preds) == {"P", "Q"}
    assert report.verdict == "unknown"
    assert report.reason == "iteration budget exhausted"


@patch("muval.core.sequential.run_side")
def test_sequential_stops_at_first_answer(run: MagicMock) -> None:
    """Test that the dual side is skipped once the primal side decides."""
    run.side_effect = [_result("primal", "unsat"), _result("dual", "unsat")]
    problem = parse_pfwcsp(COCHC)
    jobs = [SideJob(problem, "primal"), SideJob(problem, "dual")]
    results = run_sides_sequential(jobs, RunConfig())
    assert [r.side for r in results] == ["primal"]
    assert run.call_count == 1


@patch("muval.core.sequential.run_side")
def test_sequential_survives_backend_failure(run: MagicMock) -> None:
    """Test that a crashed side gives up and the next side still runs."""
    run.side_effect = [SmtBackendError("solver died"), _result("dual", "sat")]
    problem = parse_pfwcsp(COCHC)
    jobs = [SideJob(problem, "primal"), SideJob(problem, "dual")]
    results = run_sides_sequential(jobs, RunConfig())
    assert [r.outcome for r in results] == ["unknown", "sat"]
    assert results[0].reason == "solver died"


def test_sequential_time_budget() -> None:
    """Test that an exhausted budget times out every remaining side."""
    problem = parse_pfwcsp(COCHC)
    cfg = RunConfig()
    cfg.timeout = -1.0
    results = run_sides_sequential([SideJob(problem, "primal")], cfg)
    assert results[0].outcome == "timeout"


@pytest.mark.parametrize(
    "outcome,expected",
    [
        ("sat", "sat"),
        ("unsat", "unsat"),
        ("unknown", "unknown"),
        ("timeout", "timeout"),
    ],
)
@patch("muval.core.side.SmtBackend")
@patch("muval.core.side.solve")
def test_run_side_packages_results(
    solve: MagicMock, backend: MagicMock, outcome: str, expected: str
) -> None:
    """Test the side result built from each loop outcome."""
    problem = parse_pfwcsp(COCHC)
    backend.return_value.calls = 5
    params = (("x", Sort.INT),)
    solution = CandidateSolution(
        {
            "P": Lambda(params, parse_formula("x < 0", dict(params))),
            "Q": Lambda(params, parse_formula("true", dict(params))),
        }
    )
    example = instantiate(problem.clauses[1], {"x": -1}, source=1)

    def fake_solve(problem, backend, options, stop, on_iteration):
        on_iteration(IterationRecord(iteration=1, num_examples=1))
        if outcome == "sat":
            return Sat(solution, iterations=1)
        if outcome == "unsat":
            return Unsat([example], iterations=1)
        return Unknown("gave up", timeout=outcome == "timeout", iterations=1)

    solve.side_effect = fake_solve
    records = []
    result = run_side(SideJob(problem, "dual"), RunConfig(), on_record=records.append)

    assert result.outcome == expected
    assert result.side == "dual"
    assert [r.side for r in result.records] == ["dual"]
    assert records == result.records
    assert result.stats.smt_calls == 5
    backend.return_value.close.assert_called_once()
    if outcome == "sat":
        assert result.solution is solution
        assert result.certificate.startswith("sat\n")
    elif outcome == "unsat":
        assert result.certificate.startswith("unsat\n")
    else:
        assert result.reason == "gave up"


def test_bounded_solve(tmp_path: Path) -> None:
    """Test bounded evaluation straight from a file."""
    path = tmp_path / "nu_outside.muclp"
    path.write_text(NU_OUTSIDE, encoding="utf-8")
    assert bounded_solve(path, 0) is Verdict.VALID


def test_run_stats_defaults() -> None:
    """Test that fresh statistics start at zero."""
    stats = RunStats()
    assert (stats.iterations, stats.smt_calls, stats.examples) == (0, 0, 0)


@pytest.mark.smt
@pytest.mark.slow
@pytest.mark.parametrize("text,verdict", [(P_TERM, "valid"), (P_TERM_DUAL, "invalid")])
def test_termination_programs_end_to_end(text: str, verdict: str) -> None:
    """Test the verdicts for the termination program and its dual."""
    report = solve_program(parse_muclp(text), RunConfig(timeout=120.0, seed=0))
    assert report.verdict == verdict
    assert report.certificate


@pytest.mark.smt
@pytest.mark.slow
def test_solve_program_agrees_with_bounded_evaluation(random_program) -> None:
    """Test verdicts on small generated programs against the bounded evaluator."""
    decided = 0
    for seed in range(20):
        program = parse_muclp(random_program(seed))
        expected = bounded_evaluate(program, 5)
        report = solve_program(program, RunConfig(timeout=60.0, seed=0))
        if report.verdict not in ("valid", "invalid"):
            continue
        decided += 1
        if expected is not Verdict.OUT_OF_DOMAIN:
            assert report.verdict == expected.value, seed
    assert decided >= 12
