"""Tests for the counterexample-guided loop and its phases."""

from __future__ import annotations

import itertools
import random
from unittest.mock import MagicMock, patch

import pytest

from muval.cegis import (
    ExampleStore,
    Sat,
    SolverOptions,
    Synthesized,
    Unknown,
    Unsat,
    UnsatCheck,
    ValidationResult,
    check_examples_unsat,
    enumerate_simple_cycles,
    match_atom,
    resolution_closure,
    solve,
    synthesize,
    validate,
)
from muval.errors import SmtBackendError
from muval.logic import (
    BOT,
    FunSort,
    IntLit,
    Lambda,
    PredApp,
    Sort,
    Var,
    eval_formula,
    parse_formula,
)
from muval.pcsp import (
    CandidateSolution,
    Clause,
    ExampleInstance,
    PfwCsp,
    instantiate,
    parse_pfwcsp,
)
from muval.smt import SmtBackend, SmtOutcome, Status
from muval.templates import OrdinaryParams, ParamVector

SMT_COMMAND = ["z3", "-in", "-smt2"]

CHAIN = """\
(declare-fun P (Int) Bool)
(assert (P 0))
(assert (forall ((x Int)) (=> (P x) (P (+ x 1)))))
(assert (forall ((x Int)) (=> (P x) (< x 2))))
"""


def _fact(name: str, *values: int) -> PredApp:
    return PredApp(name, tuple(IntLit(v) for v in values))


def _unit(app: PredApp, positive: bool = True, source: int = 0) -> ExampleInstance:
    clause = Clause.build(BOT, [app] if positive else [], [] if positive else [app])
    return ExampleInstance(clause, source)


def _wf_problem() -> PfwCsp:
    return PfwCsp((), {"W": FunSort((Sort.INT, Sort.INT), Sort.PROP)}, frozenset({"W"}))


@pytest.fixture
def backend():
    with SmtBackend(SMT_COMMAND, timeout=10.0, seed=0) as smt:
        yield smt


def test_store_deduplicates() -> None:
    """Test that equal instances are stored once."""
    store = ExampleStore()
    assert store.add(_unit(_fact("P", 0)))
    assert not store.add(_unit(_fact("P", 0), source=3))
    assert len(store) == 1
    assert store.sources() == {0: [0]}


def test_store_propagates_units() -> None:
    """Test unit propagation through a ground implication."""
    problem = parse_pfwcsp(CHAIN)
    store = ExampleStore()
    store.add(instantiate(problem.clauses[0], {}, source=0))
    store.add(instantiate(problem.clauses[1], {"x": 0}, source=1))
    assert store.propagate() == 2
    assert store.positives == {_fact("P", 0), _fact("P", 1)}
    assert store.conflict is None


def test_store_records_conflicts() -> None:
    """Test that a contradicted instance is remembered."""
    store = ExampleStore()
    store.add(_unit(_fact("P", 0)))
    store.add(_unit(_fact("P", 0), positive=False, source=1))
    store.propagate()
    assert store.conflict is not None


def test_match_atom() -> None:
    """Test matching a clause literal against a ground fact."""
    problem = parse_pfwcsp(CHAIN)
    step = problem.clauses[1]
    (pattern,) = step.neg
    assert match_atom(pattern, _fact("P", 4), step) == {"x": 4}
    assert match_atom(pattern, _fact("Q", 4), step) is None
    (successor,) = step.pos
    assert match_atom(successor, _fact("P", 4), step) is None


def test_match_atom_checks_computed_arguments() -> None:
    """Test that non-variable arguments must fold to the fact's value."""
    x = Var("x")
    clause = Clause.build(BOT, [PredApp("R", (x, IntLit(1)))])
    pattern = clause.pos[0]
    assert match_atom(pattern, _fact("R", 3, 1), clause) == {"x": 3}
    assert match_atom(pattern, _fact("R", 3, 2), clause) is None


def test_resolution_closure_reaches_conflict() -> None:
    """Test that resolution derives the refuting chain from one fact."""
    problem = parse_pfwcsp(CHAIN)
    store = ExampleStore()
    store.add(instantiate(problem.clauses[0], {}, source=0))
    resolution_closure(store, problem, depth=6)
    assert _fact("P", 2) in store.positives
    assert store.conflict is not None


def test_resolution_closure_depth_zero() -> None:
    """Test that depth zero leaves the store untouched."""
    problem = parse_pfwcsp(CHAIN)
    store = ExampleStore()
    store.add(instantiate(problem.clauses[0], {}, source=0))
    resolution_closure(store, problem, depth=0)
    assert len(store) == 1


def _brute_force_cycles(edges, nodes):
    adjacency = set(edges)
    found = set()
    for size in range(1, len(nodes) + 1):
        for perm in itertools.permutations(nodes, size):
            if perm[0] != min(perm):
                continue
            steps = zip(perm, perm[1:] + perm[:1])
            if all(step in adjacency for step in steps):
                found.add(perm)
    return found


def test_enumerate_simple_cycles_matches_brute_force() -> None:
    """Test cycle enumeration against exhaustive search on small graphs."""
    rng = random.Random(3)
    nodes = [0, 1, 2, 3]
    for _ in range(30):
        edges = [(a, b) for a in nodes for b in nodes if rng.random() < 0.35]
        cycles = enumerate_simple_cycles(edges)
        assert {tuple(c) for c in cycles} == _brute_force_cycles(edges, nodes)
        assert [len(c) for c in cycles] == sorted(len(c) for c in cycles)


@pytest.mark.slow
def test_enumerate_simple_cycles_up_to_eight_nodes() -> None:
    """Test cycle enumeration against exhaustive search on up to eight nodes."""
    rng = random.Random(11)
    for _ in range(100):
        nodes = list(range(rng.randint(1, 8)))
        edges = [(a, b) for a in nodes for b in nodes if rng.random() < 0.25]
        cycles = enumerate_simple_cycles(edges)
        assert {tuple(c) for c in cycles} == _brute_force_cycles(edges, nodes)


def test_enumerate_simple_cycles_rotation() -> None:
    """Test that each cycle starts at its least node."""
    cycles = enumerate_simple_cycles([((2,), (1,)), ((1,), (2,)), ((3,), (3,))])
    assert cycles == [[(3,)], [(1,), (2,)]]


def test_solve_honours_stop_signal() -> None:
    """Test that a set stop signal cancels before any backend call."""
    problem = parse_pfwcsp(CHAIN)
    stop = MagicMock()
    stop.is_set.return_value = True
    smt = MagicMock()
    result = solve(problem, smt, SolverOptions(), stop=stop)
    assert isinstance(result, Unknown)
    assert result.reason == "cancelled"
    assert result.iterations == 0
    smt.check_sat_named.assert_not_called()


@patch("muval.cegis.loop.validate")
@patch("muval.cegis.loop.synthesize")
@patch("muval.cegis.loop.check_examples_unsat")
def test_solve_stops_on_propagated_conflict(
    mock_check: MagicMock, mock_synth: MagicMock, mock_validate: MagicMock
) -> None:
    """Test that a conflict found by resolution ends the run as unsat."""
    problem = parse_pfwcsp(CHAIN)
    params = (("x", Sort.INT),)
    candidate = CandidateSolution(
        {"P": Lambda(params, parse_formula("x = 2", dict(params)))}
    )
    mock_check.return_value = UnsatCheck(Status.SAT)
    mock_synth.return_value = Synthesized(candidate, ParamVector.initial(["P"]), {})
    mock_validate.return_value = ValidationResult(failures=[(0, {}), (2, {"x": 2})])
    records = []
    result = solve(
        problem,
        MagicMock(),
        SolverOptions(resolution_depth=6),
        on_iteration=records.append,
    )
    assert isinstance(result, Unsat)
    assert result.iterations == 1
    assert records[-1].note.startswith("unit facts contradict clause")
    mock_check.assert_called_once()


def _chain_examples(problem):
    return [
        instantiate(problem.clauses[0], {}, source=0),
        instantiate(problem.clauses[2], {"x": 5}, source=2),
    ]


def test_synthesize_bumps_on_unsat_core() -> None:
    """Test that an unsat core bumps the implicated variable before retrying."""
    problem = parse_pfwcsp(CHAIN)
    wanted = {"P!c0_0_0": 1, "P!c0_0_1": -1}
    replies = iter([SmtOutcome(Status.UNSAT, core=("con!P",))])

    def reply(query):
        for outcome in replies:
            return outcome
        return SmtOutcome(
            Status.SAT, values={t: wanted.get(t.name, -1) for t in query.values}
        )

    smt = MagicMock()
    smt.check_sat_named.side_effect = reply
    examples = _chain_examples(problem)
    result = synthesize(examples, problem, ParamVector.initial(["P"]), smt)
    assert smt.check_sat_named.call_count == 2
    assert result.bumps == 1
    assert result.params["P"] == OrdinaryParams(nd=2)
    first = smt.check_sat_named.call_args_list[0].args[0]
    assert [name for name, _ in first.assertions] == ["con!P", "ex!0", "ex!1"]
    body = result.candidate.preds["P"].body
    for x0 in range(-3, 4):
        assert eval_formula(body, {"x0": x0}) == (x0 <= 1)


def test_synthesize_reports_undecided_constraint() -> None:
    """Test that an unknown answer is raised as a backend error."""
    problem = parse_pfwcsp(CHAIN)
    smt = MagicMock()
    smt.check_sat_named.return_value = SmtOutcome(Status.UNKNOWN, reason="timeout")
    with pytest.raises(SmtBackendError):
        synthesize(_chain_examples(problem), problem, ParamVector.initial(["P"]), smt)


@pytest.mark.smt
def test_unsat_check_learns_cycle(backend: SmtBackend) -> None:
    """Test that a forced two-cycle of a well-founded relation is refuted."""
    problem = _wf_problem()
    store = ExampleStore()
    store.add(_unit(_fact("W", 0, 1)))
    store.add(_unit(_fact("W", 1, 0), source=1))
    check = check_examples_unsat(store, problem, backend)
    assert check.status is Status.UNSAT
    assert check.learnt == [("W", [(0,), (1,)])]


@pytest.mark.smt
def test_unsat_check_finds_acyclic_model(backend: SmtBackend) -> None:
    """Test that a single edge has an acyclic model."""
    problem = _wf_problem()
    store = ExampleStore()
    store.add(_unit(_fact("W", 1, 0)))
    check = check_examples_unsat(store, problem, backend)
    assert check.status is Status.SAT
    assert check.assignment[_fact("W", 1, 0)] is True


@pytest.mark.smt
def test_validate_reports_failures(backend: SmtBackend) -> None:
    """Test per-clause validation with countermodels."""
    problem = parse_pfwcsp(CHAIN)
    params = (("x", Sort.INT),)
    weak = CandidateSolution(
        {"P": Lambda(params, parse_formula("x >= 0", dict(params)))}
    )
    result = validate(problem, weak, backend)
    assert not result.valid
    assert [idx for idx, _ in result.failures] == [2]
    ((_, theta),) = result.failures
    assert theta["x"] >= 2


@pytest.mark.smt
def test_solve_ground_contradiction(backend: SmtBackend) -> None:
    """Test that directly contradicting facts are unsat."""
    problem = parse_pfwcsp(
        "(declare-fun P (Int) Bool)\n(assert (P 0))\n(assert (not (P 0)))\n"
    )
    result = solve(problem, backend, SolverOptions(timeout=60.0))
    assert isinstance(result, Unsat)
    assert result.examples


@pytest.mark.smt
def test_solve_chain_is_unsat(backend: SmtBackend) -> None:
    """Test refuting a problem through its counterexamples."""
    records = []
    result = solve(
        parse_pfwcsp(CHAIN),
        backend,
        SolverOptions(timeout=60.0),
        on_iteration=records.append,
    )
    assert isinstance(result, Unsat)
    assert records
    final = records[-1].note
    assert final == "examples unsatisfiable" or final.startswith("unit facts")


@pytest.mark.smt
@pytest.mark.slow
def test_solve_nested_problem(backend: SmtBackend, nested_pcsp_text: str) -> None:
    """Test finding a solution with a ranking function."""
    problem = parse_pfwcsp(nested_pcsp_text)
    records = []
    options = SolverOptions(timeout=60.0, max_iterations=50, seed=0)
    result = solve(problem, backend, options, on_iteration=records.append)
    assert isinstance(result, Sat)
    assert result.iterations <= 50
    assert validate(problem, result.solution, backend).valid
    candidates = [sorted(r.candidate.items()) for r in records if r.candidate]
    assert len(candidates) == len({repr(c) for c in candidates})
    sizes = [r.num_examples for r in records[:-1]]
    assert sizes == sorted(set(sizes))
    vectors = [r.params for r in records if r.params]
    for before, after in zip(vectors, vectors[1:]):
        for name, values in before.items():
            assert all(after[name][k] >= v for k, v in values.items())
    seen = set()
    for record in records:
        for cex in record.counterexamples:
            key = (cex.clause, tuple(sorted(cex.theta.items())))
            assert key not in seen
            seen.add(key)
