"""Tests for the reduction from MuCLP validity to pfwCSP satisfiability."""

from __future__ import annotations

import itertools
from typing import FrozenSet, Tuple

import pytest

from muval.cegis import find_cycle
from muval.errors import ClauseShapeError
from muval.logic import (
    BOT,
    Add,
    BoolLit,
    Cmp,
    Fixpoint,
    Forall,
    Formula,
    FunApp,
    Holds,
    IntLit,
    Lambda,
    Not,
    Or,
    PredApp,
    Sort,
    Var,
    alpha_equivalent,
    demorgan_dual,
    parse_formula,
    parse_muclp,
)
from muval.logic.ast import conj, disj
from muval.logic.transform import pred_apps, subst_vars
from muval.pcsp import (
    CandidateSolution,
    Clause,
    Label,
    PfwCsp,
    apply_solution,
    classify,
)
from muval.reduction import elim_ex, elim_mu, elim_nu, reduce_program, reduce_with_trace
from muval.smt import SmtBackend

FLAG_ALWAYS_SET = """\
query X(0);
X(x: int) =mu Y(x);
Y(y: int) =nu y >= 0 \\/ X(y - 1);
"""


def test_elim_mu_mutual_recursion(mutual_mu_text: str) -> None:
    """Test eliminating two mutually recursive least fixpoints."""
    program, wf_vars, added = elim_mu(parse_muclp(mutual_mu_text))
    assert [eq.kind for eq in program.equations] == [Fixpoint.NU, Fixpoint.NU]
    assert [w.name for w in wf_vars] == ["WF_X"]
    assert wf_vars[0].sort.args == (Sort.INT, Sort.INT)

    y = program.equation("Y")
    assert tuple(s for _, s in y.params) == (Sort.BOOL, Sort.INT, Sort.INT)
    assert [ext.origin for ext in added["Y"]] == ["X"]

    x = program.equation("X")
    decrement = Add((Var("x"), IntLit(-1)))
    assert x.body == PredApp("Y", (BoolLit(True), Var("x"), decrement))

    v = Var("v")
    first = PredApp("Y", (BoolLit(False), IntLit(0), v))
    expected = Forall("v", Sort.INT, conj(PredApp("X", (v,)), first))
    assert alpha_equivalent(program.query, expected)


def test_elim_mu_guards_calls_back(mutual_mu_text: str) -> None:
    """Test that calls back into the eliminated equation are guarded by the flag."""
    program, _, added = elim_mu(parse_muclp(mutual_mu_text))
    (ext,) = added["Y"]
    body = program.equation("Y").body
    text = repr(body)
    assert "WF_X" in text
    assert f"name='{ext.flag}'" in text


def test_elim_mu_drops_unused_wf() -> None:
    """Test that a least fixpoint without recursion gets no well-founded variable."""
    program, wf_vars, _ = elim_mu(parse_muclp("query X(0);\nX(x: int) =mu x >= 0;\n"))
    assert wf_vars == []
    assert program.equation("X").kind is Fixpoint.NU


def _literals(cl: Clause) -> FrozenSet[Formula]:
    if cl.constraint == BOT:
        head: Tuple[Formula, ...] = ()
    elif isinstance(cl.constraint, Or):
        head = cl.constraint.args
    else:
        head = (cl.constraint,)
    return frozenset(head + cl.pos + tuple(Not(a) for a in cl.neg))


def _same_clause(actual: Clause, expected: Clause) -> bool:
    """Equal literal sets under some renaming of the term variables."""
    if len(actual.term_vars) != len(expected.term_vars):
        return False
    wanted = _literals(expected)
    for order in itertools.permutations(actual.term_vars):
        if [s for _, s in order] != [s for _, s in expected.term_vars]:
            continue
        mapping = {n: Var(m, s) for (n, s), (m, _) in zip(order, expected.term_vars)}
        if {subst_vars(lit, mapping) for lit in _literals(actual)} == wanted:
            return True
    return False


def test_elim_nu_mutual_recursion_clauses(mutual_mu_text: str) -> None:
    """Test the exact clause set produced for the mutual recursion."""
    program, _, added = elim_mu(parse_muclp(mutual_mu_text))
    (ext,) = added["Y"]
    clauses = elim_nu(program)

    x, y = Var("x"), Var("y")
    mirror = Var("m")
    flag = Var("b", Sort.BOOL)
    y_down = Add((y, IntLit(-1)))
    y_call = PredApp("Y", (flag, mirror, y))
    expected = [
        Clause.build(BOT, [PredApp("X", (x,))]),
        Clause.build(BOT, [PredApp("Y", (BoolLit(False), IntLit(0), x))]),
        Clause.build(
            BOT,
            [PredApp("Y", (BoolLit(True), x, Add((x, IntLit(-1)))))],
            [PredApp("X", (x,))],
        ),
        Clause.build(Cmp("<=", y, IntLit(0)), [PredApp("X", (y_down,))], [y_call]),
        Clause.build(
            disj(Cmp("<=", y, IntLit(0)), Not(Holds(flag))),
            [PredApp("WF_X", (mirror, y_down))],
            [y_call],
        ),
    ]
    assert len(clauses) == len(expected)
    for want in expected:
        assert sum(_same_clause(cl, want) for cl in clauses) == 1, want
    assert program.equation("Y").params[0][0] == ext.flag


def test_elim_mu_guard_uses_mirrored_parameters(mutual_mu_text: str) -> None:
    """Test that the guard in a later equation compares mirrored arguments."""
    program, _, added = elim_mu(parse_muclp(mutual_mu_text))
    (ext,) = added["Y"]
    ((mirror, _),) = ext.mirrored
    assert mirror != "x"
    apps = [a for a in pred_apps(program.equation("Y").body) if a.name == "WF_X"]
    assert [a.args[0] for a in apps] == [Var(mirror)]


def test_elim_nu_rejects_least_fixpoints(mutual_mu_text: str) -> None:
    """Test that clause generation needs a nu-only program."""
    with pytest.raises(ClauseShapeError):
        elim_nu(parse_muclp(mutual_mu_text))


def test_elim_ex_in_query() -> None:
    """Test Skolemizing an existential under a universal in the query."""
    text = (
        "query forall y: int. exists x: int. X(x, y);\n"
        "X(a: int, b: int) =nu a = b;\n"
    )
    program, functions = elim_ex(parse_muclp(text))
    (sk,) = functions
    assert sk.name == "sk_x"
    assert sk.site == "query"
    assert sk.binder == "x"
    assert sk.sort.args == (Sort.INT,)
    assert sk.sort.ret is Sort.INT
    assert "FunApp(name='sk_x'" in repr(program.query)


def test_elim_ex_in_body() -> None:
    """Test Skolemizing an existential over an equation parameter."""
    program, functions = elim_ex(
        parse_muclp("query X(0);\nX(a: int) =nu exists y: int. y > a /\\ X(y);\n")
    )
    (sk,) = functions
    assert sk.site == "X"
    witness = FunApp(sk.name, (Var("a"),), Sort.INT)
    assert program.equation("X").body == conj(
        Cmp(">", witness, Var("a")), PredApp("X", (witness,))
    )


def test_elim_ex_splits_booleans() -> None:
    """Test that Boolean existentials become a case split."""
    text = "query exists c: bool. X(c);\nX(d: bool) =nu d;\n"
    program, functions = elim_ex(parse_muclp(text))
    assert functions == []
    assert "Exists" not in repr(program.query)
    assert "BoolLit(value=True)" in repr(program.query)
    assert "BoolLit(value=False)" in repr(program.query)


def test_reduce_primal_term_program(p_term_text: str) -> None:
    """Test the reduction of the nested termination program."""
    problem, trace = reduce_with_trace(parse_muclp(p_term_text))
    assert classify(problem) is Label.COCHC
    assert sorted(w.name for w in trace.wf_vars) == ["WF_I", "WF_J"]
    assert trace.skolem_fns == []
    assert problem.wf == frozenset({"WF_I", "WF_J"})
    assert problem.funs == {}


def test_reduce_dual_term_program(p_term_text: str) -> None:
    """Test the reduction of the dual of the nested termination program."""
    problem, trace = reduce_with_trace(demorgan_dual(parse_muclp(p_term_text)))
    assert [sk.sort.arity for sk in trace.skolem_fns] == [0, 0, 2]
    assert [w.name for w in trace.wf_vars] == ["WF_NP_neg"]
    assert set(problem.funs) == {sk.name for sk in trace.skolem_fns}
    assert all(name.startswith("sk_") for name in problem.funs)


def test_generated_names_are_fresh(p_term_text: str) -> None:
    """Test that every generated name is new and distinct."""
    program = parse_muclp(p_term_text)
    _, trace = reduce_with_trace(demorgan_dual(program))
    names = trace.generated_names()
    assert len(names) == len(set(names))
    assert not set(names) & {"I", "J", "NP", "x1", "x2", "x2'"}


def test_suppress_constant_flags() -> None:
    """Test dropping a flag that is true at every call site."""
    program = parse_muclp(FLAG_ALWAYS_SET)
    plain = reduce_program(program)
    suppressed, trace = reduce_with_trace(program, suppress_flags=True)
    assert plain.preds["Y"].arity == 3
    assert suppressed.preds["Y"].arity == 2
    assert [head for head, _ in trace.suppressed_flags] == ["Y"]
    assert len(suppressed.clauses) <= len(plain.clauses)


def test_reduce_keeps_flags_with_false_callers(mutual_mu_text: str) -> None:
    """Test that a flag passed false from the query is kept."""
    _, trace = reduce_with_trace(parse_muclp(mutual_mu_text), suppress_flags=True)
    assert trace.suppressed_flags == []


def test_reduce_negative_query() -> None:
    """Test that negative query occurrences are reduced through dual equations."""
    problem = reduce_program(parse_muclp("query not X(0);\nX(x: int) =mu x >= 1;\n"))
    assert "X_neg" in problem.preds
    assert problem.wf == frozenset()


PLANTED = {
    "I": (2, "true"),
    "J": (1, "{0} >= 0"),
    "NP": (2, "false"),
    "WF_I": (
        4,
        "{0} >= 0 /\\ {0} + {1} >= 0"
        " /\\ ({0} > {2} \\/ {0} >= {2} /\\ {0} + {1} > {2} + {3})",
    ),
    "WF_J": (
        2,
        "{0} >= 0 /\\ {1} >= 0 /\\ ite(22 - {0} >= {0}, 22 - {0}, {0}) >= 0"
        " /\\ ite(22 - {0} >= {0}, 22 - {0}, {0})"
        " > ite(22 - {1} >= {1}, 22 - {1}, {1})",
    ),
}


def _planted(problem: PfwCsp) -> CandidateSolution:
    """Known solution of the reduced termination program over its last arguments."""
    preds = {}
    for name, fsort in problem.preds.items():
        arity, text = PLANTED[name]
        params = tuple((f"a{i}", s) for i, s in enumerate(fsort.args))
        last = [n for n, _ in params[len(params) - arity :]]
        preds[name] = Lambda(params, parse_formula(text.format(*last), dict(params)))
    return CandidateSolution(preds)


@pytest.mark.smt
def test_planted_solution_of_term_program(p_term_text: str) -> None:
    """Test a hand-written solution against every clause of the reduced program."""
    problem = reduce_program(parse_muclp(p_term_text))
    assert set(problem.preds) == set(PLANTED)
    solution = _planted(problem)
    with SmtBackend(["z3", "-in", "-smt2"], timeout=10.0, seed=0) as backend:
        for i, formula in enumerate(apply_solution(problem, solution)):
            result = backend.check_validity(formula)
            assert result.valid, (i, result.countermodel)
    for name in sorted(problem.wf):
        assert find_cycle(solution.preds[name], count=500, seed=0) is None
