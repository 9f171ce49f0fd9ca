"""Tests for SMT-LIB2 printing, reading and the solver front end."""

from __future__ import annotations

import itertools
from unittest.mock import MagicMock

import pytest

from muval.errors import InternalSolverError, ParseError, SortError
from muval.logic import (
    Add,
    Cmp,
    Forall,
    FunSort,
    IntLit,
    Lambda,
    PredApp,
    Sort,
    Var,
    eval_formula,
    eval_term,
    parse_formula,
)
from muval.logic.ast import conj
from muval.smt import (
    SmtBackend,
    SmtQuery,
    Status,
    SymbolTable,
    declare_fun,
    define_fun,
    parse_model,
    parse_sexprs,
    smt_formula,
    smt_term,
    to_formula,
    to_term,
    to_value,
)
from muval.smt.printer import smt_int, smt_symbol
from muval.smt.sexpr import symbol

X = Var("x")
Y = Var("y")
TABLE = SymbolTable({"x": Sort.INT, "y": Sort.INT, "b": Sort.BOOL})


def _mocked_backend(*replies) -> SmtBackend:
    backend = SmtBackend(["z3", "-in", "-smt2"], timeout=1.0)
    backend.process = MagicMock()
    backend.process.request.side_effect = list(replies)
    return backend


def test_parse_sexprs() -> None:
    """Test reading nested lists, atoms and comments."""
    items = parse_sexprs('sat ; comment\n((x 1) (y (- 2)))\n(echo "hi there")')
    assert items[0] == "sat"
    assert items[1] == [["x", "1"], ["y", ["-", "2"]]]
    assert items[2] == ["echo", '"hi there"']


def test_parse_sexprs_rejects_unbalanced() -> None:
    """Test that unbalanced input is a parse error."""
    with pytest.raises(ParseError):
        parse_sexprs("(assert (> x 1)")


def test_symbol_quoting() -> None:
    """Test that non-simple names are quoted and unquoted."""
    assert smt_symbol("x") == "x"
    assert smt_symbol("W!r0_1") == "W!r0_1"
    assert smt_symbol("x2'") == "|x2'|"
    assert symbol("|x2'|") == "x2'"


@pytest.mark.parametrize("value,text", [(0, "0"), (7, "7"), (-3, "(- 3)")])
def test_smt_int(value: int, text: str) -> None:
    """Test integer literals, negatives as unary minus."""
    assert smt_int(value) == text


def test_smt_term() -> None:
    """Test printing a linear term."""
    assert smt_term(Add((X, IntLit(-1)))) == "(+ x (- 1))"


def test_smt_formula() -> None:
    """Test printing disequalities and merged quantifier prefixes."""
    assert smt_formula(Cmp("!=", X, Y)) == "(not (= x y))"
    f = Forall("x", Sort.INT, Forall("y", Sort.INT, Cmp("<=", X, Y)))
    assert smt_formula(f) == "(forall ((x Int) (y Int)) (<= x y))"


def test_declarations() -> None:
    """Test declare-fun and define-fun output."""
    assert declare_fun("P", FunSort((Sort.INT, Sort.BOOL), Sort.PROP)) == (
        "(declare-fun P (Int Bool) Bool)"
    )
    text = define_fun("f", (("x", Sort.INT),), Sort.INT, "x")
    assert text == "(define-fun f ((x Int)) Int x)"


def test_to_formula_connectives() -> None:
    """Test reading implications, chains and let bindings."""
    f = to_formula(parse_sexprs("(=> (<= 0 x y) b)")[0], TABLE)
    g = to_formula(parse_sexprs("(let ((z (+ x 1))) (> z y))")[0], TABLE)
    for x, y, b in itertools.product(range(-2, 3), range(-2, 3), (True, False)):
        env = {"x": x, "y": y, "b": b}
        assert eval_formula(f, env) == (not (0 <= x <= y) or b)
        assert eval_formula(g, env) == (x + 1 > y)


def test_to_term_subtraction_and_scaling() -> None:
    """Test n-ary minus and literal products."""
    t = to_term(parse_sexprs("(- x y 1)")[0], TABLE)
    for x, y in itertools.product(range(-2, 3), repeat=2):
        assert eval_term(t, {"x": x, "y": y}) == x - y - 1
    assert to_term(parse_sexprs("(* 2 3)")[0], TABLE) == IntLit(6)
    with pytest.raises(SortError):
        to_term(parse_sexprs("(* x y)")[0], TABLE)


def test_to_formula_unknown_symbol() -> None:
    """Test that undeclared symbols are sort errors."""
    with pytest.raises(SortError):
        to_formula(parse_sexprs("(> z 1)")[0], TABLE)


def test_to_value() -> None:
    """Test literal model values."""
    assert to_value("5") == 5
    assert to_value(["-", "3"]) == -3
    assert to_value("false") is False
    with pytest.raises(SortError):
        to_value(["+", "1", "2"])


def test_parse_model() -> None:
    """Test reading a model with constants and functions."""
    table = SymbolTable({}, {"P": FunSort((Sort.INT,), Sort.PROP)}, {})
    (reply,) = parse_sexprs(
        "(model (define-fun c () Int (- 4)) "
        "(define-fun P ((a Int)) Bool (>= a 0)))"
    )
    model = parse_model(reply, table)
    assert model["c"] == -4
    assert model["P"] == Lambda((("a", Sort.INT),), Cmp(">=", Var("a"), IntLit(0)))


def test_query_preamble() -> None:
    """Test the declarations and options sent for a query."""
    backend = SmtBackend(["z3"], timeout=2.0, seed=5)
    query = SmtQuery(
        consts={"x": Sort.INT},
        funs={"P": FunSort((Sort.INT,), Sort.PROP)},
        assertions=[("a0", PredApp("P", (X,)))],
        logic="QF_UFLIA",
        unsat_core=True,
    )
    lines = backend._preamble(query)
    assert "(set-option :random-seed 5)" in lines
    assert "(set-option :timeout 2000)" in lines
    assert "(set-logic QF_UFLIA)" in lines
    assert "(declare-fun x () Int)" in lines
    assert "(declare-fun P (Int) Bool)" in lines
    assert "(assert (! (P x) :named a0))" in lines


def test_check_validity_countermodel() -> None:
    """Test that a sat negation yields a countermodel."""
    backend = _mocked_backend(["sat"], [[["x", ["-", "3"]]]])
    result = backend.check_validity(Forall("x", Sort.INT, Cmp(">=", X, IntLit(0))))
    assert result.valid is False
    assert result.countermodel == {"x": -3}
    assert backend.calls == 1


def test_check_validity_valid() -> None:
    """Test that an unsat negation means valid."""
    backend = _mocked_backend(["unsat"])
    assert backend.check_validity(Forall("x", Sort.INT, Cmp("=", X, X))).valid is True


def test_check_validity_unknown() -> None:
    """Test that solver errors become an undecided result."""
    backend = _mocked_backend([["error", '"out of memory"']])
    result = backend.check_validity(Cmp(">=", X, IntLit(0)))
    assert result.valid is None
    assert "out of memory" in result.reason


def test_check_validity_rejects_predicates() -> None:
    """Test that validity checks need interpreted formulas."""
    backend = _mocked_backend()
    with pytest.raises(SortError):
        backend.check_validity(PredApp("P", (X,)))


def test_unknown_status_reason() -> None:
    """Test that the reason for unknown is read back."""
    backend = _mocked_backend(["unknown"], [[":reason-unknown", '"timeout"']])
    outcome = backend.check_sat_named(SmtQuery(consts={"x": Sort.INT}))
    assert outcome.status is Status.UNKNOWN
    assert outcome.reason == "timeout"


@pytest.mark.smt
def test_live_solver_round_trip() -> None:
    """Test one satisfiable and one unsatisfiable query against z3."""
    with SmtBackend(["z3", "-in", "-smt2"], timeout=10.0) as backend:
        sat = backend.check_sat_named(
            SmtQuery(
                consts={"x": Sort.INT},
                assertions=[
                    (None, conj(Cmp(">", X, IntLit(2)), Cmp("<", X, IntLit(4))))
                ],
                values=(X,),
            )
        )
        assert sat.status is Status.SAT
        assert sat.values[X] == 3
        valid = backend.check_validity(
            Forall("x", Sort.INT, parse_formula("x >= 0 \\/ x < 0", {"x": Sort.INT}))
        )
        assert valid.valid is True


def _core_query() -> SmtQuery:
    return SmtQuery(
        consts={"x": Sort.INT},
        assertions=[
            ("a0", Cmp(">", X, IntLit(0))),
            ("a1", Cmp("<", X, IntLit(0))),
            ("a2", Cmp("=", Y, Y)),
        ],
        unsat_core=True,
    )


def test_verify_cores_rechecks_core() -> None:
    """Test that a confirmed core sends only its own assertions again."""
    backend = _mocked_backend(["unsat"], [["a0", "a1"]], ["unsat"])
    backend.verify_cores = True
    outcome = backend.check_sat_named(_core_query())
    assert outcome.core == ("a0", "a1")
    recheck = backend.process.request.call_args_list[2].args[0]
    assert "(assert (< x 0))" in recheck
    assert "(assert (= y y))" not in recheck


def test_verify_cores_rejects_wrong_core() -> None:
    """Test that a core that does not re-check as unsat is an internal error."""
    backend = _mocked_backend(["unsat"], [["a0"]], ["sat"])
    backend.verify_cores = True
    with pytest.raises(InternalSolverError):
        backend.check_sat_named(_core_query())


def test_cores_are_trusted_by_default() -> None:
    """Test that no follow-up query is sent without core verification."""
    backend = _mocked_backend(["unsat"], [["a0"]])
    assert backend.check_sat_named(_core_query()).core == ("a0",)
    assert backend.process.request.call_count == 2
