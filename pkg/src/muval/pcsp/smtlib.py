"""The pfwCSP text format: SMT-LIB2 commands plus ``declare-wf``.

Supported commands::

    (declare-fun P (Int Int) Bool)      ; predicate variable
    (declare-wf  W (Int Int))           ; well-founded over pairs, arity 4
    (declare-wf  W (Int Int Int Int) Bool)
    (declare-fun F (Int) Int)           ; function variable
    (assert (forall ((x Int)) ...))
    (check-sat)

``set-logic``, ``set-info``, ``set-option``, ``get-model`` and ``exit`` are
accepted and ignored.
"""

from __future__ import annotations

from typing import Dict, Iterable, List, Union

from ..errors import OddArityError, ParseError, SmtBackendError, SortError
from ..logic.ast import FunSort, IntLit, Lambda, Sort, Truth
from ..logic.transform import prenex_cnf
from ..smt.backend import parse_model
from ..smt.printer import SORT_NAMES, define_fun, smt_formula, smt_symbol, smt_term
from ..smt.sexpr import SExpr, SymbolTable, parse_sexprs, parse_sort, symbol, to_formula
from .model import CandidateSolution, Clause, ExampleInstance, PfwCsp
from .ops import Label, classify

_IGNORED = {"set-logic", "set-info", "set-option", "get-model", "check-sat", "exit"}


def _sorts(sx: SExpr) -> tuple:
    if not isinstance(sx, list):
        raise ParseError(f"expected a sort list, found {sx!r}")
    return tuple(parse_sort(s) for s in sx)


def parse_pfwcsp(text: str) -> PfwCsp:
    """Parse and sort-check a pfwCSP problem.

    Raises:
        ParseError: On malformed input or an unsupported command.
        SortError: On ill-sorted assertions.
        OddArityError: When a ``declare-wf`` relation has odd arity.
    """
    preds: Dict[str, FunSort] = {}
    funs: Dict[str, FunSort] = {}
    wf: List[str] = []
    asserts: List[SExpr] = []
    for command in parse_sexprs(text):
        if not (isinstance(command, list) and command and isinstance(command[0], str)):
            raise ParseError(f"expected a command, found {command!r}")
        head = command[0]
        if head in _IGNORED:
            continue
        if head == "declare-fun":
            if len(command) != 4:
                raise ParseError(
                    "declare-fun expects a name, argument sorts and a sort"
                )
            name = symbol(command[1])
            args, ret = _sorts(command[2]), parse_sort(command[3])
            _fresh_declaration(name, preds, funs)
            if ret is Sort.BOOL:
                preds[name] = FunSort(args, Sort.PROP)
            else:
                funs[name] = FunSort(args, ret)
        elif head == "declare-wf":
            name = symbol(command[1])
            _fresh_declaration(name, preds, funs)
            if len(command) == 3:
                half = _sorts(command[2])
                args = half + half
            elif len(command) == 4:
                args = _sorts(command[2])
                if parse_sort(command[3]) is not Sort.BOOL:
                    raise SortError(f"well-founded relation {name} must return Bool")
                if len(args) % 2:
                    raise OddArityError(
                        f"well-founded relation {name} has odd arity {len(args)}"
                    )
            else:
                raise ParseError("declare-wf expects a name and a sort list")
            preds[name] = FunSort(args, Sort.PROP)
            wf.append(name)
        elif head == "assert":
            if len(command) != 2:
                raise ParseError("assert expects one formula")
            asserts.append(command[1])
        else:
            raise ParseError(f"unsupported command {head}")
    table = SymbolTable({}, preds, funs)
    clauses: List[Clause] = []
    for sx in asserts:
        _, clause_lits = prenex_cnf(to_formula(sx, table))
        for lits in clause_lits:
            clause = Clause.from_literals(lits)
            if clause not in clauses:
                clauses.append(clause)
    problem = PfwCsp(tuple(clauses), preds, frozenset(wf), funs)
    problem.validate()
    return problem


def _fresh_declaration(name: str, *tables: Dict[str, FunSort]) -> None:
    if any(name in t for t in tables):
        raise ParseError(f"{name} declared twice")


def _binders(params: Iterable) -> str:
    return " ".join(f"({smt_symbol(n)} {SORT_NAMES[s]})" for n, s in params)


def format_clause(cl: Clause) -> str:
    body = smt_formula(cl.as_formula())
    if not cl.term_vars:
        return f"(assert {body})"
    return f"(assert (forall ({_binders(cl.term_vars)}) {body}))"


def format_pfwcsp(c: PfwCsp) -> str:
    """Print ``c``; the logic is HORN only for plain CHC without extras."""
    horn = classify(c) in (Label.CHC, Label.LINEAR_CHC) and not c.wf and not c.funs
    lines = [f"(set-logic {'HORN' if horn else 'ALL'})"]
    for name, fsort in c.preds.items():
        if name in c.wf:
            half = " ".join(SORT_NAMES[s] for s in c.wf_half(name))
            lines.append(f"(declare-wf {smt_symbol(name)} ({half}))")
        else:
            args = " ".join(SORT_NAMES[s] for s in fsort.args)
            lines.append(f"(declare-fun {smt_symbol(name)} ({args}) Bool)")
    for name, fsort in c.funs.items():
        args = " ".join(SORT_NAMES[s] for s in fsort.args)
        ret = SORT_NAMES[fsort.ret]
        lines.append(f"(declare-fun {smt_symbol(name)} ({args}) {ret})")
    lines.extend(format_clause(cl) for cl in c.clauses)
    lines.append("(check-sat)")
    return "\n".join(lines) + "\n"


def format_solution(sol: CandidateSolution) -> str:
    lines = ["sat", "(model"]
    for name, lam in sorted(sol.preds.items()):
        body = smt_formula(lam.body)
        lines.append("  " + define_fun(name, lam.params, Sort.PROP, body))
    for name, lam in sorted(sol.funs.items()):
        lines.append("  " + define_fun(name, lam.params, Sort.INT, smt_term(lam.body)))
    lines.append(")")
    return "\n".join(lines) + "\n"


def format_examples(examples: Iterable[ExampleInstance]) -> str:
    lines = ["unsat"]
    for ex in examples:
        theta = ", ".join(f"{n}={v}" for n, v in ex.theta)
        lines.append(f"; clause {ex.source}" + (f" with {theta}" if theta else ""))
        lines.append(format_clause(ex.clause))
    return "\n".join(lines) + "\n"


def parse_solution(text: str, c: PfwCsp) -> CandidateSolution:
    """Read a ``sat`` answer (as printed by :func:`format_solution`) for ``c``."""
    items = parse_sexprs(text)
    if items and items[0] == "sat":
        items = items[1:]
    if len(items) != 1 or not isinstance(items[0], list):
        raise ParseError("expected 'sat' followed by one model")
    table = SymbolTable({}, dict(c.preds), dict(c.funs))
    try:
        model = parse_model(items[0], table)
    except SmtBackendError as exc:
        raise ParseError(str(exc)) from exc
    preds: Dict[str, Lambda] = {}
    funs: Dict[str, Lambda] = {}
    for name, value in model.items():
        lam = _as_lambda(value)
        if name in c.preds:
            preds[name] = lam
        elif name in c.funs:
            funs[name] = lam
        else:
            raise ParseError(f"model defines unknown symbol {name}")
    return CandidateSolution(preds, funs)


def _as_lambda(value: Union[int, bool, Lambda]) -> Lambda:
    if isinstance(value, Lambda):
        return value
    if isinstance(value, bool):
        return Lambda((), Truth(value))
    return Lambda((), IntLit(value))
