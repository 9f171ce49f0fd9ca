"""Render muval terms and formulas as SMT-LIB2 text."""

from __future__ import annotations

import re
from typing import Iterable, List, Tuple

from ..logic.ast import (
    Add,
    And,
    BoolLit,
    Cmp,
    Exists,
    Forall,
    Formula,
    FunApp,
    FunSort,
    Holds,
    IntLit,
    Ite,
    Mul,
    Neg,
    Not,
    Or,
    PredApp,
    Sort,
    Term,
    Truth,
    Var,
)

_SYMBOL_CHARS = r"~!@$%^&*_+=<>.?/\-"
_SIMPLE_SYMBOL = re.compile(rf"^[A-Za-z{_SYMBOL_CHARS}][A-Za-z0-9{_SYMBOL_CHARS}]*$")

SORT_NAMES = {Sort.INT: "Int", Sort.BOOL: "Bool"}


def smt_symbol(name: str) -> str:
    return name if _SIMPLE_SYMBOL.match(name) else f"|{name}|"


def smt_int(value: int) -> str:
    return str(value) if value >= 0 else f"(- {-value})"


def smt_term(t: Term) -> str:
    if isinstance(t, Var):
        return smt_symbol(t.name)
    if isinstance(t, IntLit):
        return smt_int(t.value)
    if isinstance(t, BoolLit):
        return "true" if t.value else "false"
    if isinstance(t, Add):
        return f"(+ {' '.join(smt_term(a) for a in t.args)})"
    if isinstance(t, Neg):
        return f"(- {smt_term(t.arg)})"
    if isinstance(t, Mul):
        return f"(* {smt_int(t.coeff)} {smt_term(t.arg)})"
    if isinstance(t, Ite):
        return f"(ite {smt_formula(t.cond)} {smt_term(t.then)} {smt_term(t.other)})"
    if isinstance(t, FunApp):
        if not t.args:
            return smt_symbol(t.name)
        return f"({smt_symbol(t.name)} {' '.join(smt_term(a) for a in t.args)})"
    raise TypeError(f"not a term: {t!r}")


def smt_formula(f: Formula) -> str:
    if isinstance(f, Truth):
        return "true" if f.value else "false"
    if isinstance(f, Cmp):
        lhs, rhs = smt_term(f.lhs), smt_term(f.rhs)
        if f.op == "!=":
            return f"(not (= {lhs} {rhs}))"
        return f"({f.op} {lhs} {rhs})"
    if isinstance(f, Holds):
        return smt_term(f.term)
    if isinstance(f, PredApp):
        if not f.args:
            return smt_symbol(f.name)
        return f"({smt_symbol(f.name)} {' '.join(smt_term(a) for a in f.args)})"
    if isinstance(f, Not):
        return f"(not {smt_formula(f.body)})"
    if isinstance(f, And):
        return f"(and {' '.join(smt_formula(a) for a in f.args)})"
    if isinstance(f, Or):
        return f"(or {' '.join(smt_formula(a) for a in f.args)})"
    if isinstance(f, (Forall, Exists)):
        kind = type(f)
        binders: List[str] = []
        body: Formula = f
        while isinstance(body, kind):
            binders.append(f"({smt_symbol(body.var)} {SORT_NAMES[body.sort]})")
            body = body.body
        word = "forall" if kind is Forall else "exists"
        return f"({word} ({' '.join(binders)}) {smt_formula(body)})"
    raise TypeError(f"not a formula: {f!r}")


def declare_const(name: str, sort: Sort) -> str:
    return f"(declare-fun {smt_symbol(name)} () {SORT_NAMES[sort]})"


def declare_fun(name: str, fsort: FunSort) -> str:
    args = " ".join(SORT_NAMES[s] for s in fsort.args)
    ret = "Bool" if fsort.ret is Sort.PROP else SORT_NAMES[fsort.ret]
    return f"(declare-fun {smt_symbol(name)} ({args}) {ret})"


def define_fun(
    name: str, params: Iterable[Tuple[str, Sort]], ret: Sort, body: str
) -> str:
    binders = " ".join(f"({smt_symbol(n)} {SORT_NAMES[s]})" for n, s in params)
    ret_name = "Bool" if ret is Sort.PROP else SORT_NAMES[ret]
    return f"(define-fun {smt_symbol(name)} ({binders}) {ret_name} {body})"


def named(f: Formula, name: str) -> str:
    return f"(! {smt_formula(f)} :named {smt_symbol(name)})"
