"""Render terms, formulas and programs in the MuCLP concrete syntax."""

from __future__ import annotations

from typing import List

from .ast import (
    Add,
    And,
    BoolLit,
    Cmp,
    Equation,
    Exists,
    Forall,
    Formula,
    FunApp,
    Holds,
    IntLit,
    Ite,
    Lambda,
    Mul,
    Neg,
    Not,
    Or,
    PredApp,
    Program,
    Term,
    Truth,
    Var,
)

_ATOMIC_TERMS = (Var, IntLit, BoolLit, FunApp, Ite)


def _wrap(t: Term) -> str:
    text = format_term(t)
    if isinstance(t, _ATOMIC_TERMS) and not (isinstance(t, IntLit) and t.value < 0):
        return text
    return f"({text})"


def format_term(t: Term) -> str:
    if isinstance(t, Var):
        return t.name
    if isinstance(t, IntLit):
        return str(t.value)
    if isinstance(t, BoolLit):
        return "true" if t.value else "false"
    if isinstance(t, FunApp):
        return f"{t.name}({', '.join(format_term(a) for a in t.args)})"
    if isinstance(t, Ite):
        return (
            f"ite({format_formula(t.cond)}, {format_term(t.then)}, "
            f"{format_term(t.other)})"
        )
    if isinstance(t, Neg):
        return f"-{_wrap(t.arg)}"
    if isinstance(t, Mul):
        return f"{t.coeff} * {_wrap(t.arg)}"
    if isinstance(t, Add):
        parts = [_add_head(t.args[0])]
        for a in t.args[1:]:
            if isinstance(a, IntLit) and a.value < 0:
                parts.append(f"- {-a.value}")
            elif isinstance(a, Neg):
                parts.append(f"- {_wrap(a.arg)}")
            elif isinstance(a, Mul) and a.coeff < 0:
                parts.append(f"- {-a.coeff} * {_wrap(a.arg)}")
            else:
                parts.append(f"+ {_add_operand(a)}")
        return " ".join(parts)
    raise TypeError(f"not a term: {t!r}")


def _add_head(t: Term) -> str:
    return _add_operand(t)


def _add_operand(t: Term) -> str:
    if isinstance(t, Add):
        return f"({format_term(t)})"
    return format_term(t)


# Precedence levels: quantifier 0, or 1, and 2, not 3, atom 4.


def _level(f: Formula) -> int:
    if isinstance(f, (Forall, Exists)):
        return 0
    if isinstance(f, Or):
        return 1
    if isinstance(f, And):
        return 2
    if isinstance(f, Not):
        return 3
    return 4


def _child(f: Formula, minimum: int) -> str:
    text = format_formula(f)
    if _level(f) < minimum:
        return f"({text})"
    return text


def format_formula(f: Formula) -> str:
    if isinstance(f, Truth):
        return "true" if f.value else "false"
    if isinstance(f, Cmp):
        return f"{format_term(f.lhs)} {f.op} {format_term(f.rhs)}"
    if isinstance(f, Holds):
        return format_term(f.term)
    if isinstance(f, PredApp):
        return f"{f.name}({', '.join(format_term(a) for a in f.args)})"
    if isinstance(f, Not):
        return f"not {_child(f.body, 3)}"
    if isinstance(f, And):
        return " /\\ ".join(_child(a, 3) for a in f.args)
    if isinstance(f, Or):
        return " \\/ ".join(_child(a, 2) for a in f.args)
    if isinstance(f, (Forall, Exists)):
        kind = type(f)
        binders: List[str] = []
        body: Formula = f
        while isinstance(body, kind):
            binders.append(f"{body.var}: {body.sort.value}")
            body = body.body
        word = "forall" if kind is Forall else "exists"
        return f"{word} {', '.join(binders)}. {format_formula(body)}"
    raise TypeError(f"not a formula: {f!r}")


def format_params(params) -> str:
    return ", ".join(f"{name}: {sort.value}" for name, sort in params)


def format_equation(eq: Equation) -> str:
    head = f"{eq.head}({format_params(eq.params)})"
    return f"{head} ={eq.kind.value} {format_formula(eq.body)};"


def format_program(p: Program) -> str:
    """Program text that :func:`~muval.logic.parser.parse_muclp` reads back."""
    lines = [f"query {format_formula(p.query)};"]
    lines.extend(format_equation(eq) for eq in p.equations)
    return "\n".join(lines) + "\n"


def format_lambda(lam: Lambda) -> str:
    body = lam.body
    if isinstance(body, (Truth, Cmp, Holds, PredApp, Not, And, Or, Forall, Exists)):
        text = format_formula(body)
    else:
        text = format_term(body)
    return f"fun ({format_params(lam.params)}) -> {text}"
