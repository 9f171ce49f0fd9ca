"""Judgments on pfwCSP problems: classification, negation, solutions, grounding."""

from __future__ import annotations

import logging
from enum import Enum
from typing import List, Mapping

from ..errors import (
    DomainMismatchError,
    IncompleteSolutionError,
    NotCoChcError,
    UnsupportedWfError,
)
from ..logic.ast import Formula, Lambda, Not, PredApp, Sort, forall, literal
from ..logic.names import dual_name
from ..logic.transform import fold_term, nnf, simplify, subst_vars, substitute
from .model import CandidateSolution, Clause, ExampleInstance, PfwCsp, Value

logger = logging.getLogger(__name__)


class Label(str, Enum):
    CHC = "CHC"
    COCHC = "coCHC"
    LINEAR_CHC = "LinearCHC"
    GENERAL = "General"


def classify(c: PfwCsp) -> Label:
    """Tightest of CHC / coCHC / LinearCHC / General.

    A clause set is CHC when every clause has at most one positive predicate
    literal and coCHC when every clause has at most one negative one.
    """
    horn = all(len(cl.pos) <= 1 for cl in c.clauses)
    cohorn = all(len(cl.neg) <= 1 for cl in c.clauses)
    if horn and cohorn:
        return Label.LINEAR_CHC
    if horn:
        return Label.CHC
    if cohorn:
        return Label.COCHC
    return Label.GENERAL


def _flip(app: PredApp) -> PredApp:
    return PredApp(dual_name(app.name), app.args)


def negate_cochc_to_chc(c: PfwCsp) -> PfwCsp:
    """Replace every ``X(t)`` by ``not X_neg(t)`` (and vice versa).

    Raises:
        NotCoChcError: If ``c`` is neither coCHC nor LinearCHC.
        UnsupportedWfError: If ``c`` has well-founded or function variables.
    """
    label = classify(c)
    if label not in (Label.COCHC, Label.LINEAR_CHC):
        raise NotCoChcError(f"clause set is {label.value}, not coCHC")
    if c.wf or c.funs:
        raise UnsupportedWfError(
            "negation into CHC needs a problem without wf/function variables"
        )
    clauses = tuple(
        Clause.build(
            cl.constraint, (_flip(a) for a in cl.neg), (_flip(a) for a in cl.pos)
        )
        for cl in c.clauses
    )
    preds = {dual_name(n): s for n, s in c.preds.items()}
    return PfwCsp(clauses, preds, frozenset(), {})


def solution_from_negated(sol: CandidateSolution) -> CandidateSolution:
    """Map a solution of the negated problem back: ``X := not X_neg``."""
    preds = {
        dual_name(n): Lambda(lam.params, simplify(nnf(Not(lam.body))))
        for n, lam in sol.preds.items()
    }
    return CandidateSolution(preds, dict(sol.funs))


def apply_solution(c: PfwCsp, sol: CandidateSolution) -> List[Formula]:
    """One closed, universally quantified formula per clause.

    Raises:
        IncompleteSolutionError: If ``sol`` misses a variable used by ``c``.
    """
    s = sol.substitution()
    out = []
    for i, cl in enumerate(c.clauses):
        missing = [n for n in cl.pred_names + cl.fun_names if n not in s]
        if missing:
            raise IncompleteSolutionError(
                f"clause {i}: no solution for {', '.join(missing)}"
            )
        out.append(forall(cl.term_vars, simplify(substitute(cl.as_formula(), s))))
    return out


def instantiate(
    cl: Clause, theta: Mapping[str, Value], source: int = -1
) -> ExampleInstance:
    """Ground ``cl`` under ``theta`` and fold constant subterms.

    Raises:
        DomainMismatchError: If ``theta`` does not assign exactly the clause's
            term variables.
    """
    expected = {name for name, _ in cl.term_vars}
    if set(theta) != expected:
        raise DomainMismatchError(
            f"substitution covers {sorted(theta)}, clause needs {sorted(expected)}"
        )
    sorts = dict(cl.term_vars)
    mapping = {
        name: literal(_coerce(theta[name], sorts[name])) for name in sorted(theta)
    }

    def ground(app: PredApp) -> PredApp:
        grounded = subst_vars(app, mapping)
        return PredApp(app.name, tuple(fold_term(a) for a in grounded.args))

    constraint = simplify(subst_vars(cl.constraint, mapping))
    clause = Clause.build(
        constraint, (ground(a) for a in cl.pos), (ground(a) for a in cl.neg)
    )
    theta_items = tuple((name, mapping[name].value) for name, _ in cl.term_vars)
    return ExampleInstance(clause, source, theta_items)


def _coerce(value: Value, sort: Sort) -> Value:
    if sort is Sort.BOOL:
        return bool(value)
    return int(value)


__all__ = [
    "Label",
    "apply_solution",
    "classify",
    "instantiate",
    "negate_cochc_to_chc",
    "solution_from_negated",
]
