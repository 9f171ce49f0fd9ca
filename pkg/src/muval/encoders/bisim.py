"""Bisimilarity between two transition systems over a shared alphabet."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Literal, Tuple, Union

from ..errors import LabelMismatchError, SortError
from ..logic.ast import (
    Equation,
    Fixpoint,
    Formula,
    Params,
    PredApp,
    Program,
    conj,
    disj,
    exists,
    forall,
    implies,
    literal,
)
from ..logic.names import NameSupply, dual_name
from ..logic.transform import nnf
from ..pcsp.model import Value
from .model import SymbolicLts, as_terms, fresh_copy

BISIM = "bisim"


@dataclass(frozen=True)
class Pairs:
    """Ground query: each ``(left state, right state)`` pair is bisimilar."""

    pairs: Tuple[Tuple[Tuple[Value, ...], Tuple[Value, ...]], ...]


@dataclass(frozen=True)
class Implication:
    """``lower``: ``formula`` implies bisimilarity; ``upper``: bisimilarity implies it.

    The formula ranges over the parameters of :func:`bisim_params`.
    """

    formula: Formula
    direction: Literal["lower", "upper"] = "lower"


BisimQuery = Union[Pairs, Implication]


def bisim_params(lts1: SymbolicLts, lts2: SymbolicLts) -> Tuple[Params, Params]:
    """Relation parameters: left state variables suffixed ``1``, right ``2``."""
    left = tuple((f"{v}1", s) for v, s in lts1.state_vars)
    right = tuple((f"{v}2", s) for v, s in lts2.state_vars)
    names = [v for v, _ in left + right]
    if len(set(names)) != len(names):
        raise SortError("state variable names collide after numbering")
    return left, right


def _transfer(
    lts_a: SymbolicLts,
    xa: Params,
    lts_b: SymbolicLts,
    xb: Params,
    label: str,
    name: str,
    supply: NameSupply,
    a_is_left: bool,
    challenge_wins: bool,
) -> Formula:
    ya = fresh_copy(xa, supply)
    yb = fresh_copy(xb, supply)
    step_a = lts_a.step([label], as_terms(xa), as_terms(ya))
    step_b = lts_b.step([label], as_terms(xb), as_terms(yb))
    args = as_terms(ya) + as_terms(yb) if a_is_left else as_terms(yb) + as_terms(ya)
    rel = PredApp(name, args)
    if challenge_wins:
        # an a-move whose every b-answer stays in the dual relation
        return exists(ya, conj(step_a, forall(yb, implies(step_b, rel))))
    return forall(ya, implies(step_a, exists(yb, conj(step_b, rel))))


def bisim_body(
    lts1: SymbolicLts,
    lts2: SymbolicLts,
    name: str,
    supply: NameSupply,
    negated: bool = False,
) -> Formula:
    """Body of the bisimilarity relation ``name``, or of its dual when ``negated``."""
    x1, x2 = bisim_params(lts1, lts2)
    parts = []
    for label in lts1.labels:
        forth = _transfer(lts1, x1, lts2, x2, label, name, supply, True, negated)
        back = _transfer(lts2, x2, lts1, x1, label, name, supply, False, negated)
        parts.append(disj(forth, back) if negated else conj(forth, back))
    return disj(*parts) if negated else conj(*parts)


def encode_bisimulation(
    lts1: SymbolicLts, lts2: SymbolicLts, query: BisimQuery
) -> Program:
    """MuCLP program for a bisimilarity query between ``lts1`` and ``lts2``.

    Ground pairs and lower bounds use the greatest-fixpoint relation
    directly. Upper bounds ``bisim => psi`` are emitted as
    ``not psi => bisim_neg`` over the least-fixpoint dual, keeping every
    predicate occurrence positive.

    Raises:
        LabelMismatchError: If the two systems have different alphabets.
        SortError: On a ground pair of the wrong shape.
    """
    if set(lts1.labels) != set(lts2.labels):
        raise LabelMismatchError("bisimulation needs a shared label alphabet")
    lts1.validate()
    lts2.validate()
    x1, x2 = bisim_params(lts1, lts2)
    params = x1 + x2
    supply = NameSupply(v for v, _ in params)
    supply.reserve(v for v, _ in lts1.state_vars + lts2.state_vars)
    name = supply.fresh(BISIM)
    if isinstance(query, Implication) and query.direction == "upper":
        neg = supply.fresh(dual_name(name))
        body = bisim_body(lts1, lts2, neg, supply, True)
        eq = Equation(neg, params, Fixpoint.MU, body)
        rhs = PredApp(neg, as_terms(params))
        lhs = nnf(query.formula, negate=True)
        return Program((eq,), forall(params, implies(lhs, rhs)))
    eq = Equation(name, params, Fixpoint.NU, bisim_body(lts1, lts2, name, supply))
    if isinstance(query, Implication):
        rhs = PredApp(name, as_terms(params))
        return Program((eq,), forall(params, implies(query.formula, rhs)))
    apps = []
    for left, right in query.pairs:
        if len(left) != len(x1) or len(right) != len(x2):
            raise SortError(
                f"state pair {left}, {right} does not match the state variables"
            )
        apps.append(PredApp(name, tuple(literal(v) for v in left + right)))
    return Program((eq,), conj(*apps))
