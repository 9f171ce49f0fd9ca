"""Deriving further ground instances from the unit facts of a store."""

from __future__ import annotations

import logging
from typing import Dict, Iterable, List, Optional

from ..logic.ast import BoolLit, IntLit, PredApp, Var
from ..logic.transform import fold_term, subst_term_vars
from ..pcsp.model import Clause, PfwCsp, Value
from ..pcsp.ops import instantiate
from .store import ExampleStore

logger = logging.getLogger(__name__)


def match_atom(
    pattern: PredApp, fact: PredApp, clause: Clause
) -> Optional[Dict[str, Value]]:
    """Assignment of the clause's term variables that maps ``pattern`` onto ``fact``.

    Variables in argument position are bound directly; every other argument
    must fold to the fact's value once those bindings are applied. Clause
    variables outside the pattern leave the match ambiguous, so ``None``.
    """
    if pattern.name != fact.name or len(pattern.args) != len(fact.args):
        return None
    theta: Dict[str, Value] = {}
    for arg, value in zip(pattern.args, fact.args):
        if isinstance(arg, Var):
            if arg.name in theta and theta[arg.name] != value.value:
                return None
            theta[arg.name] = value.value
    if set(theta) != {name for name, _ in clause.term_vars}:
        return None
    mapping = {
        n: (BoolLit(v) if isinstance(v, bool) else IntLit(v)) for n, v in theta.items()
    }
    for arg, value in zip(pattern.args, fact.args):
        if isinstance(arg, Var):
            continue
        folded = fold_term(subst_term_vars(arg, mapping))
        if folded != value:
            return None
    return theta


def _resolve(
    store: ExampleStore, problem: PfwCsp, facts: Iterable[PredApp], positive: bool
) -> int:
    added = 0
    for fact in list(facts):
        for idx, clause in enumerate(problem.clauses):
            # a positive fact resolves against negative literals and vice versa
            literals = clause.neg if positive else clause.pos
            for lit in literals:
                theta = match_atom(lit, fact, clause)
                if theta is None:
                    continue
                if store.add(instantiate(clause, theta, source=idx)):
                    added += 1
    return added


def resolution_closure(
    store: ExampleStore, problem: PfwCsp, depth: int = 2
) -> ExampleStore:
    """Extend ``store`` by unit propagation and resolution against the original clauses.

    Each round propagates unit facts and then instantiates every clause
    whose literal matches a fact of the opposite polarity; ``depth`` bounds
    the number of rounds.
    """
    for round_no in range(depth):
        store.propagate()
        added = _resolve(store, problem, sorted(store.positives, key=repr), True)
        added += _resolve(store, problem, sorted(store.negatives, key=repr), False)
        logger.debug("resolution round %d added %d instance(s)", round_no + 1, added)
        if not added:
            break
    if depth > 0:
        store.propagate()
    return store


__all__: List[str] = ["match_atom", "resolution_closure"]
