"""Two-player games on transition systems as MuCLP validity problems.

Every round is an adversary move followed by an ego move; the query asks
whether the ego player wins from every initial state.
"""

from __future__ import annotations

import logging
from typing import Iterable, List

from ..errors import LabelMismatchError, ObjectiveKindError
from ..logic.ast import (
    Equation,
    Fixpoint,
    Formula,
    PredApp,
    Program,
    conj,
    disj,
    exists,
    forall,
    implies,
)
from ..logic.names import NameSupply
from ..logic.transform import subst_vars
from .buchi import Node, equation_order, head_names, reachable_nodes
from .model import GameSpec, Ltl, Reach, Safety, as_terms, fresh_copy

logger = logging.getLogger(__name__)


def _round(
    g: GameSpec, supply: NameSupply, goal: Formula, recurse: str, reached: Fixpoint
) -> Formula:
    """One round towards ``goal``: greatest (``nu``) or least (``mu``) style."""
    lts = g.lts
    x = lts.state_vars
    y = fresh_copy(x, supply)
    z = fresh_copy(x, supply)
    goal_y = subst_vars(goal, dict(zip((v for v, _ in x), as_terms(y))))
    adversary = lts.step(g.adversary_labels, lts.state_terms(), as_terms(y))
    ego = lts.step(g.ego_labels, as_terms(y), as_terms(z))
    move = exists(z, conj(ego, PredApp(recurse, as_terms(z))))
    if reached is Fixpoint.NU:
        return conj(goal, forall(y, implies(adversary, conj(goal_y, move))))
    return disj(goal, forall(y, implies(adversary, disj(goal_y, move))))


def _single(g: GameSpec, base: str, goal: Formula, kind: Fixpoint) -> Program:
    g.validate()
    supply = NameSupply(v for v, _ in g.lts.state_vars)
    name = supply.fresh(base)
    body = _round(g, supply, goal, name, kind)
    x = g.lts.state_vars
    query = forall(x, implies(g.initial, PredApp(name, g.lts.state_terms())))
    return Program((Equation(name, x, kind, body),), query)


def encode_safety_game(g: GameSpec) -> Program:
    """``sg`` as a greatest fixpoint: the ego player keeps every visited state safe.

    Raises:
        ObjectiveKindError: If the objective is not a safety objective.
        LabelMismatchError: If the player labels do not partition the arena's.
    """
    if not isinstance(g.objective, Safety):
        raise ObjectiveKindError(
            f"expected a safety objective, got {type(g.objective).__name__}"
        )
    return _single(g, "sg", g.objective.safe, Fixpoint.NU)


def encode_reachability_game(g: GameSpec) -> Program:
    """``rg`` as a least fixpoint: the ego player eventually forces a goal state.

    Raises:
        ObjectiveKindError: If the objective is not a reachability objective.
        LabelMismatchError: If the player labels do not partition the arena's.
    """
    if not isinstance(g.objective, Reach):
        raise ObjectiveKindError(
            f"expected a reachability objective, got {type(g.objective).__name__}"
        )
    return _single(g, "rg", g.objective.reach, Fixpoint.MU)


def encode_ltl_game(g: GameSpec) -> Program:
    """Büchi game: the labels of every play must be accepted by the automaton.

    Each round steps the automaton twice, once per move; the target
    predicate is a greatest fixpoint when either automaton state visited in
    the round is accepting.

    Raises:
        ObjectiveKindError: If the objective is not an automaton.
        LabelMismatchError: If the automaton's labels differ from the arena's.
    """
    if not isinstance(g.objective, Ltl):
        raise ObjectiveKindError(
            f"expected an automaton objective, got {type(g.objective).__name__}"
        )
    automaton = g.objective.automaton
    if set(automaton.labels) != set(g.lts.labels):
        raise LabelMismatchError("automaton and arena label sets differ")
    g.validate()
    lts = g.lts

    def kind(q1: str, q2: str) -> Fixpoint:
        if automaton.accepting(q1) or automaton.accepting(q2):
            return Fixpoint.NU
        return Fixpoint.MU

    def round_targets(q: str, label: str) -> Iterable[tuple]:
        for q1 in automaton.succ(q, label):
            for ego_label in g.ego_labels:
                for q2 in automaton.succ(q1, ego_label):
                    yield ego_label, (q2, kind(q1, q2))

    def successors(node: Node) -> Iterable[Node]:
        for label in g.adversary_labels:
            for _, target in round_targets(node[0], label):
                yield target

    start = (automaton.init, Fixpoint.NU)
    nodes, edges = reachable_nodes(start, successors)
    supply = NameSupply(v for v, _ in lts.state_vars)
    names = head_names(nodes, "win", supply)
    x = lts.state_vars
    y = fresh_copy(x, supply)
    z = fresh_copy(x, supply)
    equations: List[Equation] = []
    for node in equation_order(nodes, edges):
        q, fix = node
        parts = []
        for label in g.adversary_labels:
            options = [
                exists(
                    z,
                    conj(
                        lts.step([ego_label], as_terms(y), as_terms(z)),
                        PredApp(names[target], as_terms(z)),
                    ),
                )
                for ego_label, target in round_targets(q, label)
            ]
            step = lts.step([label], lts.state_terms(), as_terms(y))
            parts.append(forall(y, implies(step, disj(*options))))
        equations.append(Equation(names[node], x, fix, conj(*parts)))
    query = forall(x, implies(g.initial, PredApp(names[start], lts.state_terms())))
    logger.debug("game product: %d equation(s)", len(equations))
    return Program(tuple(equations), query)
