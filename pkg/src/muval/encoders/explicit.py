"""Explicit-state reference solvers for the encoders on a bounded state box.

Every state variable ranges over ``[-bound, bound]`` (or both Booleans) and
transitions leaving the box are dropped, which is exactly the domain the
bounded MuCLP evaluator uses. The solvers work on explicit game graphs
held in :mod:`networkx` digraphs.
"""

from __future__ import annotations

import itertools
import logging
from typing import Dict, FrozenSet, Hashable, Iterable, List, Optional, Set, Tuple

import networkx as nx

from ..errors import ObjectiveKindError
from ..logic.ast import Formula, Sort
from ..logic.semantics import eval_formula
from .bisim import BisimQuery, Implication, bisim_params
from .model import BuchiAutomaton, GameSpec, Ltl, Reach, Safety, SymbolicLts, primed

logger = logging.getLogger(__name__)

State = Tuple[object, ...]
EGO = "ego"
ADVERSARY = "adversary"


def box_states(lts: SymbolicLts, bound: int) -> List[State]:
    axes = [
        (False, True) if sort is Sort.BOOL else range(-bound, bound + 1)
        for _, sort in lts.state_vars
    ]
    return list(itertools.product(*axes))


def _env(lts: SymbolicLts, s: State, t: State = ()) -> Dict[str, object]:
    env = {v: value for (v, _), value in zip(lts.state_vars, s)}
    env.update({primed(v): value for (v, _), value in zip(lts.state_vars, t)})
    return env


def holds_at(lts: SymbolicLts, f: Formula, s: State) -> bool:
    return eval_formula(f, _env(lts, s))


def explicit_transitions(
    lts: SymbolicLts, bound: int
) -> Dict[str, Dict[State, List[State]]]:
    """Per label, the successors of every box state that stay in the box."""
    states = box_states(lts, bound)
    out: Dict[str, Dict[State, List[State]]] = {}
    for label in lts.labels:
        rel = lts.relation(label)
        out[label] = {
            s: [t for t in states if eval_formula(rel, _env(lts, s, t))] for s in states
        }
    return out


# --------------------------------------------------------------------------
# Game graphs


class GameGraph:
    """Turn-based game on an explicit digraph.

    The node attribute ``owner`` names the player who moves.
    """

    def __init__(self) -> None:
        self.graph = nx.DiGraph()

    def add_node(self, node: Hashable, owner: str) -> None:
        self.graph.add_node(node, owner=owner)

    def add_edge(self, u: Hashable, v: Hashable) -> None:
        self.graph.add_edge(u, v)

    def nodes(self) -> Set[Hashable]:
        return set(self.graph.nodes)

    def cpre(self, target: Set[Hashable], player: str = EGO) -> Set[Hashable]:
        """Nodes from which ``player`` forces the next node into ``target``.

        A node whose mover has no move is won by the other player.
        """
        out = set()
        for node, owner in self.graph.nodes(data="owner"):
            succ = list(self.graph.successors(node))
            if owner == player:
                if any(s in target for s in succ):
                    out.add(node)
            elif all(s in target for s in succ):
                out.add(node)
        return out

    def attractor(self, target: Set[Hashable], player: str = EGO) -> Set[Hashable]:
        region = set(target)
        while True:
            grown = region | self.cpre(region, player)
            if grown == region:
                return region
            region = grown

    def safe_region(self, safe: Set[Hashable], player: str = EGO) -> Set[Hashable]:
        region = set(safe)
        while True:
            shrunk = safe & self.cpre(region, player)
            if shrunk == region:
                return region
            region = shrunk

    def buchi_region(
        self, accepting: Set[Hashable], player: str = EGO
    ) -> Set[Hashable]:
        """Nodes from which ``player`` forces infinitely many visits to ``accepting``
        (or a dead end of the opponent)."""
        z = self.nodes()
        while True:
            y: Set[Hashable] = set()
            while True:
                grown = (accepting & self.cpre(z, player)) | self.cpre(y, player)
                if grown == y:
                    break
                y = grown
            if y == z:
                return z
            z = y


# --------------------------------------------------------------------------
# Oracles


def _expect(g: GameSpec, kind: type) -> None:
    if not isinstance(g.objective, kind):
        raise ObjectiveKindError(f"expected a {kind.__name__} objective")


def _initial(lts: SymbolicLts, init: Formula, bound: int) -> List[State]:
    return [s for s in box_states(lts, bound) if holds_at(lts, init, s)]


def _round_graph(g: GameSpec, bound: int) -> Tuple[GameGraph, List[State]]:
    """Adversary nodes ``("a", s)`` and ego nodes ``("e", s)``."""
    lts = g.lts
    moves = explicit_transitions(lts, bound)
    game = GameGraph()
    states = box_states(lts, bound)
    for s in states:
        game.add_node(("a", s), ADVERSARY)
        game.add_node(("e", s), EGO)
    for s in states:
        for label in g.adversary_labels:
            for t in moves[label][s]:
                game.add_edge(("a", s), ("e", t))
        for label in g.ego_labels:
            for t in moves[label][s]:
                game.add_edge(("e", s), ("a", t))
    return game, states


def solve_safety_game(g: GameSpec, bound: int) -> bool:
    """Whether the ego player keeps every play from every initial state safe."""
    _expect(g, Safety)
    game, _ = _round_graph(g, bound)
    safe = {n for n in game.nodes() if holds_at(g.lts, g.objective.safe, n[1])}
    region = game.safe_region(safe)
    return all(("a", s) in region for s in _initial(g.lts, g.initial, bound))


def solve_reachability_game(g: GameSpec, bound: int) -> bool:
    """Whether the ego player forces a goal state from every initial state."""
    _expect(g, Reach)
    game, _ = _round_graph(g, bound)
    goal = {n for n in game.nodes() if holds_at(g.lts, g.objective.reach, n[1])}
    region = game.attractor(goal)
    return all(("a", s) in region for s in _initial(g.lts, g.initial, bound))


def adversary_reaches(g: GameSpec, bound: int) -> bool:
    """Whether the adversary forces an unsafe state from some initial state."""
    _expect(g, Safety)
    game, _ = _round_graph(g, bound)
    unsafe = {n for n in game.nodes() if not holds_at(g.lts, g.objective.safe, n[1])}
    region = game.attractor(unsafe, ADVERSARY)
    return any(("a", s) in region for s in _initial(g.lts, g.initial, bound))


def _automaton_game(
    lts: SymbolicLts,
    automaton: BuchiAutomaton,
    bound: int,
    adversary_labels: Iterable[str],
    ego_labels: Optional[Iterable[str]],
) -> Tuple[GameGraph, Set[Hashable]]:
    """Product game; adversary nodes carry whether the round visited ``F``.

    Without ego labels (``None``) each round is one adversary move followed by the
    ego player resolving the automaton's choice.
    """
    moves = explicit_transitions(lts, bound)
    game = GameGraph()
    accepting: Set[Hashable] = set()
    start = [("a", s, automaton.init, True) for s in box_states(lts, bound)]
    stack = list(start)
    for node in start:
        game.add_node(node, ADVERSARY)
    seen = set(start)

    def visit(node: Hashable, owner: str) -> None:
        if node not in seen:
            seen.add(node)
            game.add_node(node, owner)
            stack.append(node)

    while stack:
        node = stack.pop()
        if node[0] == "a":
            _, s, q, flag = node
            if flag:
                accepting.add(node)
            for label in adversary_labels:
                for t in moves[label][s]:
                    nxt = ("e", t, q, label)
                    visit(nxt, EGO)
                    game.add_edge(node, nxt)
            continue
        _, t, q, label = node
        for q1 in automaton.succ(q, label):
            if ego_labels is None:
                nxt = ("a", t, q1, automaton.accepting(q1))
                visit(nxt, ADVERSARY)
                game.add_edge(node, nxt)
                continue
            for ego_label in ego_labels:
                for q2 in automaton.succ(q1, ego_label):
                    flag = automaton.accepting(q1) or automaton.accepting(q2)
                    for u in moves[ego_label][t]:
                        nxt = ("a", u, q2, flag)
                        visit(nxt, ADVERSARY)
                        game.add_edge(node, nxt)
    return game, accepting


def check_buchi(
    lts: SymbolicLts,
    automaton: BuchiAutomaton,
    bound: int,
    init: Optional[Formula] = None,
) -> bool:
    """Whether every execution from ``init`` is accepted, with the automaton
    resolving its choices step by step."""
    init = lts.init if init is None else init
    game, accepting = _automaton_game(lts, automaton, bound, lts.labels, None)
    region = game.buchi_region(accepting)
    starts = _initial(lts, init, bound)
    return all(("a", s, automaton.init, True) in region for s in starts)


def solve_ltl_game(g: GameSpec, bound: int) -> bool:
    """Whether the ego player makes the label sequence of every play accepted."""
    _expect(g, Ltl)
    automaton = g.objective.automaton
    game, accepting = _automaton_game(
        g.lts, automaton, bound, g.adversary_labels, g.ego_labels
    )
    region = game.buchi_region(accepting)
    initial = _initial(g.lts, g.initial, bound)
    return all(("a", s, automaton.init, True) in region for s in initial)


def solve_game(g: GameSpec, bound: int) -> bool:
    if isinstance(g.objective, Safety):
        return solve_safety_game(g, bound)
    if isinstance(g.objective, Reach):
        return solve_reachability_game(g, bound)
    return solve_ltl_game(g, bound)


# --------------------------------------------------------------------------
# Bisimilarity


def bisimilarity(
    lts1: SymbolicLts, lts2: SymbolicLts, bound: int
) -> FrozenSet[Tuple[State, State]]:
    """Largest bisimulation between the two boxed systems, by refinement."""
    moves1 = explicit_transitions(lts1, bound)
    moves2 = explicit_transitions(lts2, bound)
    relation = {
        (s1, s2) for s1 in box_states(lts1, bound) for s2 in box_states(lts2, bound)
    }
    while True:
        kept = set()
        for s1, s2 in relation:
            ok = True
            for label in lts1.labels:
                succ1, succ2 = moves1[label][s1], moves2[label][s2]
                forth = all(any((t1, t2) in relation for t2 in succ2) for t1 in succ1)
                back = all(any((t1, t2) in relation for t1 in succ1) for t2 in succ2)
                if not (forth and back):
                    ok = False
                    break
            if ok:
                kept.add((s1, s2))
        if kept == relation:
            logger.debug("bisimilarity: %d pair(s)", len(kept))
            return frozenset(kept)
        relation = kept


def check_bisimulation(
    lts1: SymbolicLts, lts2: SymbolicLts, query: BisimQuery, bound: int
) -> bool:
    relation = bisimilarity(lts1, lts2, bound)
    if not isinstance(query, Implication):
        return all((tuple(a), tuple(b)) in relation for a, b in query.pairs)
    x1, x2 = bisim_params(lts1, lts2)
    names = [v for v, _ in x1 + x2]
    for s1 in box_states(lts1, bound):
        for s2 in box_states(lts2, bound):
            holds = eval_formula(query.formula, dict(zip(names, s1 + s2)))
            related = (s1, s2) in relation
            if query.direction == "lower" and holds and not related:
                return False
            if query.direction == "upper" and related and not holds:
                return False
    return True
