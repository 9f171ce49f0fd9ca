"""Linear-time verification of a transition system against a Büchi automaton.

For each automaton state ``q`` and fixpoint kind ``a`` the predicate
``Z[q, a](x)`` holds of the system states from which every execution is
accepted when the automaton is started in ``q``::

    Z[q, a](x) =a  /\\_l forall y. x -l-> y
                       => \\/_{q' in delta(q, l)} Z[q', kind(q')](y)

with ``kind(q') = nu`` exactly when ``q'`` is accepting, so an accepting
state must be entered infinitely often. The query is
``forall x. init(x) => Z[q_init, nu](x)``.
"""

from __future__ import annotations

import logging
from typing import Callable, Dict, Hashable, Iterable, List, Optional, Sequence, Tuple

import networkx as nx

from ..errors import LabelMismatchError
from ..logic.ast import (
    BOT,
    Equation,
    Fixpoint,
    Formula,
    PredApp,
    Program,
    conj,
    disj,
    forall,
    implies,
)
from ..logic.names import NameSupply
from .model import BuchiAutomaton, SymbolicLts, as_terms, fresh_copy

logger = logging.getLogger(__name__)

Node = Tuple[str, Fixpoint]


def kind_of(automaton: BuchiAutomaton, q: str) -> Fixpoint:
    return Fixpoint.NU if automaton.accepting(q) else Fixpoint.MU


def reachable_nodes(
    start: Node, successors: Callable[[Node], Iterable[Node]]
) -> Tuple[List[Node], List[Tuple[Node, Node]]]:
    """Nodes reachable from ``start`` in discovery order, with their edges."""
    order: List[Node] = [start]
    seen = {start}
    edges: List[Tuple[Node, Node]] = []
    i = 0
    while i < len(order):
        node = order[i]
        i += 1
        for nxt in successors(node):
            edges.append((node, nxt))
            if nxt not in seen:
                seen.add(nxt)
                order.append(nxt)
    return order, edges


def equation_order(
    nodes: Sequence[Node], edges: Iterable[Tuple[Hashable, Hashable]]
) -> List[Node]:
    """Order mixed-kind equations for nested-fixpoint evaluation.

    Strongly connected components of the dependency graph come in reverse
    topological order; inside a component, greatest fixpoints precede
    least fixpoints so that ``nu`` is the outer one.
    """
    graph = nx.DiGraph()
    graph.add_nodes_from(nodes)
    graph.add_edges_from(edges)
    position = {n: i for i, n in enumerate(nodes)}
    condensed = nx.condensation(graph)
    ordered: List[Node] = []
    for component in reversed(list(nx.topological_sort(condensed))):
        members = condensed.nodes[component]["members"]
        ordered.extend(
            sorted(members, key=lambda n: (n[1] is not Fixpoint.NU, position[n]))
        )
    return ordered


def head_names(
    nodes: Iterable[Node], prefix: str, supply: NameSupply
) -> Dict[Node, str]:
    return {n: supply.fresh(f"{prefix}_{n[0]}_{n[1].value}") for n in nodes}


def encode_buchi(
    lts: SymbolicLts, automaton: BuchiAutomaton, init: Optional[Formula] = None
) -> Program:
    """MuCLP program valid iff every execution from ``init`` is accepted.

    Args:
        lts: System to verify.
        automaton: Property automaton over the system's labels.
        init: Initial states; the system's own ``init`` when omitted.

    Raises:
        LabelMismatchError: If the label sets differ.
    """
    if set(lts.labels) != set(automaton.labels):
        raise LabelMismatchError("automaton and system label sets differ")
    lts.validate()
    automaton.validate()
    init = lts.init if init is None else init

    def successors(node: Node) -> Iterable[Node]:
        q, _ = node
        for label in lts.labels:
            for target in automaton.succ(q, label):
                yield (target, kind_of(automaton, target))

    start = (automaton.init, Fixpoint.NU)
    nodes, edges = reachable_nodes(start, successors)
    supply = NameSupply(v for v, _ in lts.state_vars)
    names = head_names(nodes, "acc", supply)
    x = lts.state_vars
    y = fresh_copy(x, supply)
    equations = []
    for node in equation_order(nodes, edges):
        q, kind = node
        parts = []
        for label in lts.labels:
            if lts.relation(label) == BOT:
                continue
            targets = [
                PredApp(names[(t, kind_of(automaton, t))], as_terms(y))
                for t in automaton.succ(q, label)
            ]
            step = lts.step([label], lts.state_terms(), as_terms(y))
            parts.append(forall(y, implies(step, disj(*targets))))
        equations.append(Equation(names[node], x, kind, conj(*parts)))
    query = forall(x, implies(init, PredApp(names[start], lts.state_terms())))
    logger.debug("Büchi product: %d equation(s)", len(equations))
    return Program(tuple(equations), query)
