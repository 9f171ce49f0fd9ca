"""Satisfiability of example sets modulo well-foundedness.

Ground instances are handed to the SMT backend with predicate variables as
uninterpreted Boolean functions. A model makes each well-founded variable a
finite edge relation; any simple cycle in it is ruled out with a learnt
clause and the check repeats until the model is acyclic or none is left.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Dict, Hashable, Iterable, List, Sequence, Set, Tuple

import networkx as nx

from ..errors import BudgetExhausted
from ..logic.ast import (
    BoolLit,
    Formula,
    FunSort,
    Holds,
    IntLit,
    Not,
    PredApp,
    Sort,
    Term,
    Var,
    conj,
    disj,
    implies,
    literal,
)
from ..logic.transform import fun_apps, pred_apps, term_sort
from ..pcsp.model import ExampleInstance, PfwCsp, Value
from ..smt.backend import SmtBackend, SmtQuery, Status
from .store import ExampleStore

logger = logging.getLogger(__name__)

Node = Tuple[Value, ...]
Cycle = List[Node]


def _node_key(node: Hashable) -> Tuple:
    if isinstance(node, tuple):
        return tuple((isinstance(v, bool), int(v)) for v in node)
    return ((isinstance(node, bool), int(node)),)


def _rotate(cycle: List[Hashable]) -> List[Hashable]:
    start = min(range(len(cycle)), key=lambda i: _node_key(cycle[i]))
    return cycle[start:] + cycle[:start]


def enumerate_simple_cycles(
    edges: Iterable[Tuple[Hashable, Hashable]]
) -> List[List[Hashable]]:
    """Every elementary cycle once, starting at its least node.

    Cycles are ordered by length and then by their nodes; self-loops count
    as cycles of length one.
    """
    graph = nx.DiGraph()
    graph.add_edges_from(edges)
    cycles = [_rotate(list(c)) for c in nx.simple_cycles(graph)]
    cycles.sort(key=lambda c: (len(c), [_node_key(n) for n in c]))
    return cycles


@dataclass
class UnsatCheck:
    """Outcome of :func:`check_examples_unsat`.

    Attributes:
        status: ``UNSAT`` when no well-founded model exists, ``SAT`` when an
            acyclic assignment was found, ``UNKNOWN`` on backend failure.
        assignment: Truth value of every ground atom when ``SAT``.
        learnt: Cycles ruled out, per well-founded variable.
        reason: Backend message for ``UNKNOWN``.
    """

    status: Status
    assignment: Dict[PredApp, bool] = field(default_factory=dict)
    learnt: List[Tuple[str, Cycle]] = field(default_factory=list)
    reason: str = ""


def _declarations(
    instances: Sequence[ExampleInstance], problem: PfwCsp
) -> Dict[str, FunSort]:
    funs: Dict[str, FunSort] = {}
    for ex in instances:
        f = ex.clause.as_formula()
        for app in pred_apps(f):
            funs[app.name] = problem.preds.get(
                app.name, FunSort(tuple(term_sort(a) for a in app.args), Sort.PROP)
            )
        for fapp in fun_apps(f):
            funs[fapp.name] = problem.funs.get(
                fapp.name, FunSort(tuple(term_sort(a) for a in fapp.args), fapp.sort)
            )
    return funs


def _atoms(instances: Sequence[ExampleInstance]) -> List[PredApp]:
    seen: Dict[PredApp, None] = {}
    for ex in instances:
        for app in ex.clause.pos + ex.clause.neg:
            seen.setdefault(app, None)
    return list(seen)


def _cycle_clause(name: str, cycle: Cycle) -> Formula:
    steps = zip(cycle, cycle[1:] + cycle[:1])
    return disj(
        *(Not(PredApp(name, tuple(literal(v) for v in x + y))) for x, y in steps)
    )


def check_examples_unsat(
    store: ExampleStore,
    problem: PfwCsp,
    backend: SmtBackend,
    max_rounds: int = 100,
) -> UnsatCheck:
    """Decide whether the stored instances have a well-founded model.

    Raises:
        BudgetExhausted: If more than ``max_rounds`` learning rounds are needed.
    """
    instances = [ex for ex in store.instances if not ex.trivially_true]
    if not instances:
        return UnsatCheck(Status.SAT)
    atoms = _atoms(instances)
    flags = {atom: Var(f"atom!{i}", Sort.BOOL) for i, atom in enumerate(atoms)}
    consts = {v.name: Sort.BOOL for v in flags.values()}
    base: List[Tuple[str, Formula]] = [
        (f"ex!{i}", ex.clause.as_formula()) for i, ex in enumerate(instances)
    ]
    # atom!i is equivalent to its atom, so its value can be read back
    for atom, var in flags.items():
        same = conj(implies(Holds(var), atom), implies(atom, Holds(var)))
        base.append((f"def!{var.name}", same))
    requested: List[Term] = list(flags.values())
    wf_atoms = [a for a in atoms if a.name in problem.wf]
    for atom in wf_atoms:
        for arg in atom.args:
            if not isinstance(arg, (IntLit, BoolLit)) and arg not in requested:
                requested.append(arg)
    funs = _declarations(instances, problem)
    learnt: List[Tuple[str, Cycle]] = []
    for round_no in range(max_rounds):
        assertions = base + [(None, _cycle_clause(n, c)) for n, c in learnt]
        query = SmtQuery(
            consts=consts,
            funs=funs,
            assertions=assertions,
            logic="QF_UFLIA",
            values=tuple(requested),
        )
        outcome = backend.check_sat_named(query)
        if outcome.status is Status.UNSAT:
            logger.debug("examples unsat after %d learnt cycle(s)", len(learnt))
            return UnsatCheck(Status.UNSAT, learnt=learnt)
        if outcome.status is Status.UNKNOWN:
            return UnsatCheck(Status.UNKNOWN, learnt=learnt, reason=outcome.reason)
        assignment = {atom: bool(outcome.values[flags[atom]]) for atom in atoms}
        new_cycles = _cycles_of(wf_atoms, assignment, outcome.values)
        if not new_cycles:
            logger.debug(
                "examples satisfiable at example scale (round %d)", round_no + 1
            )
            return UnsatCheck(Status.SAT, assignment=assignment, learnt=learnt)
        learnt.extend(new_cycles)
    raise BudgetExhausted(f"no acyclic example model after {max_rounds} rounds")


def _cycles_of(
    wf_atoms: Sequence[PredApp],
    assignment: Dict[PredApp, bool],
    values: Dict[Term, Value],
) -> List[Tuple[str, Cycle]]:
    edges: Dict[str, Set[Tuple[Node, Node]]] = {}
    for atom in wf_atoms:
        if not assignment[atom]:
            continue
        point = tuple(
            a.value if isinstance(a, (IntLit, BoolLit)) else values[a]
            for a in atom.args
        )
        half = len(point) // 2
        edges.setdefault(atom.name, set()).add((point[:half], point[half:]))
    out: List[Tuple[str, Cycle]] = []
    for name in sorted(edges):
        for cycle in enumerate_simple_cycles(edges[name]):
            out.append((name, cycle))
    return out
