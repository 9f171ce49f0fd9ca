"""Symbolic transition systems, Büchi automata and game specifications."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, FrozenSet, Iterable, Mapping, Optional, Tuple, Union

from ..errors import LabelMismatchError, SortError
from ..logic.ast import BOT, TOP, Formula, Params, Term, Var, disj
from ..logic.names import NameSupply
from ..logic.transform import free_vars, subst_vars

PRIME = "'"


def primed(name: str) -> str:
    """Name of the post-state copy of state variable ``name``."""
    return name + PRIME


@dataclass(frozen=True)
class SymbolicLts:
    """Labelled transition system over integer/Boolean state vectors.

    Attributes:
        state_vars: Ordered state variables.
        labels: Label alphabet.
        transitions: Per label, a quantifier-free relation over the state
            variables and their primed copies (see :func:`primed`).
        init: Initial-state formula over the state variables.
    """

    state_vars: Params
    labels: Tuple[str, ...]
    transitions: Mapping[str, Formula] = field(default_factory=dict)
    init: Formula = TOP

    def validate(self) -> None:
        names = [v for v, _ in self.state_vars]
        if len(set(names)) != len(names):
            raise SortError("repeated state variable")
        unknown = sorted(set(self.transitions) - set(self.labels))
        if unknown:
            raise LabelMismatchError(
                f"transitions for undeclared label(s) {', '.join(unknown)}"
            )
        allowed = dict(self.state_vars)
        allowed.update({primed(v): s for v, s in self.state_vars})
        for label, rel in self.transitions.items():
            for v, s in free_vars(rel).items():
                if allowed.get(v) is not s:
                    raise SortError(f"transition {label}: unexpected variable {v}")
        for v, s in free_vars(self.init).items():
            if dict(self.state_vars).get(v) is not s:
                raise SortError(f"initial condition: unexpected variable {v}")

    def relation(self, label: str) -> Formula:
        return self.transitions.get(label, BOT)

    def step(
        self, labels: Iterable[str], src: Tuple[Term, ...], dst: Tuple[Term, ...]
    ) -> Formula:
        """``src -> dst`` by any of ``labels``, with the relation instantiated."""
        mapping: Dict[str, Term] = {}
        for (v, _), s, d in zip(self.state_vars, src, dst):
            mapping[v] = s
            mapping[primed(v)] = d
        return disj(*(subst_vars(self.relation(label), mapping) for label in labels))

    def state_terms(self) -> Tuple[Term, ...]:
        return as_terms(self.state_vars)


@dataclass(frozen=True)
class BuchiAutomaton:
    """Non-deterministic Büchi automaton over a finite label alphabet.

    Attributes:
        states: Automaton states, in declaration order.
        labels: Label alphabet; must equal the paired system's.
        delta: ``(state, label) -> successor states``; missing keys are empty.
        init: Initial state.
        final: Accepting states.
    """

    states: Tuple[str, ...]
    labels: Tuple[str, ...]
    delta: Mapping[Tuple[str, str], FrozenSet[str]]
    init: str
    final: FrozenSet[str] = frozenset()

    def validate(self) -> None:
        if self.init not in self.states:
            raise ValueError(f"initial state {self.init} is not a state")
        stray = sorted(self.final - set(self.states))
        if stray:
            raise ValueError(f"final state(s) {', '.join(stray)} are not states")
        for (q, label), targets in self.delta.items():
            if q not in self.states or not targets <= set(self.states):
                raise ValueError(f"transition from {q} on {label} leaves the state set")
            if label not in self.labels:
                raise LabelMismatchError(f"automaton label {label} is not declared")

    def succ(self, q: str, label: str) -> Tuple[str, ...]:
        """Successors in declaration order."""
        targets = self.delta.get((q, label), frozenset())
        return tuple(s for s in self.states if s in targets)

    def accepting(self, q: str) -> bool:
        return q in self.final


@dataclass(frozen=True)
class Safety:
    safe: Formula


@dataclass(frozen=True)
class Reach:
    reach: Formula


@dataclass(frozen=True)
class Ltl:
    automaton: BuchiAutomaton


Objective = Union[Safety, Reach, Ltl]


@dataclass(frozen=True)
class GameSpec:
    """Two-player game played on a transition system.

    The adversary moves first; each round is one adversary move followed by
    one ego move.

    Attributes:
        lts: Arena; its labels are split between the two players.
        ego_labels: Labels of the player whose win is being verified.
        adversary_labels: Labels of the opponent.
        objective: Winning condition for the ego player.
        init: Initial-state formula (defaults to the arena's).
    """

    lts: SymbolicLts
    ego_labels: Tuple[str, ...]
    adversary_labels: Tuple[str, ...]
    objective: Objective
    init: Optional[Formula] = None

    @property
    def initial(self) -> Formula:
        return self.lts.init if self.init is None else self.init

    def validate(self) -> None:
        self.lts.validate()
        ego, adversary = set(self.ego_labels), set(self.adversary_labels)
        if ego & adversary:
            raise LabelMismatchError(
                f"label(s) {', '.join(sorted(ego & adversary))} belong to both players"
            )
        if ego | adversary != set(self.lts.labels):
            raise LabelMismatchError("player labels do not cover the arena's labels")
        if isinstance(self.objective, Ltl):
            self.objective.automaton.validate()
            if set(self.objective.automaton.labels) != set(self.lts.labels):
                raise LabelMismatchError("automaton and arena label sets differ")

    def swapped(self) -> "GameSpec":
        """Same arena with the players' label sets exchanged."""
        return GameSpec(
            self.lts, self.adversary_labels, self.ego_labels, self.objective, self.init
        )



def fresh_copy(params: Params, supply: NameSupply) -> Params:
    """Same sorts under names the supply has not handed out yet."""
    return tuple((supply.fresh(v), s) for v, s in params)


def as_terms(params: Params) -> Tuple[Term, ...]:
    return tuple(Var(v, s) for v, s in params)
