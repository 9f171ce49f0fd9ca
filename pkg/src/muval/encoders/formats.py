"""Structured text formats for transition systems, automata and games.

All three formats are sequences of ``;``-terminated sections; formulas use
the MuCLP expression syntax, with ``x'`` naming the post-state copy of state
variable ``x`` inside ``trans`` sections. ``#`` starts a comment.

``.lts``::

    vars x: int, y: int;
    labels plus, minus;            # optional, defaults to the trans labels
    trans plus: x + 1 <= y /\\ x' = x + 1 /\\ y' = y;
    init: x = 0;                   # optional

``.buchi``::

    states q0, q1;
    initial q0;
    final q0;
    q0 -restore-> q0;
    q0 -*-> q1;                    # * = every label without its own edge

``.game`` is an ``.lts`` plus ``ego``/``adversary`` label lists and exactly
one objective: ``safe: <formula>;``, ``reach: <formula>;`` or an inline
automaton introduced by ``automaton`` and followed by ``.buchi`` sections.
Several ``trans`` sections for one label are disjoined.
"""

from __future__ import annotations

from pathlib import Path
from typing import Dict, FrozenSet, List, Optional, Set, Tuple, Union

import pyparsing as pp

from ..errors import LabelMismatchError, ParseError
from ..logic.ast import TOP, Formula, Sort, disj
from ..logic.parser import parse_formula
from .model import BuchiAutomaton, GameSpec, Ltl, Reach, Safety, SymbolicLts, primed

WILDCARD = "*"


def _build_grammar() -> Dict[str, pp.ParserElement]:
    COLON, COMMA, SEMI = map(pp.Suppress, ":,;")
    ident = pp.Regex(r"[A-Za-z_][A-Za-z0-9_]*").set_name("identifier")
    names = pp.Group(ident + pp.ZeroOrMore(COMMA + ident))
    sort = pp.Keyword("int") | pp.Keyword("bool")
    var = pp.Group(ident + COLON + sort)
    body = pp.SkipTo(SEMI)

    def located(kind: str):
        def action(s: str, loc: int, toks: pp.ParseResults):
            return [(kind, pp.lineno(loc, s), tuple(toks))]

        return action

    def section(keyword: str, rest: pp.ParserElement) -> pp.ParserElement:
        element = pp.Suppress(pp.Keyword(keyword)) + rest + SEMI
        return element.set_parse_action(located(keyword))

    lts_sections = [
        section("vars", pp.Group(var + pp.ZeroOrMore(COMMA + var))),
        section("labels", names),
        section("trans", ident + COLON + body),
        section("init", COLON + body),
    ]
    label = ident | pp.Literal(WILDCARD)
    edge = ident + pp.Suppress("-") + label + pp.Suppress("->") + ident + SEMI
    edge.set_parse_action(located("edge"))
    buchi_sections = [
        section("states", names),
        section("initial", ident),
        section("final", pp.Opt(names, default=[])),
        edge,
    ]
    game_sections = [
        section("ego", names),
        section("adversary", names),
        section("safe", COLON + body),
        section("reach", COLON + body),
        pp.Keyword("automaton").set_parse_action(located("automaton")),
    ]
    comment = pp.Regex(r"#.*")
    grammars = {
        "lts": pp.ZeroOrMore(pp.MatchFirst(lts_sections)),
        "buchi": pp.ZeroOrMore(pp.MatchFirst(buchi_sections)),
        "game": pp.ZeroOrMore(
            pp.MatchFirst(game_sections + buchi_sections + lts_sections)
        ),
    }
    for element in grammars.values():
        element.ignore(comment)
    return {k: v + pp.StringEnd() for k, v in grammars.items()}


_GRAMMAR = _build_grammar()

Section = Tuple[str, int, tuple]


def _sections(which: str, text: str) -> List[Section]:
    try:
        return list(_GRAMMAR[which].parse_string(text, parse_all=True))
    except pp.ParseException as exc:
        raise ParseError(exc.msg, exc.lineno, exc.col) from None


def _formula(text: str, variables: Dict[str, Sort], line: int) -> Formula:
    try:
        return parse_formula(text.strip(), variables, preds={}, funs={})
    except ParseError as exc:
        raise ParseError(f"in section at line {line}: {exc}") from None


def _lts(sections: List[Section]) -> SymbolicLts:
    state_vars: List[Tuple[str, Sort]] = []
    declared: Optional[List[str]] = None
    raw_trans: List[Tuple[str, str, int]] = []
    init: Formula = TOP
    init_text: Optional[Tuple[str, int]] = None
    for kind, line, toks in sections:
        if kind == "vars":
            state_vars.extend((name, Sort(sort)) for name, sort in toks[0])
        elif kind == "labels":
            declared = list(toks[0])
        elif kind == "trans":
            raw_trans.append((toks[0], toks[1], line))
        elif kind == "init":
            init_text = (toks[0], line)
    if not state_vars:
        raise ParseError("missing vars section")
    plain = dict(state_vars)
    both = {**plain, **{primed(v): s for v, s in state_vars}}
    per_label: Dict[str, List[Formula]] = {}
    for label, text, line in raw_trans:
        per_label.setdefault(label, []).append(_formula(text, both, line))
    labels = declared if declared is not None else list(dict.fromkeys(per_label))
    if init_text is not None:
        init = _formula(init_text[0], plain, init_text[1])
    lts = SymbolicLts(
        tuple(state_vars),
        tuple(labels),
        {label: disj(*rels) for label, rels in per_label.items()},
        init,
    )
    lts.validate()
    return lts


def _automaton(sections: List[Section], labels: Tuple[str, ...]) -> BuchiAutomaton:
    states: List[str] = []
    initial: Optional[str] = None
    final: Set[str] = set()
    explicit: Dict[Tuple[str, str], Set[str]] = {}
    wildcard: Dict[str, Set[str]] = {}
    for kind, line, toks in sections:
        if kind == "states":
            states.extend(toks[0])
        elif kind == "initial":
            initial = toks[0]
        elif kind == "final":
            final.update(toks[0] if toks else ())
        elif kind == "edge":
            src, label, dst = toks
            if label == WILDCARD:
                wildcard.setdefault(src, set()).add(dst)
            elif label not in labels:
                raise LabelMismatchError(
                    f"automaton label {label} (line {line}) is not declared"
                )
            else:
                explicit.setdefault((src, label), set()).add(dst)
    if initial is None:
        raise ParseError("missing initial section")
    delta: Dict[Tuple[str, str], FrozenSet[str]] = {
        key: frozenset(targets) for key, targets in explicit.items()
    }
    for src, targets in wildcard.items():
        for label in labels:
            if (src, label) not in explicit:
                delta[(src, label)] = frozenset(targets)
    automaton = BuchiAutomaton(
        tuple(states), tuple(labels), delta, initial, frozenset(final)
    )
    automaton.validate()
    return automaton


def parse_lts(text: str) -> SymbolicLts:
    """Parse an ``.lts`` text.

    Raises:
        ParseError: On syntax errors or a missing ``vars`` section.
        SortError: On ill-sorted formulas.
        LabelMismatchError: If a transition uses an undeclared label.
    """
    return _lts(_sections("lts", text))


def parse_buchi(text: str, labels: Tuple[str, ...]) -> BuchiAutomaton:
    """Parse a ``.buchi`` text over the given label alphabet."""
    return _automaton(_sections("buchi", text), labels)


def parse_game(text: str) -> GameSpec:
    """Parse a ``.game`` text.

    Raises:
        ParseError: On syntax errors or when not exactly one objective is given.
        LabelMismatchError: If the player labels do not partition the arena's.
    """
    sections = _sections("game", text)
    split = next(
        (i for i, s in enumerate(sections) if s[0] == "automaton"), len(sections)
    )
    head, tail = sections[:split], sections[split + 1 :]
    lts = _lts([s for s in head if s[0] in ("vars", "labels", "trans", "init")])
    ego: List[str] = []
    adversary: List[str] = []
    objectives: List[Union[Safety, Reach, Ltl]] = []
    plain = dict(lts.state_vars)
    for kind, line, toks in head:
        if kind == "ego":
            ego.extend(toks[0])
        elif kind == "adversary":
            adversary.extend(toks[0])
        elif kind == "safe":
            objectives.append(Safety(_formula(toks[0], plain, line)))
        elif kind == "reach":
            objectives.append(Reach(_formula(toks[0], plain, line)))
        elif kind in ("states", "initial", "final", "edge"):
            raise ParseError(f"automaton section before 'automaton' (line {line})")
    if split < len(sections):
        automaton_kinds = ("states", "initial", "final", "edge")
        misplaced = [s for s in tail if s[0] not in automaton_kinds]
        if misplaced:
            kind, line, _ = misplaced[0]
            raise ParseError(f"'{kind}' inside the automaton (line {line})")
        objectives.append(Ltl(_automaton(tail, lts.labels)))
    if len(objectives) != 1:
        raise ParseError(f"expected exactly one objective, found {len(objectives)}")
    game = GameSpec(lts, tuple(ego), tuple(adversary), objectives[0])
    game.validate()
    return game


def load_lts(path: Union[str, Path]) -> SymbolicLts:
    return parse_lts(Path(path).read_text(encoding="utf-8"))


def load_buchi(path: Union[str, Path], labels: Tuple[str, ...]) -> BuchiAutomaton:
    return parse_buchi(Path(path).read_text(encoding="utf-8"), labels)


def load_game(path: Union[str, Path]) -> GameSpec:
    return parse_game(Path(path).read_text(encoding="utf-8"))
