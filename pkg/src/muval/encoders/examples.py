"""Ready-made systems and games used by the tests and the documentation."""

from __future__ import annotations

from typing import Dict, Iterable, Mapping, Sequence, Tuple

from ..logic.ast import TOP, Cmp, Formula, IntLit, Sort, Var, add, conj, disj
from .model import BuchiAutomaton, GameSpec, Ltl, Reach, Safety, SymbolicLts, primed


def _v(name: str) -> Var:
    return Var(name, Sort.INT)


def _eq(a, b) -> Formula:
    return Cmp("=", a, b)


def counter_lts() -> SymbolicLts:
    """States ``(x, y)``; ``plus`` moves ``x`` up towards ``y``, ``minus`` down."""
    x, y, x1, y1 = _v("x"), _v("y"), _v(primed("x")), _v(primed("y"))
    plus = conj(
        Cmp("<=", add(x, IntLit(1)), y), _eq(x1, add(x, IntLit(1))), _eq(y1, y)
    )
    minus = conj(
        Cmp(">=", add(x, IntLit(-1)), y), _eq(x1, add(x, IntLit(-1))), _eq(y1, y)
    )
    return SymbolicLts(
        (("x", Sort.INT), ("y", Sort.INT)),
        ("plus", "minus"),
        {"plus": plus, "minus": minus},
    )


def finite_lts(
    edges: Mapping[str, Iterable[Tuple[int, int]]],
    init: Iterable[int] = (),
    var: str = "s",
) -> SymbolicLts:
    """Single-variable system whose transitions are listed explicitly."""
    s, s1 = _v(var), _v(primed(var))
    transitions: Dict[str, Formula] = {
        label: disj(*(conj(_eq(s, IntLit(a)), _eq(s1, IntLit(b))) for a, b in pairs))
        for label, pairs in edges.items()
    }
    start = list(init)
    initial = disj(*(_eq(s, IntLit(n)) for n in start)) if start else TOP
    return SymbolicLts(((var, Sort.INT),), tuple(edges), transitions, initial)


def gf_restore_game() -> GameSpec:
    """The ego player must ``restore`` infinitely often, which it can only do at 0.

    The adversary may ``break`` away from 0 to any other value or ``skip``;
    the ego player answers with ``incr``, ``decr`` or ``restore``.
    """
    x, x1 = _v("x"), _v(primed("x"))
    zero = IntLit(0)
    transitions = {
        "restore": conj(_eq(x, zero), _eq(x1, zero)),
        "incr": _eq(x1, add(x, IntLit(1))),
        "decr": _eq(x1, add(x, IntLit(-1))),
        "break": conj(_eq(x, zero), Cmp("!=", x1, zero)),
        "skip": _eq(x1, x),
    }
    labels = tuple(transitions)
    lts = SymbolicLts((("x", Sort.INT),), labels, transitions, _eq(x, zero))
    delta = {}
    for q in ("q0", "q1"):
        for label in labels:
            delta[(q, label)] = frozenset({"q0" if label == "restore" else "q1"})
    automaton = BuchiAutomaton(("q0", "q1"), labels, delta, "q0", frozenset({"q0"}))
    return GameSpec(lts, ("restore", "incr", "decr"), ("break", "skip"), Ltl(automaton))


def _buckets(n: int, suffix: str = "") -> Sequence[Var]:
    return [_v(f"b{i}{suffix}") for i in range(n)]


def _bucket_lts(c: int, n: int) -> SymbolicLts:
    b = _buckets(n)
    b1 = [_v(primed(v.name)) for v in b]
    cap = IntLit(c)
    poured = _eq(add(IntLit(1), *b), add(*b1))
    rising = [Cmp("<=", bi, bj) for bi, bj in zip(b, b1)]
    sm = conj(poured, *rising, *(Cmp("<=", bj, cap) for bj in b1))
    ov = conj(poured, *rising, disj(*(Cmp(">", bj, cap) for bj in b1)))
    emptied = []
    for i in range(n):
        k = (i + 1) % n
        kept = [_eq(b1[j], b[j]) for j in range(n) if j not in (i, k)]
        emptied.append(conj(_eq(b1[i], IntLit(0)), _eq(b1[k], IntLit(0)), *kept))
    init = conj(*(_eq(bi, IntLit(0)) for bi in b))
    return SymbolicLts(
        tuple((v.name, Sort.INT) for v in b),
        ("sm", "ov", "cd"),
        {"sm": sm, "ov": ov, "cd": disj(*emptied)},
        init,
    )


def cinderella_game(c: int, buckets: int = 5) -> GameSpec:
    """Safety game for the bucket-emptying player with bucket capacity ``c``.

    The opponent pours one unit spread over the buckets; the ego player
    empties two adjacent buckets. No bucket may ever exceed ``c``.
    """
    lts = _bucket_lts(c, buckets)
    safe = conj(*(Cmp("<=", bi, IntLit(c)) for bi in _buckets(buckets)))
    return GameSpec(lts, ("cd",), ("sm", "ov"), Safety(safe))


def stepmother_game(c: int, buckets: int = 5) -> GameSpec:
    """The same arena as a reachability game for the pouring player."""
    lts = _bucket_lts(c, buckets)
    overflow = disj(*(Cmp(">", bi, IntLit(c)) for bi in _buckets(buckets)))
    return GameSpec(lts, ("sm", "ov"), ("cd",), Reach(overflow))
