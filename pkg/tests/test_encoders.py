"""Tests for the verification encoders, their text formats and explicit oracles."""

from __future__ import annotations

import pytest

from muval.encoders import (
    Implication,
    Pairs,
    Reach,
    cinderella_game,
    check_bisimulation,
    check_buchi,
    counter_lts,
    encode_bisimulation,
    encode_buchi,
    encode_ltl_game,
    encode_reachability_game,
    encode_safety_game,
    equation_order,
    finite_lts,
    gf_restore_game,
    load_game,
    parse_buchi,
    parse_game,
    parse_lts,
    solve_game,
    stepmother_game,
)
from muval.encoders.explicit import adversary_reaches, solve_safety_game
from muval.errors import LabelMismatchError, ObjectiveKindError, ParseError, SortError
from muval.logic import (
    BOT,
    TOP,
    Fixpoint,
    Sort,
    Verdict,
    bounded_evaluate,
    parse_formula,
)
from muval.logic.wellformed import check_wellformed

INFINITELY_OFTEN_A = """\
states q0, q1;
initial q0;
final q0;
q0 -a-> q0;
q1 -a-> q0;
q0 -*-> q1;
q1 -*-> q1;
"""

SAFE_GAME = """\
# the adversary pushes x up, the ego player pulls it back
vars x: int;
ego down;
adversary up, stay;
trans up: x' = x + 1;
trans stay: x' = x;
trans down: x' = x - 1 \\/ x' = x;
init: x = 0;
safe: x <= 1;
"""


def _verdict(holds: bool) -> Verdict:
    return Verdict.VALID if holds else Verdict.INVALID


def test_parse_lts() -> None:
    """Test reading an .lts text with primed post-state variables."""
    lts = parse_lts(
        "vars x: int, y: int;\n"
        "trans plus: x + 1 <= y /\\ x' = x + 1 /\\ y' = y;\n"
        "trans minus: x - 1 >= y /\\ x' = x - 1 /\\ y' = y;\n"
        "init: x = 0;\n"
    )
    assert lts.state_vars == (("x", Sort.INT), ("y", Sort.INT))
    assert lts.labels == ("plus", "minus")
    assert lts.init == parse_formula("x = 0", {"x": Sort.INT})


def test_parse_lts_defaults() -> None:
    """Test that labels default to the transition labels and init to true."""
    lts = parse_lts("vars s: int;\nlabels a, b;\ntrans a: s' = s;\n")
    assert lts.labels == ("a", "b")
    assert lts.relation("b") == BOT
    assert lts.init == TOP


@pytest.mark.parametrize(
    "text,error",
    [
        ("trans a: true;", ParseError),
        ("vars x: int;\nlabels a;\ntrans b: x' = x;", LabelMismatchError),
        ("vars x: int;\ntrans a: x' = y;", SortError),
        ("vars x: int\ntrans a: x' = x;", ParseError),
    ],
)
def test_parse_lts_rejects(text: str, error: type) -> None:
    """Test the errors raised for malformed systems."""
    with pytest.raises(error):
        parse_lts(text)


def test_parse_buchi_wildcard() -> None:
    """Test that a wildcard edge covers only labels without their own edge."""
    automaton = parse_buchi(INFINITELY_OFTEN_A, ("a", "b"))
    assert automaton.init == "q0"
    assert automaton.final == frozenset({"q0"})
    assert automaton.succ("q0", "a") == ("q0",)
    assert automaton.succ("q0", "b") == ("q1",)
    assert automaton.succ("q1", "a") == ("q0",)


def test_parse_buchi_unknown_label() -> None:
    """Test that edges must use the system's labels."""
    with pytest.raises(LabelMismatchError):
        parse_buchi("states q;\ninitial q;\nq -c-> q;\n", ("a", "b"))


def test_parse_game(tmp_path) -> None:
    """Test reading a safety game from a file."""
    path = tmp_path / "pull.game"
    path.write_text(SAFE_GAME, encoding="utf-8")
    game = load_game(path)
    assert game.ego_labels == ("down",)
    assert game.adversary_labels == ("up", "stay")
    assert game.objective.safe == parse_formula("x <= 1", {"x": Sort.INT})


def test_parse_game_with_automaton() -> None:
    """Test an inline automaton objective."""
    automaton = INFINITELY_OFTEN_A.replace("-a->", "-down->")
    text = SAFE_GAME.replace("safe: x <= 1;\n", "automaton\n" + automaton)
    game = parse_game(text)
    assert game.objective.automaton.succ("q1", "down") == ("q0",)
    assert game.objective.automaton.succ("q1", "up") == ("q1",)


@pytest.mark.parametrize(
    "text",
    [
        SAFE_GAME + "reach: x = 0;\n",
        SAFE_GAME.replace("safe: x <= 1;\n", ""),
    ],
)
def test_parse_game_needs_one_objective(text: str) -> None:
    """Test that a game has exactly one objective."""
    with pytest.raises(ParseError):
        parse_game(text)


def test_parse_game_label_partition() -> None:
    """Test that the players' labels must partition the arena's."""
    with pytest.raises(LabelMismatchError):
        parse_game(SAFE_GAME.replace("adversary up, stay;", "adversary up;"))


def test_equation_order_puts_nu_first_in_a_component() -> None:
    """Test that greatest fixpoints lead inside a strongly connected component."""
    q0 = ("q0", Fixpoint.MU)
    q1 = ("q1", Fixpoint.NU)
    assert equation_order([q0, q1], [(q0, q1), (q1, q0)]) == [q1, q0]


def test_equation_order_reverse_topological() -> None:
    """Test that components come in reverse topological order."""
    q0 = ("q0", Fixpoint.NU)
    q1 = ("q1", Fixpoint.MU)
    assert equation_order([q0, q1], [(q0, q1)]) == [q1, q0]


def test_encode_buchi_heads() -> None:
    """Test the product equations of a two-state automaton."""
    lts = finite_lts({"a": [(0, 1), (1, 0)], "b": [(2, 2)]}, init=[0])
    program = encode_buchi(lts, parse_buchi(INFINITELY_OFTEN_A, lts.labels))
    check_wellformed(program)
    heads = {eq.head: eq.kind for eq in program.equations}
    assert heads["acc_q0_nu"] is Fixpoint.NU
    assert heads["acc_q1_mu"] is Fixpoint.MU
    assert program.equations[0].kind is Fixpoint.NU


def test_encode_buchi_label_mismatch() -> None:
    """Test that the automaton must share the system's alphabet."""
    lts = finite_lts({"a": [(0, 0)]})
    automaton = parse_buchi("states q;\ninitial q;\nq -*-> q;\n", ("a", "b"))
    with pytest.raises(LabelMismatchError):
        encode_buchi(lts, automaton)


@pytest.mark.parametrize(
    "edges,expected",
    [
        ({"a": [(0, 1), (1, 0)], "b": [(2, 2)]}, True),
        ({"a": [(0, 1), (1, 0)], "b": [(1, 2), (2, 2)]}, False),
        ({"a": [(0, 1)], "b": [(1, 1)]}, False),
    ],
)
def test_buchi_encoding_matches_oracle(edges: dict, expected: bool) -> None:
    """Test 'infinitely often a' against the explicit product check."""
    lts = finite_lts(edges, init=[0])
    automaton = parse_buchi(INFINITELY_OFTEN_A, lts.labels)
    assert check_buchi(lts, automaton, 2) is expected
    assert bounded_evaluate(encode_buchi(lts, automaton), 2) is _verdict(expected)


def test_buchi_on_counter_system() -> None:
    """Test that the counter system only ever takes finitely many steps."""
    lts = counter_lts()
    automaton = parse_buchi(
        "states q0, q1;\ninitial q0;\nfinal q0;\nq0 -*-> q1;\nq1 -*-> q1;\n", lts.labels
    )
    init = parse_formula("x = 0 /\\ y = 1", {"x": Sort.INT, "y": Sort.INT})
    expected = check_buchi(lts, automaton, 1, init=init)
    assert expected
    verdict = bounded_evaluate(encode_buchi(lts, automaton, init=init), 1)
    assert verdict is _verdict(expected)


def test_safety_game_matches_oracle() -> None:
    """Test the pull-back game against the explicit safe region."""
    game = parse_game(SAFE_GAME)
    program = encode_safety_game(game)
    assert [eq.head for eq in program.equations] == ["sg"]
    assert program.equations[0].kind is Fixpoint.NU
    for bound in (1, 2):
        assert bounded_evaluate(program, bound) is _verdict(solve_game(game, bound))


def test_safety_game_duality() -> None:
    """Test that exactly one player wins a bounded safety game."""
    game = parse_game(SAFE_GAME)
    for bound in (1, 2):
        assert adversary_reaches(game, bound) is not solve_safety_game(game, bound)


def test_reachability_game_matches_oracle() -> None:
    """Test a reachability objective on the same arena."""
    game = parse_game(SAFE_GAME.replace("safe: x <= 1;", "reach: x = 1;"))
    assert isinstance(game.objective, Reach)
    program = encode_reachability_game(game)
    assert program.equations[0].kind is Fixpoint.MU
    for bound in (1, 2):
        assert bounded_evaluate(program, bound) is _verdict(solve_game(game, bound))


def test_objective_kind_is_checked() -> None:
    """Test that each game encoder rejects the other objectives."""
    game = parse_game(SAFE_GAME)
    with pytest.raises(ObjectiveKindError):
        encode_reachability_game(game)
    with pytest.raises(ObjectiveKindError):
        encode_ltl_game(game)


def test_ltl_game_matches_oracle() -> None:
    """Test the restore game against the explicit Büchi game."""
    game = gf_restore_game()
    program = encode_ltl_game(game)
    check_wellformed(program)
    assert all(eq.head.startswith("win_") for eq in program.equations)
    for bound in (1, 2):
        assert bounded_evaluate(program, bound) is _verdict(solve_game(game, bound))


@pytest.mark.slow
@pytest.mark.parametrize("capacity", [0, 1])
def test_bucket_games_match_oracle(capacity: int) -> None:
    """Test both bucket games on a small arena."""
    for game, encode in (
        (cinderella_game(capacity, buckets=3), encode_safety_game),
        (stepmother_game(capacity, buckets=3), encode_reachability_game),
    ):
        expected = solve_game(game, 1)
        assert bounded_evaluate(encode(game), 1) is _verdict(expected)


LOOP = finite_lts({"a": [(0, 1), (1, 0)]})
SELF_LOOP = finite_lts({"a": [(0, 0)]})
DEAD_END = finite_lts({"a": [(0, 1)]})
PAIR_VARS = {"s1": Sort.INT, "s2": Sort.INT}


@pytest.mark.parametrize(
    "other,pairs",
    [
        (SELF_LOOP, (((0,), (0,)),)),
        (SELF_LOOP, (((1,), (0,)), ((0,), (0,)))),
        (DEAD_END, (((0,), (0,)),)),
        (DEAD_END, (((1,), (1,)),)),
    ],
)
def test_bisimulation_pairs_match_oracle(other, pairs) -> None:
    """Test ground bisimilarity queries against partition refinement."""
    query = Pairs(pairs)
    program = encode_bisimulation(LOOP, other, query)
    assert program.equations[0].head == "bisim"
    expected = check_bisimulation(LOOP, other, query, 1)
    assert bounded_evaluate(program, 1) is _verdict(expected)


@pytest.mark.parametrize(
    "text,direction",
    [
        ("s1 = 0 /\\ s2 = 0", "lower"),
        ("s1 >= 0 /\\ s2 = 0", "lower"),
        ("s1 = 0 \\/ s1 = 1", "upper"),
        ("s2 = 0", "upper"),
    ],
)
def test_bisimulation_bounds_match_oracle(text: str, direction: str) -> None:
    """Test implication queries in both directions."""
    query = Implication(parse_formula(text, PAIR_VARS), direction)
    program = encode_bisimulation(LOOP, SELF_LOOP, query)
    if direction == "upper":
        assert program.equations[0].head == "bisim_neg"
        assert program.equations[0].kind is Fixpoint.MU
    expected = check_bisimulation(LOOP, SELF_LOOP, query, 1)
    assert bounded_evaluate(program, 1) is _verdict(expected)


def test_bisimulation_needs_shared_labels() -> None:
    """Test that both systems must use the same alphabet."""
    with pytest.raises(LabelMismatchError):
        encode_bisimulation(LOOP, finite_lts({"b": [(0, 0)]}), Pairs(()))
