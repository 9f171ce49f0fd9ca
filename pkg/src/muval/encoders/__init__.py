"""Translations of verification problems into MuCLP, plus explicit-state oracles."""

from .bisim import BisimQuery, Implication, Pairs, bisim_params, encode_bisimulation
from .buchi import encode_buchi, equation_order
from .examples import (
    cinderella_game,
    counter_lts,
    finite_lts,
    gf_restore_game,
    stepmother_game,
)
from .explicit import (
    GameGraph,
    bisimilarity,
    check_bisimulation,
    check_buchi,
    solve_game,
)
from .formats import load_buchi, load_game, load_lts, parse_buchi, parse_game, parse_lts
from .games import encode_ltl_game, encode_reachability_game, encode_safety_game
from .model import BuchiAutomaton, GameSpec, Ltl, Reach, Safety, SymbolicLts, primed

__all__ = [
    # Model
    "BuchiAutomaton",
    "GameSpec",
    "Ltl",
    "Reach",
    "Safety",
    "SymbolicLts",
    "primed",
    # Encoders
    "BisimQuery",
    "Implication",
    "Pairs",
    "bisim_params",
    "encode_bisimulation",
    "encode_buchi",
    "encode_ltl_game",
    "encode_reachability_game",
    "encode_safety_game",
    "equation_order",
    # Formats
    "load_buchi",
    "load_game",
    "load_lts",
    "parse_buchi",
    "parse_game",
    "parse_lts",
    # Oracles
    "GameGraph",
    "bisimilarity",
    "check_bisimulation",
    "check_buchi",
    "solve_game",
    # Examples
    "cinderella_game",
    "counter_lts",
    "finite_lts",
    "gf_restore_game",
    "stepmother_game",
]
