"""Finite spot check that a candidate well-founded relation has no cycles.

The relation is evaluated on every pair of a random point sample at once,
with the sample laid out along two broadcast axes, and the resulting
adjacency matrix is searched for a cycle.
"""

from __future__ import annotations

import logging
from typing import Dict, List, Optional, Tuple

import networkx as nx
import numpy as np

from ..logic.ast import (
    Add,
    And,
    BoolLit,
    Cmp,
    Formula,
    Holds,
    IntLit,
    Ite,
    Lambda,
    Mul,
    Neg,
    Not,
    Or,
    Sort,
    Term,
    Truth,
    Var,
)

logger = logging.getLogger(__name__)

_CMP = {
    "=": np.equal,
    "!=": np.not_equal,
    "<=": np.less_equal,
    "<": np.less,
    ">=": np.greater_equal,
    ">": np.greater,
}


def _term(t: Term, env: Dict[str, np.ndarray]) -> np.ndarray:
    if isinstance(t, Var):
        return env[t.name]
    if isinstance(t, IntLit):
        return np.asarray(t.value, dtype=np.int64)
    if isinstance(t, BoolLit):
        return np.asarray(t.value)
    if isinstance(t, Add):
        total = np.asarray(0, dtype=np.int64)
        for a in t.args:
            total = total + _term(a, env)
        return total
    if isinstance(t, Neg):
        return -_term(t.arg, env)
    if isinstance(t, Mul):
        return t.coeff * _term(t.arg, env)
    if isinstance(t, Ite):
        return np.where(_formula(t.cond, env), _term(t.then, env), _term(t.other, env))
    raise TypeError(f"cannot vectorise {t!r}")


def _formula(f: Formula, env: Dict[str, np.ndarray]) -> np.ndarray:
    if isinstance(f, Truth):
        return np.asarray(f.value)
    if isinstance(f, Cmp):
        return _CMP[f.op](_term(f.lhs, env), _term(f.rhs, env))
    if isinstance(f, Holds):
        return _term(f.term, env).astype(bool)
    if isinstance(f, Not):
        return np.logical_not(_formula(f.body, env))
    if isinstance(f, And):
        out = np.asarray(True)
        for a in f.args:
            out = np.logical_and(out, _formula(a, env))
        return out
    if isinstance(f, Or):
        out = np.asarray(False)
        for a in f.args:
            out = np.logical_or(out, _formula(a, env))
        return out
    raise TypeError(f"cannot vectorise {f!r}")


def relation_matrix(lam: Lambda, points: np.ndarray) -> np.ndarray:
    """``M[i, j]`` is whether ``lam(points[i], points[j])`` holds."""
    half = len(lam.params) // 2
    n = points.shape[0]
    env: Dict[str, np.ndarray] = {}
    for k, (name, sort) in enumerate(lam.params):
        column = points[:, k % half]
        if sort is Sort.BOOL:
            column = column.astype(bool)
        env[name] = column.reshape(n, 1) if k < half else column.reshape(1, n)
    return np.broadcast_to(_formula(lam.body, env), (n, n)).copy()


def sample_points(
    lam: Lambda, count: int = 100, box: int = 30, seed: Optional[int] = None
) -> np.ndarray:
    """``count`` distinct-ish points in ``[-box, box]`` (Booleans as 0/1)."""
    half = len(lam.params) // 2
    rng = np.random.default_rng(seed)
    points = rng.integers(-box, box + 1, size=(count, half))
    for k, (_, sort) in enumerate(lam.params[:half]):
        if sort is Sort.BOOL:
            points[:, k] = points[:, k] & 1
    return points


def find_cycle(
    lam: Lambda, count: int = 100, box: int = 30, seed: Optional[int] = None
) -> Optional[List[Tuple[int, ...]]]:
    """A cycle of ``lam`` among sampled points, or ``None`` if none is found."""
    if not lam.params:
        return None
    points = sample_points(lam, count, box, seed)
    matrix = relation_matrix(lam, points)
    graph = nx.from_numpy_array(matrix.astype(np.int8), create_using=nx.DiGraph)
    try:
        edges = nx.find_cycle(graph)
    except nx.NetworkXNoCycle:
        return None
    cycle = [tuple(int(v) for v in points[u]) for u, _ in edges]
    logger.warning(
        "sampled cycle through %d point(s) of a well-founded candidate", len(cycle)
    )
    return cycle
