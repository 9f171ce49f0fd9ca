"""Shared fixtures: sample programs, clause problems and random generators."""

from __future__ import annotations

import random
import shutil
from typing import Callable, List

import pytest

P_TERM = """\
query forall x1: int, x2: int. I(x1, x2);
I(x1: int, x2: int) =mu not (x1 >= 0 /\\ x2 >= 0) \\/ J(x2)
    /\\ (forall x2': int. NP(x2, x2') \\/ I(x1 - 1, x2' - 1)) /\\ I(x1, x2 - 1);
J(x2: int) =mu not (x2 <= 10) \\/ J(x2 + 1);
NP(x2: int, x2': int) =nu
    not (not (x2 <= 10) /\\ x2' = x2
         \\/ x2 <= 10 /\\ (not NP(x2 + 1, x2') \\/ x2' = x2));
"""

P_TERM_DUAL = """\
query exists x1: int, x2: int. I_neg(x1, x2);
I_neg(x1: int, x2: int) =nu x1 >= 0 /\\ x2 >= 0
    /\\ (J_neg(x2) \\/ (exists x2': int. NP_neg(x2, x2') /\\ I_neg(x1 - 1, x2' - 1))
        \\/ I_neg(x1, x2 - 1));
J_neg(x2: int) =nu x2 <= 10 /\\ J_neg(x2 + 1);
NP_neg(x2: int, x2': int) =mu
    x2 > 10 /\\ x2' = x2 \\/ x2 <= 10 /\\ (NP_neg(x2 + 1, x2') \\/ x2' = x2);
"""

MUTUAL_MU = """\
query forall x: int. X(x) /\\ Y(x);
X(x: int) =mu Y(x - 1);
Y(y: int) =mu y <= 0 \\/ X(y - 1);
"""

NU_OUTSIDE = """\
query X;
X() =nu X /\\ Y;
Y() =mu X \\/ Y;
"""

MU_OUTSIDE = """\
query X;
Y() =mu X \\/ Y;
X() =nu X /\\ Y;
"""

NESTED_PCSP = """\
(declare-fun X (Int) Bool)
(declare-fun Y (Int) Bool)
(declare-wf WF_Y (Int))
(assert (forall ((n Int)) (=> (>= n 0) (X n))))
(assert (forall ((x Int)) (=> (X x) (and (Y x) (X (+ x 1))))))
(assert (forall ((y Int)) (=> (Y y) (or (= y 0) (and (Y (- y 1)) (WF_Y y (- y 1)))))))
"""

_COMPARISONS = ("<=", ">=", "=", "!=", "<", ">")


def pytest_collection_modifyitems(
    config: pytest.Config, items: List[pytest.Item]
) -> None:
    if shutil.which("z3") is not None:
        return
    skip = pytest.mark.skip(reason="z3 executable not on PATH")
    for item in items:
        if "smt" in item.keywords:
            item.add_marker(skip)


@pytest.fixture
def p_term_text() -> str:
    return P_TERM


@pytest.fixture
def p_term_dual_text() -> str:
    return P_TERM_DUAL


@pytest.fixture
def mutual_mu_text() -> str:
    return MUTUAL_MU


@pytest.fixture
def nested_pcsp_text() -> str:
    return NESTED_PCSP


class _FormulaWriter:
    """Random formula text over a fixed set of integer variables."""

    def __init__(self, rng: random.Random, preds: int = 0, negate_freely: bool = True):
        self.rng = rng
        self.preds = preds
        self.negate_freely = negate_freely
        self.depth = 0

    def atom(self, scope: List[str]) -> str:
        rng = self.rng
        roll = rng.random()
        if self.preds and roll < 0.35:
            arg = rng.choice(scope + ["0", "1", "-1", f"{rng.choice(scope)} - 1"])
            return f"X{rng.randrange(self.preds)}({arg})"
        if roll < 0.45:
            return rng.choice(("true", "false"))
        lhs = rng.choice(scope)
        op = rng.choice(_COMPARISONS)
        comparison = f"{lhs} {op} {rng.randint(-2, 2)}"
        if rng.random() < 0.3:
            return f"not ({comparison})"
        return comparison

    def formula(self, scope: List[str], depth: int) -> str:
        rng = self.rng
        if depth == 0 or rng.random() < 0.3:
            return self.atom(scope)
        roll = rng.random()
        if roll < 0.3:
            ops = ("/\\", "\\/", "=>") if self.negate_freely else ("/\\", "\\/")
            op = rng.choice(ops)
            lhs, rhs = self.formula(scope, depth - 1), self.formula(scope, depth - 1)
            return f"({lhs} {op} {rhs})"
        if roll < 0.55:
            lhs, rhs = self.formula(scope, depth - 1), self.formula(scope, depth - 1)
            return f"({lhs} \\/ {rhs})"
        if roll < 0.7 and self.negate_freely:
            return f"(not {self.formula(scope, depth - 1)})"
        self.depth += 1
        var = f"q{self.depth}"
        kind = rng.choice(("forall", "exists"))
        return f"({kind} {var}: int. {self.formula(scope + [var], depth - 1)})"


@pytest.fixture
def random_formula() -> Callable[[int], str]:
    """Factory for closed-under-``x, y`` formula text, seeded per call."""

    def make(seed: int) -> str:
        return _FormulaWriter(random.Random(seed)).formula(["x", "y"], 3)

    return make


@pytest.fixture
def random_program() -> Callable[[int], str]:
    """Factory for small well-formed MuCLP programs over one integer parameter."""

    def make(seed: int) -> str:
        rng = random.Random(seed)
        count = rng.randint(1, 3)
        writer = _FormulaWriter(rng, preds=count, negate_freely=False)
        lines = [f"query forall x: int. {writer.formula(['x'], 1)};"]
        for i in range(count):
            kind = rng.choice(("mu", "nu"))
            lines.append(f"X{i}(x: int) ={kind} {writer.formula(['x'], 2)};")
        return "\n".join(lines) + "\n"

    return make
