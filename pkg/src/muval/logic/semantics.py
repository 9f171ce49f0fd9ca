"""Ground evaluation and the bounded-domain reference semantics.

:func:`bounded_evaluate` follows the nested fixpoint denotation literally:
the first equation is the outermost fixpoint, and each candidate table for
it is evaluated against the solution of the remaining equations. Tables are
computed by Kleene iteration from all-false (``mu``) or all-true (``nu``).
Integers range over ``[-bound, bound]``; any predicate application that
leaves that range is *unknown*, and an unknown value that reaches a table
entry or the query turns the verdict into ``OUT_OF_DOMAIN``.
Terms and comparisons are evaluated exactly, even when a value such as
``x + 1`` at ``x = bound`` lies outside the window.
"""

from __future__ import annotations

import itertools
import time
from enum import Enum
from typing import (
    Callable,
    Dict,
    FrozenSet,
    Iterable,
    List,
    Mapping,
    Optional,
    Sequence,
    Tuple,
    Union,
)

from ..errors import EvaluationTimeout, SortError
from .ast import (
    Add,
    And,
    BoolLit,
    Cmp,
    Exists,
    Fixpoint,
    Forall,
    Formula,
    FunApp,
    Holds,
    IntLit,
    Ite,
    Lambda,
    Mul,
    Neg,
    Not,
    Or,
    PredApp,
    Program,
    Sort,
    Term,
    Truth,
    Var,
)
from .transform import compare

Value = Union[int, bool]
Env = Mapping[str, Value]


class Verdict(str, Enum):
    VALID = "valid"
    INVALID = "invalid"
    OUT_OF_DOMAIN = "out-of-domain"


# --------------------------------------------------------------------------
# Ground (two-valued) evaluation


def eval_term(t: Term, env: Env, funs: Optional[Mapping[str, Lambda]] = None) -> Value:
    if isinstance(t, IntLit):
        return t.value
    if isinstance(t, BoolLit):
        return t.value
    if isinstance(t, Var):
        try:
            return env[t.name]
        except KeyError:
            raise SortError(f"no value for variable {t.name}") from None
    if isinstance(t, Add):
        return sum(eval_term(a, env, funs) for a in t.args)
    if isinstance(t, Neg):
        return -eval_term(t.arg, env, funs)
    if isinstance(t, Mul):
        return t.coeff * eval_term(t.arg, env, funs)
    if isinstance(t, Ite):
        branch = t.then if eval_formula(t.cond, env, None, funs) else t.other
        return eval_term(branch, env, funs)
    if isinstance(t, FunApp):
        if funs is None or t.name not in funs:
            raise SortError(f"no interpretation for function {t.name}")
        args = [eval_term(a, env, funs) for a in t.args]
        return apply_lambda(funs[t.name], args, funs=funs)
    raise TypeError(f"not a term: {t!r}")


def eval_formula(
    f: Formula,
    env: Env,
    preds: Optional[Mapping[str, Union[Lambda, Callable[..., bool]]]] = None,
    funs: Optional[Mapping[str, Lambda]] = None,
    domain: Optional[Sequence[int]] = None,
) -> bool:
    """Evaluate ``f`` under ``env``; quantifiers over Int need a finite ``domain``."""
    if isinstance(f, Truth):
        return f.value
    if isinstance(f, Cmp):
        return compare(f.op, eval_term(f.lhs, env, funs), eval_term(f.rhs, env, funs))
    if isinstance(f, Holds):
        return bool(eval_term(f.term, env, funs))
    if isinstance(f, PredApp):
        if preds is None or f.name not in preds:
            raise SortError(f"no interpretation for predicate {f.name}")
        args = [eval_term(a, env, funs) for a in f.args]
        interp = preds[f.name]
        if isinstance(interp, Lambda):
            return bool(apply_lambda(interp, args, funs=funs))
        return bool(interp(*args))
    if isinstance(f, Not):
        return not eval_formula(f.body, env, preds, funs, domain)
    if isinstance(f, And):
        return all(eval_formula(a, env, preds, funs, domain) for a in f.args)
    if isinstance(f, Or):
        return any(eval_formula(a, env, preds, funs, domain) for a in f.args)
    if isinstance(f, (Forall, Exists)):
        if f.sort is Sort.BOOL:
            values: Iterable[Value] = (False, True)
        elif domain is None:
            raise SortError("quantifier over Int needs a finite evaluation domain")
        else:
            values = domain
        results = (
            eval_formula(f.body, {**env, f.var: v}, preds, funs, domain) for v in values
        )
        return all(results) if isinstance(f, Forall) else any(results)
    raise TypeError(f"not a formula: {f!r}")


def apply_lambda(
    lam: Lambda, args: Sequence[Value], funs: Optional[Mapping[str, Lambda]] = None
) -> Value:
    env = {name: value for (name, _), value in zip(lam.params, args)}
    body = lam.body
    if isinstance(body, (Truth, Cmp, Holds, PredApp, Not, And, Or, Forall, Exists)):
        return eval_formula(body, env, None, funs)
    return eval_term(body, env, funs)


# --------------------------------------------------------------------------
# Three-valued bounded semantics

Tri = Optional[bool]
Table = FrozenSet[Tuple[Value, ...]]


class _OutOfDomain(Exception):
    pass


def _and3(values: Iterable[Tri]) -> Tri:
    unknown = False
    for v in values:
        if v is False:
            return False
        if v is None:
            unknown = True
    return None if unknown else True


def _or3(values: Iterable[Tri]) -> Tri:
    unknown = False
    for v in values:
        if v is True:
            return True
        if v is None:
            unknown = True
    return None if unknown else False


class _BoundedEvaluator:
    def __init__(self, p: Program, bound: int, deadline: Optional[float]) -> None:
        if bound < 0:
            raise ValueError("bound must be non-negative")
        self.p = p
        self.bound = bound
        self.deadline = deadline
        self.ints = list(range(-bound, bound + 1))
        self.points: List[List[Tuple[Value, ...]]] = []
        for eq in p.equations:
            axes = []
            for _, sort in eq.params:
                if sort is Sort.BOOL:
                    axes.append((False, True))
                elif sort is Sort.INT:
                    axes.append(self.ints)
                else:
                    raise SortError(f"unsupported parameter sort {sort}")
            self.points.append(list(itertools.product(*axes)))
        self.index = {eq.head: i for i, eq in enumerate(p.equations)}
        self.memo: Dict[Tuple[int, Tuple[Table, ...]], Tuple[Table, ...]] = {}

    def _tick(self) -> None:
        if self.deadline is not None and time.monotonic() > self.deadline:
            raise EvaluationTimeout("bounded evaluation timed out")

    def in_domain(self, v: Value) -> bool:
        return isinstance(v, bool) or -self.bound <= v <= self.bound

    def term(self, t: Term, env: Env) -> Value:
        if isinstance(t, FunApp):
            raise SortError(
                "function variables are not supported by the bounded evaluator"
            )
        if isinstance(t, Ite):
            cond = self.formula(t.cond, env, ())
            if cond is None:
                raise _OutOfDomain()
            return self.term(t.then if cond else t.other, env)
        return eval_term(t, env)

    def formula(self, f: Formula, env: Env, tables: Tuple[Table, ...]) -> Tri:
        if isinstance(f, Truth):
            return f.value
        if isinstance(f, Cmp):
            return compare(f.op, self.term(f.lhs, env), self.term(f.rhs, env))
        if isinstance(f, Holds):
            return bool(self.term(f.term, env))
        if isinstance(f, PredApp):
            args = tuple(self.term(a, env) for a in f.args)
            if not all(self.in_domain(a) for a in args):
                return None
            return args in tables[self.index[f.name]]
        if isinstance(f, Not):
            v = self.formula(f.body, env, tables)
            return None if v is None else not v
        if isinstance(f, And):
            return _and3(self.formula(a, env, tables) for a in f.args)
        if isinstance(f, Or):
            return _or3(self.formula(a, env, tables) for a in f.args)
        if isinstance(f, (Forall, Exists)):
            values: Sequence[Value] = (
                (False, True) if f.sort is Sort.BOOL else self.ints
            )
            results = (self.formula(f.body, {**env, f.var: v}, tables) for v in values)
            return _and3(results) if isinstance(f, Forall) else _or3(results)
        raise TypeError(f"not a formula: {f!r}")

    def solve(self, i: int, fixed: Tuple[Table, ...]) -> Tuple[Table, ...]:
        """Tables for equations ``i..n`` given tables for equations before ``i``."""
        if i == len(self.p.equations):
            return fixed
        key = (i, fixed)
        if key in self.memo:
            return self.memo[key]
        eq = self.p.equations[i]
        current: Table = (
            frozenset() if eq.kind is Fixpoint.MU else frozenset(self.points[i])
        )
        while True:
            self._tick()
            tables = self.solve(i + 1, fixed + (current,))
            updated = frozenset(self._apply(i, tables))
            if updated == current:
                break
            current = updated
        result = self.solve(i + 1, fixed + (current,))
        self.memo[key] = result
        return result

    def _apply(self, i: int, tables: Tuple[Table, ...]):
        eq = self.p.equations[i]
        names = [n for n, _ in eq.params]
        for point in self.points[i]:
            value = self.formula(eq.body, dict(zip(names, point)), tables)
            if value is None:
                raise _OutOfDomain()
            if value:
                yield point

    def run(self) -> Verdict:
        try:
            tables = self.solve(0, ())
            value = self.formula(self.p.query, {}, tables)
        except _OutOfDomain:
            return Verdict.OUT_OF_DOMAIN
        if value is None:
            return Verdict.OUT_OF_DOMAIN
        return Verdict.VALID if value else Verdict.INVALID


def bounded_evaluate(
    p: Program, bound: int, timeout: Optional[float] = None
) -> Verdict:
    """Decide the query of ``p`` with integers restricted to ``[-bound, bound]``.

    Args:
        p: Well-formed program without function variables.
        bound: Non-negative integer bound.
        timeout: Optional wall-clock limit in seconds.

    Returns:
        ``VALID``, ``INVALID`` or ``OUT_OF_DOMAIN``.

    Raises:
        EvaluationTimeout: If ``timeout`` elapses.
    """
    deadline = time.monotonic() + timeout if timeout is not None else None
    return _BoundedEvaluator(p, bound, deadline).run()
