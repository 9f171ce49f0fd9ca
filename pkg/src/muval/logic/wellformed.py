"""Well-formedness checks, query normalization and the De Morgan dual."""

from __future__ import annotations

import logging
from typing import Dict, List, Mapping, Set

from ..errors import (
    DuplicateEquationError,
    OpenQueryError,
    PositivityViolation,
    SortError,
    UnboundPredicateError,
)
from .ast import (
    Add,
    And,
    Cmp,
    Equation,
    Exists,
    Forall,
    Formula,
    FunSort,
    Holds,
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
    Var,
)
from .names import NameSupply, dual_name
from .transform import (
    free_vars,
    map_formula,
    nnf,
    pred_names,
    program_names,
    substitute,
    term_sort,
)

logger = logging.getLogger(__name__)


def _check_term(
    t: Term, expected: Sort, sig: Mapping[str, FunSort], where: str
) -> None:
    actual = term_sort(t)
    if actual is not expected:
        raise SortError(f"{where}: expected {expected.value}, found {actual.value}")
    if isinstance(t, Add):
        for a in t.args:
            _check_term(a, Sort.INT, sig, where)
    elif isinstance(t, (Neg, Mul)):
        _check_term(t.arg, Sort.INT, sig, where)
    elif isinstance(t, Ite):
        _check_sorts(t.cond, sig, where)
        _check_term(t.then, expected, sig, where)
        _check_term(t.other, expected, sig, where)


def _check_sorts(f: Formula, sig: Mapping[str, FunSort], where: str) -> None:
    if isinstance(f, Cmp):
        sort = term_sort(f.lhs)
        if sort is Sort.BOOL and f.op not in ("=", "!="):
            raise SortError(f"{where}: ordering {f.op} on booleans")
        _check_term(f.lhs, sort, sig, where)
        _check_term(f.rhs, sort, sig, where)
    elif isinstance(f, Holds):
        _check_term(f.term, Sort.BOOL, sig, where)
    elif isinstance(f, PredApp):
        fsort = sig.get(f.name)
        if fsort is None:
            raise UnboundPredicateError(f"{where}: undefined predicate {f.name}")
        if fsort.arity != len(f.args):
            raise SortError(
                f"{where}: {f.name} expects {fsort.arity} arguments, got {len(f.args)}"
            )
        for a, s in zip(f.args, fsort.args):
            _check_term(a, s, sig, where)
    elif isinstance(f, Not):
        _check_sorts(f.body, sig, where)
    elif isinstance(f, (And, Or)):
        for a in f.args:
            _check_sorts(a, sig, where)
    elif isinstance(f, (Forall, Exists)):
        _check_sorts(f.body, sig, where)


def _positivity(f: Formula, defined: Set[str], negative: bool, path: List[str]) -> None:
    if isinstance(f, PredApp):
        if negative and f.name in defined:
            raise PositivityViolation(f.name, path + [f.name])
    elif isinstance(f, Not):
        _positivity(f.body, defined, not negative, path + ["not"])
    elif isinstance(f, (And, Or)):
        word = "and" if isinstance(f, And) else "or"
        for i, a in enumerate(f.args):
            _positivity(a, defined, negative, path + [f"{word}[{i}]"])
    elif isinstance(f, (Forall, Exists)):
        word = "forall" if isinstance(f, Forall) else "exists"
        _positivity(f.body, defined, negative, path + [f"{word} {f.var}"])


def negative_occurrences(f: Formula, defined: Set[str]) -> List[str]:
    """Defined predicates occurring under an odd number of negations."""
    found: Dict[str, None] = {}

    def walk(g: Formula, negative: bool) -> None:
        if isinstance(g, PredApp):
            if negative and g.name in defined:
                found.setdefault(g.name, None)
        elif isinstance(g, Not):
            walk(g.body, not negative)
        elif isinstance(g, (And, Or)):
            for a in g.args:
                walk(a, negative)
        elif isinstance(g, (Forall, Exists)):
            walk(g.body, negative)

    walk(f, False)
    return list(found)


def check_wellformed(p: Program) -> None:
    """Validate a parsed program.

    Checks distinct heads and parameters, sorts and arities of every
    predicate application, positivity of defined predicates in every
    equation body, and closedness of the query. Negative occurrences in the
    query are allowed here; :func:`normalize_query` removes them.

    Raises:
        DuplicateEquationError: Two equations share a head.
        UnboundPredicateError: An undefined predicate is applied.
        SortError: Sort or arity mismatch.
        PositivityViolation: A defined predicate occurs negatively in a body.
        OpenQueryError: The query has free term variables.
    """
    sig: Dict[str, FunSort] = {}
    for eq in p.equations:
        if eq.head in sig:
            raise DuplicateEquationError(f"equation for {eq.head} defined twice")
        names = [n for n, _ in eq.params]
        if len(set(names)) != len(names):
            raise SortError(f"repeated parameter in equation for {eq.head}")
        sig[eq.head] = eq.sort
    defined = set(sig)
    for eq in p.equations:
        _check_sorts(eq.body, sig, eq.head)
        _positivity(eq.body, defined, False, [eq.head])
        params = {n for n, _ in eq.params}
        extra = [v for v in free_vars(eq.body) if v not in params]
        if extra:
            raise SortError(f"{eq.head}: unbound variables {', '.join(extra)}")
    _check_sorts(p.query, sig, "query")
    fv = free_vars(p.query)
    if fv:
        raise OpenQueryError(f"query has free variables: {', '.join(fv)}")


def _dual_substitution(p: Program, names: Mapping[str, str]) -> Dict[str, Lambda]:
    sigma: Dict[str, Lambda] = {}
    for eq in p.equations:
        args = tuple(Var(n, s) for n, s in eq.params)
        sigma[eq.head] = Lambda(eq.params, Not(PredApp(names[eq.head], args)))
    return sigma


def _dual_equation(
    eq: Equation, sigma: Mapping[str, Lambda], names: Mapping[str, str]
) -> Equation:
    body = nnf(substitute(Not(eq.body), sigma))
    return Equation(names[eq.head], eq.params, eq.kind.flip(), body)


def demorgan_dual(p: Program) -> Program:
    """The dual program: kinds flipped, bodies and query negated.

    Each head ``X`` is renamed to ``X_neg``.

    The dual query is valid exactly when the original query is not.
    """
    names = {eq.head: dual_name(eq.head) for eq in p.equations}
    sigma = _dual_substitution(p, names)
    equations = tuple(_dual_equation(eq, sigma, names) for eq in p.equations)
    query = nnf(substitute(Not(p.query), sigma))
    return Program(equations, query)


def nnf_program(p: Program) -> Program:
    return Program(
        tuple(
            Equation(eq.head, eq.params, eq.kind, nnf(eq.body)) for eq in p.equations
        ),
        nnf(p.query),
    )


def _dependencies(p: Program, roots: List[str]) -> Set[str]:
    seen: Set[str] = set()
    stack = list(roots)
    while stack:
        head = stack.pop()
        if head in seen:
            continue
        seen.add(head)
        eq = p.equation(head)
        if eq is not None:
            stack.extend(pred_names(eq.body))
    return seen


def normalize_query(p: Program) -> Program:
    """Rewrite negative query occurrences of defined predicates through duals.

    Each negative occurrence ``not X(t)`` becomes ``X_neg(t)``; the dual
    equations of every predicate reachable from such an occurrence are
    appended after the original equations, preserving their relative order.
    """
    defined = set(p.heads)
    negatives = negative_occurrences(p.query, defined)
    if not negatives:
        return p
    needed = _dependencies(p, negatives)
    supply = NameSupply(program_names(p))
    names = {
        eq.head: supply.fresh(dual_name(eq.head))
        for eq in p.equations
        if eq.head in needed
    }
    logger.info("appending dual equations for %s", ", ".join(sorted(names)))

    query = nnf(p.query)

    def flip_negative(f: Formula):
        if isinstance(f, Not) and isinstance(f.body, PredApp) and f.body.name in names:
            return PredApp(names[f.body.name], f.body.args)
        return None

    query = map_formula(query, flip_negative)
    sub = Program(tuple(eq for eq in p.equations if eq.head in needed), query)
    sigma = _dual_substitution(sub, names)
    duals = tuple(_dual_equation(eq, sigma, names) for eq in sub.equations)
    return Program(p.equations + duals, query)

