"""Syntactic operations on formulas: variables, substitution and normal forms."""

from __future__ import annotations

import itertools
from typing import (
    Callable,
    Dict,
    Iterable,
    Iterator,
    List,
    Mapping,
    Optional,
    Set,
    Tuple,
)

from ..errors import ResidualExistentialError, SortError
from .ast import (
    BOT,
    NEGATED_CMP,
    TOP,
    Add,
    And,
    BoolLit,
    Cmp,
    Equation,
    Exists,
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
    add,
    conj,
    disj,
    negate_term,
)
from .names import NameSupply

Prefix = List[Tuple[str, str, Sort]]
ClauseLits = Tuple[Formula, ...]


# --------------------------------------------------------------------------
# Sorts and variable collection


def term_sort(t: Term) -> Sort:
    if isinstance(t, Var):
        return t.sort
    if isinstance(t, BoolLit):
        return Sort.BOOL
    if isinstance(t, Ite):
        return term_sort(t.then)
    if isinstance(t, FunApp):
        return t.sort
    return Sort.INT


def _term_vars(t: Term, bound: Set[str], out: Dict[str, Sort]) -> None:
    if isinstance(t, Var):
        if t.name not in bound and t.name not in out:
            out[t.name] = t.sort
    elif isinstance(t, Add):
        for a in t.args:
            _term_vars(a, bound, out)
    elif isinstance(t, (Neg, Mul)):
        _term_vars(t.arg, bound, out)
    elif isinstance(t, Ite):
        _formula_vars(t.cond, bound, out)
        _term_vars(t.then, bound, out)
        _term_vars(t.other, bound, out)
    elif isinstance(t, FunApp):
        for a in t.args:
            _term_vars(a, bound, out)


def _formula_vars(f: Formula, bound: Set[str], out: Dict[str, Sort]) -> None:
    if isinstance(f, Cmp):
        _term_vars(f.lhs, bound, out)
        _term_vars(f.rhs, bound, out)
    elif isinstance(f, Holds):
        _term_vars(f.term, bound, out)
    elif isinstance(f, PredApp):
        for a in f.args:
            _term_vars(a, bound, out)
    elif isinstance(f, Not):
        _formula_vars(f.body, bound, out)
    elif isinstance(f, (And, Or)):
        for a in f.args:
            _formula_vars(a, bound, out)
    elif isinstance(f, (Forall, Exists)):
        _formula_vars(f.body, bound | {f.var}, out)


def free_vars(f: Formula) -> Dict[str, Sort]:
    """Free term variables in order of first occurrence."""
    out: Dict[str, Sort] = {}
    _formula_vars(f, set(), out)
    return out


def term_free_vars(t: Term) -> Dict[str, Sort]:
    out: Dict[str, Sort] = {}
    _term_vars(t, set(), out)
    return out


def lambda_free_vars(lam: Lambda) -> Dict[str, Sort]:
    params = {name for name, _ in lam.params}
    body = lam.body
    fv = free_vars(body) if _is_formula(body) else term_free_vars(body)
    return {k: v for k, v in fv.items() if k not in params}


def bound_vars(f: Formula) -> Set[str]:
    out: Set[str] = set()
    for node in walk(f):
        if isinstance(node, (Forall, Exists)):
            out.add(node.var)
    return out


def walk(f: Formula) -> Iterator[object]:
    """Pre-order traversal over every formula and term node."""
    stack: List[object] = [f]
    while stack:
        node = stack.pop()
        yield node
        if isinstance(node, Cmp):
            stack.extend((node.rhs, node.lhs))
        elif isinstance(node, Holds):
            stack.append(node.term)
        elif isinstance(node, (PredApp, FunApp)):
            stack.extend(reversed(node.args))
        elif isinstance(node, Not):
            stack.append(node.body)
        elif isinstance(node, (And, Or)):
            stack.extend(reversed(node.args))
        elif isinstance(node, (Forall, Exists)):
            stack.append(node.body)
        elif isinstance(node, Add):
            stack.extend(reversed(node.args))
        elif isinstance(node, (Neg, Mul)):
            stack.append(node.arg)
        elif isinstance(node, Ite):
            stack.extend((node.other, node.then, node.cond))


def pred_apps(f: Formula) -> Iterator[PredApp]:
    for node in walk(f):
        if isinstance(node, PredApp):
            yield node


def pred_names(f: Formula) -> List[str]:
    seen: Dict[str, None] = {}
    for app in pred_apps(f):
        seen.setdefault(app.name, None)
    return list(seen)


def fun_apps(f: Formula) -> Iterator[FunApp]:
    for node in walk(f):
        if isinstance(node, FunApp):
            yield node


def names_in(f: Formula) -> Set[str]:
    """Every identifier (variables, binders, predicates, functions) in ``f``."""
    out: Set[str] = set()
    for node in walk(f):
        if isinstance(node, Var):
            out.add(node.name)
        elif isinstance(node, (PredApp, FunApp)):
            out.add(node.name)
        elif isinstance(node, (Forall, Exists)):
            out.add(node.var)
    return out


def program_names(p: Program) -> Set[str]:
    out = names_in(p.query)
    for eq in p.equations:
        out.add(eq.head)
        out.update(name for name, _ in eq.params)
        out.update(names_in(eq.body))
    return out


def is_formula(x: object) -> bool:
    return isinstance(x, (Truth, Cmp, Holds, PredApp, Not, And, Or, Forall, Exists))


_is_formula = is_formula


# --------------------------------------------------------------------------
# Generic bottom-up rebuilding


def map_formula(
    f: Formula,
    on_formula: Callable[[Formula], Optional[Formula]],
    on_term: Callable[[Term], Optional[Term]] = lambda t: None,
) -> Formula:
    """Rebuild ``f``; a hook returning non-None replaces the node (no descent)."""

    def term(t: Term) -> Term:
        hit = on_term(t)
        if hit is not None:
            return hit
        if isinstance(t, Add):
            return add(*(term(a) for a in t.args))
        if isinstance(t, Neg):
            return Neg(term(t.arg))
        if isinstance(t, Mul):
            return Mul(t.coeff, term(t.arg))
        if isinstance(t, Ite):
            return Ite(form(t.cond), term(t.then), term(t.other))
        if isinstance(t, FunApp):
            return FunApp(t.name, tuple(term(a) for a in t.args), t.sort)
        return t

    def form(g: Formula) -> Formula:
        hit = on_formula(g)
        if hit is not None:
            return hit
        if isinstance(g, Cmp):
            return Cmp(g.op, term(g.lhs), term(g.rhs))
        if isinstance(g, Holds):
            return Holds(term(g.term))
        if isinstance(g, PredApp):
            return PredApp(g.name, tuple(term(a) for a in g.args))
        if isinstance(g, Not):
            return Not(form(g.body))
        if isinstance(g, And):
            return conj(*(form(a) for a in g.args))
        if isinstance(g, Or):
            return disj(*(form(a) for a in g.args))
        if isinstance(g, Forall):
            return Forall(g.var, g.sort, form(g.body))
        if isinstance(g, Exists):
            return Exists(g.var, g.sort, form(g.body))
        return g

    return form(f)


# --------------------------------------------------------------------------
# Capture-avoiding substitution


def _fresh_binder(var: str, avoid: Set[str]) -> str:
    for n in itertools.count(1):
        candidate = f"{var}_{n}"
        if candidate not in avoid:
            return candidate
    raise AssertionError("unreachable")  # pragma: no cover


def subst_vars(f: Formula, mapping: Mapping[str, Term]) -> Formula:
    """Simultaneously replace free term variables, renaming binders on capture."""
    if not mapping:
        return f
    return _SubstVars(mapping).formula(f)


def subst_term_vars(t: Term, mapping: Mapping[str, Term]) -> Term:
    if not mapping:
        return t
    return _SubstVars(mapping).term(t)


class _SubstVars:
    def __init__(self, mapping: Mapping[str, Term]) -> None:
        self.mapping = dict(mapping)
        self.range_vars: Set[str] = set()
        for t in self.mapping.values():
            self.range_vars.update(term_free_vars(t))

    def term(self, t: Term) -> Term:
        if isinstance(t, Var):
            return self.mapping.get(t.name, t)
        if isinstance(t, Add):
            return add(*(self.term(a) for a in t.args))
        if isinstance(t, Neg):
            return Neg(self.term(t.arg))
        if isinstance(t, Mul):
            return Mul(t.coeff, self.term(t.arg))
        if isinstance(t, Ite):
            return Ite(self.formula(t.cond), self.term(t.then), self.term(t.other))
        if isinstance(t, FunApp):
            return FunApp(t.name, tuple(self.term(a) for a in t.args), t.sort)
        return t

    def formula(self, f: Formula) -> Formula:
        if isinstance(f, Cmp):
            return Cmp(f.op, self.term(f.lhs), self.term(f.rhs))
        if isinstance(f, Holds):
            return Holds(self.term(f.term))
        if isinstance(f, PredApp):
            return PredApp(f.name, tuple(self.term(a) for a in f.args))
        if isinstance(f, Not):
            return Not(self.formula(f.body))
        if isinstance(f, And):
            return conj(*(self.formula(a) for a in f.args))
        if isinstance(f, Or):
            return disj(*(self.formula(a) for a in f.args))
        if isinstance(f, (Forall, Exists)):
            inner = {k: v for k, v in self.mapping.items() if k != f.var}
            if not inner:
                return f
            sub = _SubstVars(inner)
            var, body = f.var, f.body
            if var in sub.range_vars:
                avoid = set(free_vars(body)) | sub.range_vars | set(inner)
                new_var = _fresh_binder(var, avoid)
                body = subst_vars(body, {var: Var(new_var, f.sort)})
                var = new_var
            return type(f)(var, f.sort, sub.formula(body))
        return f


def beta(lam: Lambda, args: Tuple[Term, ...]):
    """Apply a lambda to actual arguments."""
    if len(lam.params) != len(args):
        raise SortError(
            f"lambda of arity {len(lam.params)} applied to {len(args)} arguments"
        )
    mapping = {name: arg for (name, _), arg in zip(lam.params, args)}
    if _is_formula(lam.body):
        return subst_vars(lam.body, mapping)
    return subst_term_vars(lam.body, mapping)


def substitute(f: Formula, s: Mapping[str, Lambda]) -> Formula:
    """Simultaneous substitution of predicate and function variables.

    Applied lambdas are beta-reduced; replaced bodies are not substituted again.
    """
    if not s:
        return f
    return _SubstFuns(s).formula(f)


def substitute_term(t: Term, s: Mapping[str, Lambda]) -> Term:
    if not s:
        return t
    return _SubstFuns(s).term(t)


class _SubstFuns:
    def __init__(self, s: Mapping[str, Lambda]) -> None:
        self.s = dict(s)
        self.captured: Set[str] = set()
        for lam in self.s.values():
            self.captured.update(lambda_free_vars(lam))

    def term(self, t: Term) -> Term:
        if isinstance(t, FunApp):
            args = tuple(self.term(a) for a in t.args)
            lam = self.s.get(t.name)
            if lam is None:
                return FunApp(t.name, args, t.sort)
            if _is_formula(lam.body):
                raise SortError(f"function variable {t.name} bound to a predicate")
            return beta(lam, args)
        if isinstance(t, Add):
            return add(*(self.term(a) for a in t.args))
        if isinstance(t, Neg):
            return Neg(self.term(t.arg))
        if isinstance(t, Mul):
            return Mul(t.coeff, self.term(t.arg))
        if isinstance(t, Ite):
            return Ite(self.formula(t.cond), self.term(t.then), self.term(t.other))
        return t

    def formula(self, f: Formula) -> Formula:
        if isinstance(f, PredApp):
            args = tuple(self.term(a) for a in f.args)
            lam = self.s.get(f.name)
            if lam is None:
                return PredApp(f.name, args)
            if not _is_formula(lam.body):
                raise SortError(f"predicate variable {f.name} bound to a term")
            return beta(lam, args)
        if isinstance(f, Cmp):
            return Cmp(f.op, self.term(f.lhs), self.term(f.rhs))
        if isinstance(f, Holds):
            return Holds(self.term(f.term))
        if isinstance(f, Not):
            return Not(self.formula(f.body))
        if isinstance(f, And):
            return conj(*(self.formula(a) for a in f.args))
        if isinstance(f, Or):
            return disj(*(self.formula(a) for a in f.args))
        if isinstance(f, (Forall, Exists)):
            var, body = f.var, f.body
            if var in self.captured:
                avoid = set(free_vars(body)) | self.captured | names_in(body)
                new_var = _fresh_binder(var, avoid)
                body = subst_vars(body, {var: Var(new_var, f.sort)})
                var = new_var
            return type(f)(var, f.sort, self.formula(body))
        return f


# --------------------------------------------------------------------------
# Negation normal form and constant folding


def nnf(f: Formula, negate: bool = False) -> Formula:
    """Push negations down to atoms (comparisons are flipped, not wrapped)."""
    if isinstance(f, Truth):
        return Truth(f.value != negate)
    if isinstance(f, Cmp):
        return Cmp(NEGATED_CMP[f.op], f.lhs, f.rhs) if negate else f
    if isinstance(f, (Holds, PredApp)):
        return Not(f) if negate else f
    if isinstance(f, Not):
        return nnf(f.body, not negate)
    if isinstance(f, And):
        parts = [nnf(a, negate) for a in f.args]
        return disj(*parts) if negate else conj(*parts)
    if isinstance(f, Or):
        parts = [nnf(a, negate) for a in f.args]
        return conj(*parts) if negate else disj(*parts)
    if isinstance(f, Forall):
        body = nnf(f.body, negate)
        return Exists(f.var, f.sort, body) if negate else Forall(f.var, f.sort, body)
    if isinstance(f, Exists):
        body = nnf(f.body, negate)
        return Forall(f.var, f.sort, body) if negate else Exists(f.var, f.sort, body)
    raise TypeError(f"not a formula: {f!r}")


_CMP_FUNCS = {
    "=": lambda a, b: a == b,
    "!=": lambda a, b: a != b,
    "<=": lambda a, b: a <= b,
    "<": lambda a, b: a < b,
    ">=": lambda a, b: a >= b,
    ">": lambda a, b: a > b,
}


def compare(op: str, a, b) -> bool:
    return _CMP_FUNCS[op](a, b)


def fold_term(t: Term) -> Term:
    if isinstance(t, Add):
        const = 0
        rest: List[Term] = []
        for a in t.args:
            a = fold_term(a)
            parts = a.args if isinstance(a, Add) else (a,)
            for part in parts:
                if isinstance(part, IntLit):
                    const += part.value
                else:
                    rest.append(part)
        if const:
            rest.append(IntLit(const))
        return add(*rest)
    if isinstance(t, Neg):
        return negate_term(fold_term(t.arg))
    if isinstance(t, Mul):
        a = fold_term(t.arg)
        if isinstance(a, IntLit):
            return IntLit(t.coeff * a.value)
        if t.coeff == 0:
            return IntLit(0)
        if t.coeff == 1:
            return a
        if isinstance(a, Mul):
            return Mul(t.coeff * a.coeff, a.arg)
        return Mul(t.coeff, a)
    if isinstance(t, Ite):
        cond = simplify(t.cond)
        if isinstance(cond, Truth):
            return fold_term(t.then if cond.value else t.other)
        then, other = fold_term(t.then), fold_term(t.other)
        if then == other:
            return then
        return Ite(cond, then, other)
    if isinstance(t, FunApp):
        return FunApp(t.name, tuple(fold_term(a) for a in t.args), t.sort)
    return t


def simplify(f: Formula) -> Formula:
    """Fold constant subterms and drop trivially true/false parts."""
    if isinstance(f, Cmp):
        lhs, rhs = fold_term(f.lhs), fold_term(f.rhs)
        lits = (IntLit, BoolLit)
        if isinstance(lhs, lits) and isinstance(rhs, lits):
            return Truth(compare(f.op, lhs.value, rhs.value))
        if lhs == rhs:
            return Truth(f.op in ("=", "<=", ">="))
        return Cmp(f.op, lhs, rhs)
    if isinstance(f, Holds):
        t = fold_term(f.term)
        if isinstance(t, BoolLit):
            return Truth(t.value)
        return Holds(t)
    if isinstance(f, PredApp):
        return PredApp(f.name, tuple(fold_term(a) for a in f.args))
    if isinstance(f, Not):
        body = simplify(f.body)
        if isinstance(body, Truth):
            return Truth(not body.value)
        if isinstance(body, Not):
            return body.body
        if isinstance(body, Cmp):
            return Cmp(NEGATED_CMP[body.op], body.lhs, body.rhs)
        return Not(body)
    if isinstance(f, (And, Or)):
        unit, zero = (TOP, BOT) if isinstance(f, And) else (BOT, TOP)
        parts: List[Formula] = []
        for a in f.args:
            a = simplify(a)
            if a == zero:
                return zero
            if a == unit:
                continue
            nested = a.args if type(a) is type(f) else (a,)
            for b in nested:
                if b not in parts:
                    parts.append(b)
        return conj(*parts) if isinstance(f, And) else disj(*parts)
    if isinstance(f, (Forall, Exists)):
        body = simplify(f.body)
        if f.var not in free_vars(body):
            return body
        return type(f)(f.var, f.sort, body)
    return f


# --------------------------------------------------------------------------
# Alpha-equivalence


def _canon_term(t: Term, env: Dict[str, str], counter: List[int]) -> Term:
    if isinstance(t, Var):
        return Var(env.get(t.name, t.name), t.sort)
    if isinstance(t, Add):
        return Add(tuple(_canon_term(a, env, counter) for a in t.args))
    if isinstance(t, Neg):
        return Neg(_canon_term(t.arg, env, counter))
    if isinstance(t, Mul):
        return Mul(t.coeff, _canon_term(t.arg, env, counter))
    if isinstance(t, Ite):
        return Ite(
            _canon(t.cond, env, counter),
            _canon_term(t.then, env, counter),
            _canon_term(t.other, env, counter),
        )
    if isinstance(t, FunApp):
        args = tuple(_canon_term(a, env, counter) for a in t.args)
        return FunApp(t.name, args, t.sort)
    return t


def _canon(f: Formula, env: Dict[str, str], counter: List[int]) -> Formula:
    if isinstance(f, Cmp):
        lhs = _canon_term(f.lhs, env, counter)
        return Cmp(f.op, lhs, _canon_term(f.rhs, env, counter))
    if isinstance(f, Holds):
        return Holds(_canon_term(f.term, env, counter))
    if isinstance(f, PredApp):
        return PredApp(f.name, tuple(_canon_term(a, env, counter) for a in f.args))
    if isinstance(f, Not):
        return Not(_canon(f.body, env, counter))
    if isinstance(f, And):
        return And(tuple(_canon(a, env, counter) for a in f.args))
    if isinstance(f, Or):
        return Or(tuple(_canon(a, env, counter) for a in f.args))
    if isinstance(f, (Forall, Exists)):
        name = f"%{counter[0]}"
        counter[0] += 1
        return type(f)(name, f.sort, _canon(f.body, {**env, f.var: name}, counter))
    return f


def canonical(f: Formula) -> Formula:
    """Rename every binder to a position-based name."""
    return _canon(f, {}, [0])


def alpha_equivalent(a: Formula, b: Formula) -> bool:
    return canonical(a) == canonical(b)


def canonical_program(p: Program) -> Program:
    eqs = []
    for eq in p.equations:
        env = {name: f"%p{i}" for i, (name, _) in enumerate(eq.params)}
        params = tuple((env[name], sort) for name, sort in eq.params)
        eqs.append(Equation(eq.head, params, eq.kind, _canon(eq.body, env, [0])))
    return Program(tuple(eqs), canonical(p.query))


def programs_alpha_equivalent(a: Program, b: Program) -> bool:
    return canonical_program(a) == canonical_program(b)


def alpha_normalize(p: Program) -> Program:
    """Give every quantifier binder a name unique across the whole program."""
    supply = NameSupply()
    for eq in p.equations:
        supply.reserve([eq.head])
        supply.reserve(name for name, _ in eq.params)
    supply.reserve(n for n in program_names(p) if not _is_binder_only(p, n))

    def rename(f: Formula) -> Formula:
        def hook(g: Formula) -> Optional[Formula]:
            if isinstance(g, (Forall, Exists)):
                new = supply.fresh(g.var)
                body = g.body
                if new != g.var:
                    body = subst_vars(body, {g.var: Var(new, g.sort)})
                return type(g)(new, g.sort, rename(body))
            return None

        return map_formula(f, hook)

    eqs = tuple(
        Equation(eq.head, eq.params, eq.kind, rename(eq.body)) for eq in p.equations
    )
    return Program(eqs, rename(p.query))


def _is_binder_only(p: Program, name: str) -> bool:
    if p.equation(name) is not None:
        return False
    for eq in p.equations:
        if any(n == name for n, _ in eq.params):
            return False
    formulas = [p.query] + [eq.body for eq in p.equations]
    for f in formulas:
        if name in free_vars(f):
            return False
        for node in walk(f):
            if isinstance(node, (PredApp, FunApp)) and node.name == name:
                return False
    return True


# --------------------------------------------------------------------------
# Prenex conjunctive normal form


def prenex_cnf(
    f: Formula, avoid: Iterable[str] = ()
) -> Tuple[Prefix, List[ClauseLits]]:
    """Universal prefix and clause list (each clause a tuple of literals).

    Existentials must already be eliminated; a residual one raises
    :class:`ResidualExistentialError`.
    """
    g = nnf(f)
    used: Set[str] = set(free_vars(g)) | set(avoid)
    prefix: Prefix = []
    matrix = _pull_universals(g, used, prefix)
    clauses: List[ClauseLits] = []
    for clause in _cnf(matrix):
        normalized = _normalize_clause(clause)
        if normalized is not None and normalized not in clauses:
            clauses.append(normalized)
    return prefix, clauses


def _pull_universals(f: Formula, used: Set[str], prefix: Prefix) -> Formula:
    if isinstance(f, Forall):
        var, body = f.var, f.body
        if var in used:
            new = _fresh_binder(var, used | names_in(body))
            body = subst_vars(body, {var: Var(new, f.sort)})
            var = new
        used.add(var)
        prefix.append(("forall", var, f.sort))
        return _pull_universals(body, used, prefix)
    if isinstance(f, Exists):
        raise ResidualExistentialError(
            f"existential binder {f.var} must be eliminated before clausal form"
        )
    if isinstance(f, And):
        return conj(*(_pull_universals(a, used, prefix) for a in f.args))
    if isinstance(f, Or):
        return disj(*(_pull_universals(a, used, prefix) for a in f.args))
    return f


def _cnf(f: Formula) -> List[ClauseLits]:
    if isinstance(f, Truth):
        return [] if f.value else [()]
    if isinstance(f, And):
        out: List[ClauseLits] = []
        for a in f.args:
            out.extend(_cnf(a))
        return out
    if isinstance(f, Or):
        acc: List[ClauseLits] = [()]
        for a in f.args:
            part = _cnf(a)
            acc = [x + y for x in acc for y in part]
        return acc
    return [(f,)]


def _normalize_clause(lits: ClauseLits) -> Optional[ClauseLits]:
    out: List[Formula] = []
    for lit in lits:
        if isinstance(lit, Truth):
            if lit.value:
                return None
            continue
        if lit not in out:
            out.append(lit)
    for lit in out:
        if isinstance(lit, Not) and lit.body in out:
            return None
    return tuple(out)
