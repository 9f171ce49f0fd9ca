"""The full MuCLP to pfwCSP reduction and the optional flag-suppression pass."""

from __future__ import annotations

import logging
from typing import Dict, List, Set, Tuple

from ..logic.ast import BoolLit, Equation, Formula, FunSort, PredApp, Program, Var
from ..logic.names import NameSupply
from ..logic.transform import (
    map_formula,
    pred_apps,
    pred_names,
    program_names,
    simplify,
    subst_vars,
)
from ..logic.wellformed import check_wellformed, normalize_query
from ..pcsp.model import PfwCsp
from .elim_ex import elim_ex
from .elim_mu import elim_mu
from .elim_nu import elim_nu
from .trace import ReductionTrace

logger = logging.getLogger(__name__)


def reduce_with_trace(
    p: Program, suppress_flags: bool = False
) -> Tuple[PfwCsp, ReductionTrace]:
    """Reduce the validity of ``p`` to the satisfiability of a pfwCSP.

    Args:
        p: Parsed program; it is checked and its query normalized first.
        suppress_flags: Drop Boolean flags that are true at every call.

    Returns:
        The clause problem and a record of every generated name.
    """
    check_wellformed(p)
    p = normalize_query(p)
    supply = NameSupply(program_names(p))
    trace = ReductionTrace()
    p, trace.skolem_fns = elim_ex(p, supply)
    p, trace.wf_vars, trace.arg_extensions = elim_mu(p, supply)
    if suppress_flags:
        p, trace.suppressed_flags = suppress_constant_flags(p, trace)
    clauses = elim_nu(p)
    preds: Dict[str, FunSort] = dict(p.signature())
    for wf in trace.wf_vars:
        preds[wf.name] = wf.sort
    funs = {sk.name: sk.sort for sk in trace.skolem_fns}
    wf_names = frozenset(w.name for w in trace.wf_vars)
    problem = PfwCsp(tuple(clauses), preds, wf_names, funs)
    problem.validate()
    logger.info(
        "reduced %d equation(s) to %d clause(s), %d wf and %d function variable(s)",
        len(p.equations),
        len(clauses),
        len(trace.wf_vars),
        len(funs),
    )
    return problem, trace


def reduce_program(p: Program, suppress_flags: bool = False) -> PfwCsp:
    return reduce_with_trace(p, suppress_flags)[0]


def _reachable(p: Program) -> Set[str]:
    seen: Set[str] = set()
    stack = pred_names(p.query)
    while stack:
        head = stack.pop()
        if head in seen:
            continue
        seen.add(head)
        eq = p.equation(head)
        if eq is not None:
            stack.extend(pred_names(eq.body))
    return seen


def suppress_constant_flags(
    p: Program, trace: ReductionTrace
) -> Tuple[Program, List[Tuple[str, str]]]:
    """Remove flag parameters that receive ``true`` at every reachable call.

    A flag stays a candidate while each of its call sites passes either the
    literal ``true`` or a caller flag that is itself a candidate (greatest
    fixpoint over the call graph).
    """
    flags: Dict[Tuple[str, str], int] = {}
    for head, extensions in trace.arg_extensions.items():
        eq = p.equation(head)
        if eq is None:
            continue
        names = [n for n, _ in eq.params]
        for ext in extensions:
            flags[(head, ext.flag)] = names.index(ext.flag)
    candidates = set(flags)
    reachable = _reachable(p)
    sites: List[Tuple[str, PredApp]] = [("", app) for app in pred_apps(p.query)]
    for eq in p.equations:
        if eq.head in reachable:
            sites.extend((eq.head, app) for app in pred_apps(eq.body))
    changed = True
    while changed:
        changed = False
        for caller, app in sites:
            for key in [k for k in candidates if k[0] == app.name]:
                arg = app.args[flags[key]]
                if arg == BoolLit(True):
                    continue
                if isinstance(arg, Var) and (caller, arg.name) in candidates:
                    continue
                candidates.discard(key)
                changed = True
    if not candidates:
        return p, []
    drop: Dict[str, Set[int]] = {}
    for head, flag in candidates:
        drop.setdefault(head, set()).add(flags[(head, flag)])

    def rewrite_calls(f: Formula) -> Formula:
        def hook(g: Formula):
            if isinstance(g, PredApp) and g.name in drop:
                kept = tuple(a for k, a in enumerate(g.args) if k not in drop[g.name])
                return PredApp(g.name, kept)
            return None

        return map_formula(f, hook)

    equations = []
    for eq in p.equations:
        body = rewrite_calls(eq.body)
        params = eq.params
        if eq.head in drop:
            mapping = {eq.params[k][0]: BoolLit(True) for k in drop[eq.head]}
            body = simplify(subst_vars(body, mapping))
            params = tuple(
                prm for k, prm in enumerate(eq.params) if k not in drop[eq.head]
            )
        equations.append(Equation(eq.head, params, eq.kind, body))
    removed = sorted(candidates)
    logger.info("suppressed %d constant flag(s)", len(removed))
    return Program(tuple(equations), rewrite_calls(p.query)), removed


__all__ = ["reduce_program", "reduce_with_trace", "suppress_constant_flags"]
