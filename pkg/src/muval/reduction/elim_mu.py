"""Turning least fixpoints into guarded greatest fixpoints.

The right-most ``mu`` equation ``X`` whose suffix is all ``nu`` is replaced by
a ``nu`` equation in which every recursive call ``X(t)`` is guarded by a fresh
well-founded predicate ``WF_X(x, t)``. Equations to the right of ``X`` may reach
``X`` only indirectly, so each of them gains a flag ``b`` and a copy of ``X``'s
parameters and guards its calls to ``X`` with ``b => WF_X(copy, t)``. Calls
from ``X`` set the flag; calls from the left and from the query clear it and
pass dummy values.
"""

from __future__ import annotations

import logging
from typing import Dict, List, Optional, Tuple

from ..logic.ast import (
    BoolLit,
    Equation,
    Fixpoint,
    FunSort,
    Holds,
    Lambda,
    Not,
    Params,
    PredApp,
    Program,
    Sort,
    Term,
    Var,
    conj,
    default_value,
    disj,
)
from ..logic.names import NameSupply
from ..logic.transform import pred_names, program_names, substitute
from .trace import ArgExtension, WfVariable

logger = logging.getLogger(__name__)

WF_PREFIX = "WF_"


def _lambda_params(sorts: Tuple[Sort, ...]) -> Params:
    # '%' never occurs in parsed identifiers, so these cannot capture
    return tuple((f"%a{i}", s) for i, s in enumerate(sorts))


def _args(params: Params) -> Tuple[Term, ...]:
    return tuple(Var(n, s) for n, s in params)


def _rightmost_mu(p: Program) -> Optional[int]:
    for i in range(len(p.equations) - 1, -1, -1):
        if p.equations[i].kind is Fixpoint.MU:
            return i
    return None


def _calls_into(
    suffix: List[Equation], flag: Term, mirrored: Tuple[Term, ...]
) -> Dict[str, Lambda]:
    """``Y |-> fun z. Y(flag, mirrored, z)`` for every suffix equation ``Y``."""
    sigma = {}
    for eq in suffix:
        params = _lambda_params(tuple(s for _, s in eq.params[len(mirrored) + 1 :]))
        call = PredApp(eq.head, (flag,) + mirrored + _args(params))
        sigma[eq.head] = Lambda(params, call)
    return sigma


def _step(
    p: Program, i: int, supply: NameSupply
) -> Tuple[Program, WfVariable, Dict[str, ArgExtension]]:
    target = p.equations[i]
    left, suffix = p.equations[:i], p.equations[i + 1 :]
    sorts = tuple(s for _, s in target.params)
    wf_name = supply.fresh(WF_PREFIX + target.head)
    wf = WfVariable(wf_name, target.head, FunSort(sorts + sorts, Sort.PROP))
    own = _args(target.params)
    lam = _lambda_params(sorts)

    extensions: Dict[str, ArgExtension] = {}
    extended: List[Equation] = []
    for eq in suffix:
        flag = supply.fresh("b")
        mirrored = tuple((supply.fresh(n), s) for n, s in target.params)
        extensions[eq.head] = ArgExtension(target.head, flag, mirrored)
        params = ((flag, Sort.BOOL),) + mirrored + eq.params
        extended.append(Equation(eq.head, params, eq.kind, eq.body))

    # target's own body: unconditional guard, calls into the suffix set the flag
    sigma_x = _calls_into(extended, BoolLit(True), own)
    sigma_x[target.head] = Lambda(
        lam, conj(PredApp(target.head, _args(lam)), PredApp(wf_name, own + _args(lam)))
    )
    new_target = Equation(
        target.head, target.params, Fixpoint.NU, substitute(target.body, sigma_x)
    )

    new_suffix = []
    for eq in extended:
        ext = extensions[eq.head]
        flag_var = Var(ext.flag, Sort.BOOL)
        mirrored_args = _args(ext.mirrored)
        sigma_i = _calls_into(extended, flag_var, mirrored_args)
        guard = disj(Not(Holds(flag_var)), PredApp(wf_name, mirrored_args + _args(lam)))
        call = PredApp(target.head, _args(lam))
        sigma_i[target.head] = Lambda(lam, conj(call, guard))
        body = substitute(eq.body, sigma_i)
        new_suffix.append(Equation(eq.head, eq.params, eq.kind, body))

    dummies = tuple(default_value(s) for s in sorts)
    sigma_0 = _calls_into(extended, BoolLit(False), dummies)
    new_left = tuple(
        Equation(eq.head, eq.params, eq.kind, substitute(eq.body, sigma_0))
        for eq in left
    )
    query = substitute(p.query, sigma_0)
    program = Program(new_left + (new_target,) + tuple(new_suffix), query)
    return program, wf, extensions


def elim_mu(
    p: Program, supply: Optional[NameSupply] = None
) -> Tuple[Program, List[WfVariable], Dict[str, List[ArgExtension]]]:
    """Eliminate every ``mu`` equation, right-most first.

    Args:
        p: Existential-free program.
        supply: Name supply shared with the other reduction steps.

    Returns:
        The ``nu``-only program, the well-founded variables in elimination
        order and the parameters added to each equation.
    """
    supply = supply or NameSupply(program_names(p))
    wf_vars: List[WfVariable] = []
    added: Dict[str, List[ArgExtension]] = {}
    while True:
        i = _rightmost_mu(p)
        if i is None:
            return p, wf_vars, added
        p, wf, extensions = _step(p, i, supply)
        logger.debug("eliminated mu-equation %s with %s", wf.origin, wf.name)
        if wf.name in _pred_names(p):
            wf_vars.append(wf)
        for head, ext in extensions.items():
            added.setdefault(head, []).append(ext)


def _pred_names(p: Program) -> set:
    names = set(pred_names(p.query))
    for eq in p.equations:
        names.update(pred_names(eq.body))
    return names
