"""Hypothesis constraints over template coefficients and candidate extraction."""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Dict, Iterable, Iterator, List, Optional, Sequence, Set, Tuple

from ..logic.ast import Formula, FunApp, Holds, PredApp, Term
from ..logic.semantics import eval_formula
from ..logic.transform import fold_term, map_formula, simplify
from ..pcsp.model import CandidateSolution, ExampleInstance, PfwCsp
from .affine import Template, Theta
from .function import FunctionTemplate
from .params import ParamVector, TemplateDefaults
from .predicate import PredicateTemplate
from .wellfounded import WellFoundedTemplate

logger = logging.getLogger(__name__)

SHAPE_PREFIX = "con!"
EXAMPLE_PREFIX = "ex!"

NamedFormula = Tuple[str, Formula]


@dataclass
class TemplateSet:
    """One template per function or predicate variable of a problem."""

    preds: Dict[str, Template]
    funs: Dict[str, Template]

    def __getitem__(self, name: str) -> Template:
        if name in self.preds:
            return self.preds[name]
        return self.funs[name]

    def __iter__(self) -> Iterator[Template]:
        yield from self.preds.values()
        yield from self.funs.values()

    def unknowns(self) -> List[str]:
        return [u for t in self for u in t.unknowns()]


def build_templates(
    problem: PfwCsp, params: ParamVector, bool_split_cap: int = 6
) -> TemplateSet:
    """Instantiate the template family of every variable at ``params``."""
    preds: Dict[str, Template] = {}
    for name, fsort in problem.preds.items():
        if name in problem.wf:
            preds[name] = WellFoundedTemplate(name, fsort.args, params[name])
        else:
            preds[name] = PredicateTemplate(
                name, fsort.args, params[name], bool_split_cap
            )
    funs: Dict[str, Template] = {
        name: FunctionTemplate(name, fsort.args, params[name], fsort.ret)
        for name, fsort in problem.funs.items()
    }
    return TemplateSet(preds, funs)


def initial_params(problem: PfwCsp, defaults: TemplateDefaults) -> ParamVector:
    return ParamVector.initial(
        ordinary=problem.ordinary_preds,
        functions=problem.funs,
        wf=sorted(problem.wf),
        defaults=defaults,
    )


def plug(f: Formula, templates: TemplateSet) -> Formula:
    """Replace every application of a templated variable by its skeleton.

    Arguments are plugged first, so nested function applications turn into
    ite terms before the outer template sees them.
    """

    def on_term(t: Term) -> Optional[Term]:
        if isinstance(t, FunApp) and t.name in templates.funs:
            args = tuple(fold_term(plug_term(a)) for a in t.args)
            return templates.funs[t.name].apply(args)
        return None

    def on_formula(g: Formula) -> Optional[Formula]:
        if isinstance(g, PredApp) and g.name in templates.preds:
            args = tuple(fold_term(plug_term(a)) for a in g.args)
            return templates.preds[g.name].apply(args)
        return None

    def plug_term(t: Term) -> Term:
        hit = on_term(t)
        if hit is not None:
            return hit
        return map_formula(Holds(t), on_formula, on_term).term

    return map_formula(f, on_formula, on_term)


def hypothesis_constraint(
    examples: Sequence[ExampleInstance], templates: TemplateSet
) -> List[NamedFormula]:
    """Named conjuncts whose models are the candidates satisfying ``examples``.

    One ``con!X`` conjunct per variable carries its coefficient bounds and
    one ``ex!i`` conjunct per example carries the plugged ground clause, so
    an unsat core points back at the variables to blame.
    """
    named: List[NamedFormula] = [(SHAPE_PREFIX + t.name, t.shape()) for t in templates]
    for i, ex in enumerate(examples):
        named.append((f"{EXAMPLE_PREFIX}{i}", plug(ex.clause.as_formula(), templates)))
    logger.debug("hypothesis constraint with %d conjunct(s)", len(named))
    return named


def implicated_variables(
    core: Iterable[str], examples: Sequence[ExampleInstance]
) -> Set[str]:
    """Variables named by an unsat core of :func:`hypothesis_constraint`."""
    out: Set[str] = set()
    for name in core:
        if name.startswith(SHAPE_PREFIX):
            out.add(name[len(SHAPE_PREFIX) :])
        elif name.startswith(EXAMPLE_PREFIX):
            clause = examples[int(name[len(EXAMPLE_PREFIX) :])].clause
            out.update(clause.pred_names)
            out.update(clause.fun_names)
    return out


def extract_candidate(templates: TemplateSet, theta: Theta) -> CandidateSolution:
    """Closed predicates and functions for the coefficients ``theta``."""
    preds = {name: t.extract(theta) for name, t in templates.preds.items()}
    funs = {name: t.extract(theta) for name, t in templates.funs.items()}
    return CandidateSolution(preds, funs)


def ground_check(
    candidate: CandidateSolution, examples: Iterable[ExampleInstance]
) -> List[int]:
    """Indices of the examples the candidate falsifies, by direct evaluation."""
    preds, funs = candidate.preds, candidate.funs
    return [
        i
        for i, ex in enumerate(examples)
        if not eval_formula(simplify(ex.clause.as_formula()), {}, preds, funs)
    ]
