"""Template families, the parameter lattice and hypothesis constraints."""

from .affine import Affine, Template, scale
from .function import FunctionTemplate
from .hypothesis import (
    TemplateSet,
    build_templates,
    extract_candidate,
    ground_check,
    hypothesis_constraint,
    implicated_variables,
    initial_params,
    plug,
)
from .params import (
    FunctionParams,
    OrdinaryParams,
    ParamVector,
    TemplateDefaults,
    WfParams,
    bump_params,
)
from .predicate import PredicateTemplate
from .wellfounded import WellFoundedTemplate

__all__ = [
    # Building blocks
    "Affine",
    "Template",
    "scale",
    # Families
    "FunctionTemplate",
    "PredicateTemplate",
    "WellFoundedTemplate",
    # Parameters
    "FunctionParams",
    "OrdinaryParams",
    "ParamVector",
    "TemplateDefaults",
    "WfParams",
    "bump_params",
    # Hypotheses
    "TemplateSet",
    "build_templates",
    "extract_candidate",
    "ground_check",
    "hypothesis_constraint",
    "implicated_variables",
    "initial_params",
    "plug",
]
