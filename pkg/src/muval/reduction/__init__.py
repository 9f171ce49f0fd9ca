"""Reduction of MuCLP validity to pfwCSP satisfiability."""

from .elim_ex import elim_ex
from .elim_mu import elim_mu
from .elim_nu import elim_nu
from .pipeline import reduce_program, reduce_with_trace, suppress_constant_flags
from .trace import ArgExtension, ReductionTrace, SkolemFunction, WfVariable

__all__ = [
    "elim_ex",
    "elim_mu",
    "elim_nu",
    "reduce_program",
    "reduce_with_trace",
    "suppress_constant_flags",
    "ArgExtension",
    "ReductionTrace",
    "SkolemFunction",
    "WfVariable",
]
