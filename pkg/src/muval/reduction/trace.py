"""Bookkeeping of the names a reduction introduced."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, List, Tuple

from ..logic.ast import FunSort, Params


@dataclass
class SkolemFunction:
    """A function variable that replaced an existential binder.

    Attributes:
        name: Fresh function variable name.
        sort: Argument sorts (the universals in scope) and result sort.
        site: Where the binder was (``query`` or the equation head).
        binder: Name of the eliminated binder.
    """

    name: str
    sort: FunSort
    site: str
    binder: str


@dataclass
class WfVariable:
    name: str
    origin: str
    sort: FunSort


@dataclass
class ArgExtension:
    """Parameters added to a nu-equation while eliminating ``origin``."""

    origin: str
    flag: str
    mirrored: Params


@dataclass
class ReductionTrace:
    """What each reduction step introduced, in elimination order."""

    skolem_fns: List[SkolemFunction] = field(default_factory=list)
    wf_vars: List[WfVariable] = field(default_factory=list)
    arg_extensions: Dict[str, List[ArgExtension]] = field(default_factory=dict)
    suppressed_flags: List[Tuple[str, str]] = field(default_factory=list)

    def generated_names(self) -> List[str]:
        names = [s.name for s in self.skolem_fns] + [w.name for w in self.wf_vars]
        for extensions in self.arg_extensions.values():
            for ext in extensions:
                names.append(ext.flag)
                names.extend(n for n, _ in ext.mirrored)
        return names
