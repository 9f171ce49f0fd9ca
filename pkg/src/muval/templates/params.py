"""Template parameters, their pointwise order and the fair bump policy."""

from __future__ import annotations

import logging
from dataclasses import asdict, dataclass, field, replace
from typing import ClassVar, Dict, Iterable, Mapping, Tuple, Union

from ..errors import ConfigError

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class OrdinaryParams:
    """Parameters of a DNF predicate template.

    Attributes:
        nd: Number of disjuncts.
        nc: Atoms per disjunct.
        ac: Bound on the sum of absolute variable coefficients of an atom.
        ad: Bound on the absolute constant of an atom.
    """

    nd: int = 1
    nc: int = 1
    ac: int = 1
    ad: int = 1

    STRUCTURAL: ClassVar[Tuple[str, ...]] = ("nd", "nc")
    BOUNDS: ClassVar[Tuple[str, ...]] = ("ac", "ad")
    MINIMUM: ClassVar[Dict[str, int]] = {"nd": 1, "nc": 1}


@dataclass(frozen=True)
class FunctionParams:
    """Parameters of a piecewise-affine function template.

    Attributes:
        nd: Number of affine pieces.
        nc: Atoms per discriminator.
        dc: Coefficient bound of discriminator atoms.
        dd: Constant bound of discriminator atoms.
        ec: Coefficient bound of the pieces.
        ed: Constant bound of the pieces.
    """

    nd: int = 1
    nc: int = 1
    dc: int = 1
    dd: int = 1
    ec: int = 1
    ed: int = 1

    STRUCTURAL: ClassVar[Tuple[str, ...]] = ("nd", "nc")
    BOUNDS: ClassVar[Tuple[str, ...]] = ("dc", "dd", "ec", "ed")
    MINIMUM: ClassVar[Dict[str, int]] = {"nd": 1, "nc": 1}


@dataclass(frozen=True)
class WfParams:
    """Parameters of a lexicographic piecewise ranking-function template.

    Attributes:
        nl: Lexicographic levels.
        np: Pieces per level.
        nc: Atoms per piece discriminator.
        rc: Coefficient bound of the ranking pieces.
        rd: Constant bound of the ranking pieces.
        dc: Coefficient bound of discriminator atoms.
        dd: Constant bound of discriminator atoms.
    """

    nl: int = 1
    np: int = 1
    nc: int = 1
    rc: int = 1
    rd: int = 1
    dc: int = 1
    dd: int = 1

    STRUCTURAL: ClassVar[Tuple[str, ...]] = ("nl", "np", "nc")
    BOUNDS: ClassVar[Tuple[str, ...]] = ("rc", "rd", "dc", "dd")
    MINIMUM: ClassVar[Dict[str, int]] = {"nl": 1, "np": 1, "nc": 1}


ParamRecord = Union[OrdinaryParams, FunctionParams, WfParams]


def validate_record(record: ParamRecord) -> None:
    for name, value in asdict(record).items():
        minimum = record.MINIMUM.get(name, 0)
        if not isinstance(value, int) or value < minimum:
            raise ConfigError(
                f"template parameter {name} must be an integer >= {minimum}"
            )


def record_le(a: ParamRecord, b: ParamRecord) -> bool:
    if type(a) is not type(b):
        return False
    return all(getattr(a, k) <= getattr(b, k) for k in asdict(a))


@dataclass(frozen=True)
class TemplateDefaults:
    """Initial parameters per template family.

    Attributes:
        ordinary: Initial predicate template parameters.
        function: Initial function template parameters.
        wf: Initial well-founded template parameters.
    """

    ordinary: OrdinaryParams = field(default_factory=OrdinaryParams)
    function: FunctionParams = field(default_factory=FunctionParams)
    wf: WfParams = field(default_factory=WfParams)

    def validate(self) -> None:
        for record in (self.ordinary, self.function, self.wf):
            validate_record(record)


@dataclass(frozen=True)
class ParamVector:
    """Per-variable parameter records plus how often each was bumped."""

    records: Mapping[str, ParamRecord] = field(default_factory=dict)
    bumps: Mapping[str, int] = field(default_factory=dict)

    @classmethod
    def initial(
        cls,
        ordinary: Iterable[str] = (),
        functions: Iterable[str] = (),
        wf: Iterable[str] = (),
        defaults: TemplateDefaults = TemplateDefaults(),
    ) -> "ParamVector":
        records: Dict[str, ParamRecord] = {}
        for name in ordinary:
            records[name] = defaults.ordinary
        for name in functions:
            records[name] = defaults.function
        for name in wf:
            records[name] = defaults.wf
        return cls(records, {name: 0 for name in records})

    def __getitem__(self, name: str) -> ParamRecord:
        return self.records[name]

    def __le__(self, other: "ParamVector") -> bool:
        if set(self.records) != set(other.records):
            return False
        return all(record_le(r, other.records[n]) for n, r in self.records.items())

    def describe(self) -> Dict[str, Dict[str, int]]:
        return {name: asdict(record) for name, record in sorted(self.records.items())}


def _bump_record(record: ParamRecord, count: int) -> ParamRecord:
    if count % 2 == 0:
        name = record.STRUCTURAL[(count // 2) % len(record.STRUCTURAL)]
        return replace(record, **{name: getattr(record, name) + 1})
    return replace(record, **{b: max(1, 2 * getattr(record, b)) for b in record.BOUNDS})


def bump_params(
    p: ParamVector, implicated: Iterable[str], fairness_cap: int = 3
) -> ParamVector:
    """Grow the records of ``implicated`` variables, then restore fairness.

    Bumps alternate between a structural component (round-robin) and
    doubling every bound component. Afterwards any variable that has been
    bumped more than ``fairness_cap`` times less than the most bumped one
    catches up, so no variable is starved.

    Args:
        p: Current parameters.
        implicated: Variables named by the unsat core; empty means all.
        fairness_cap: Largest allowed gap between bump counts.

    Returns:
        A vector strictly larger than ``p`` on every implicated variable.
    """
    records = dict(p.records)
    bumps = dict(p.bumps)
    targets = sorted(set(implicated) & set(records)) or sorted(records)
    for name in targets:
        records[name] = _bump_record(records[name], bumps.get(name, 0))
        bumps[name] = bumps.get(name, 0) + 1
    while bumps:
        top = max(bumps.values())
        lagging = sorted(n for n, c in bumps.items() if top - c > fairness_cap)
        if not lagging:
            break
        for name in lagging:
            records[name] = _bump_record(records[name], bumps[name])
            bumps[name] += 1
    logger.debug("bumped %s", ", ".join(targets))
    return ParamVector(records, bumps)
