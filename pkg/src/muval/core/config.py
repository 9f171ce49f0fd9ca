"""Run configuration and the ``key = value`` configuration file."""

from __future__ import annotations

import dataclasses
import shutil
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, Optional, Tuple, Union

from ..cegis import SolverOptions
from ..errors import ConfigError
from ..smt import SmtBackend
from ..templates import TemplateDefaults

_POSITIVE = (
    "timeout",
    "max_iterations",
    "smt_timeout",
    "fairness_cap",
    "wf_check_points",
)
_NON_NEGATIVE = ("resolution_depth", "bool_split_cap", "max_bumps", "coefficient_box")


@dataclass
class RunConfig:
    """Budgets and knobs shared by ``muval solve`` and ``pcsat``.

    Attributes:
        timeout: Wall-clock budget per run in seconds.
        max_iterations: CEGIS iteration budget per side.
        smt_solver: SMT executable name or path.
        smt_args: Arguments that put the solver into SMT-LIB2 pipe mode.
        smt_timeout: Per-query SMT limit in seconds.
        parallel_dual: Run the primal and dual problems in parallel.
        fairness_cap: Largest gap between per-variable parameter bump counts.
        resolution_depth: Rounds of resolution after each validation failure.
        bool_split_cap: Most Boolean parameters a predicate template splits on.
        max_bumps: Parameter bumps allowed per synthesis call.
        wf_check_points: Sample size of the well-foundedness spot check.
        suppress_flags: Drop Boolean flags that are true at every call site.
        negate_cochc: Solve coCHC inputs through their negated CHC problem.
        seed: Seed for the SMT solver and the spot-check sampler.
        log_path: JSONL file receiving one record per iteration.
        progress: Show tqdm progress bars.
        coefficient_box: Coefficient range used by enumeration tests.
        verify_cores: Re-check every unsat core the SMT solver returns (debug mode).
        initial_params: Initial template parameters per family.
    """

    timeout: float = 300.0
    max_iterations: int = 200
    smt_solver: str = "z3"
    smt_args: Tuple[str, ...] = ("-in", "-smt2")
    smt_timeout: float = 10.0
    parallel_dual: bool = True
    fairness_cap: int = 3
    resolution_depth: int = 2
    bool_split_cap: int = 6
    max_bumps: int = 64
    wf_check_points: int = 100
    suppress_flags: bool = False
    negate_cochc: bool = False
    seed: Optional[int] = None
    log_path: Optional[Path] = None
    progress: bool = False
    coefficient_box: int = 1
    verify_cores: bool = False
    initial_params: TemplateDefaults = field(default_factory=TemplateDefaults)

    def validate(self, check_solver: bool = True) -> None:
        """Raise :class:`ConfigError` on non-positive budgets or a missing solver."""
        for name in _POSITIVE:
            value = getattr(self, name)
            if value <= 0:
                raise ConfigError(f"{name} must be positive, got {value}")
        for name in _NON_NEGATIVE:
            value = getattr(self, name)
            if value < 0:
                raise ConfigError(f"{name} must not be negative, got {value}")
        try:
            self.initial_params.validate()
        except ValueError as exc:
            raise ConfigError(f"initial template parameters: {exc}") from None
        if check_solver and shutil.which(self.smt_solver) is None:
            raise ConfigError(f"SMT solver {self.smt_solver!r} not found")

    def solver_options(self) -> SolverOptions:
        return SolverOptions(
            max_iterations=self.max_iterations,
            timeout=self.timeout,
            fairness_cap=self.fairness_cap,
            bool_split_cap=self.bool_split_cap,
            max_bumps=self.max_bumps,
            resolution_depth=self.resolution_depth,
            wf_check_points=self.wf_check_points,
            seed=self.seed,
            defaults=self.initial_params,
        )

    def smt_command(self) -> Tuple[str, ...]:
        return (self.smt_solver, *self.smt_args)

    def smt_backend(self) -> SmtBackend:
        return SmtBackend(
            self.smt_command(),
            timeout=self.smt_timeout,
            seed=self.seed,
            verify_cores=self.verify_cores,
        )


_FAMILIES = {f.name for f in dataclasses.fields(TemplateDefaults)}


def _coerce(raw: str, current: Any, key: str) -> Any:
    value = raw.strip()
    try:
        if isinstance(current, bool):
            lowered = value.lower()
            if lowered not in ("true", "false", "yes", "no", "1", "0"):
                raise ValueError(value)
            return lowered in ("true", "yes", "1")
        if isinstance(current, int):
            return int(value)
        if isinstance(current, float):
            return float(value)
        if isinstance(current, tuple):
            return tuple(value.split())
    except ValueError:
        raise ConfigError(f"{key}: cannot read {value!r}") from None
    return value


def apply_overrides(cfg: RunConfig, values: Dict[str, str]) -> RunConfig:
    """Return ``cfg`` updated with textual ``key -> value`` overrides.

    Keys are field names (``-`` and ``_`` both accepted) or dotted template
    keys such as ``wf.nl``.

    Raises:
        ConfigError: On unknown keys or unreadable values.
    """
    fields = {f.name: f for f in dataclasses.fields(RunConfig)}
    updates: Dict[str, Any] = {}
    families: Dict[str, Dict[str, Any]] = {}
    for raw_key, raw_value in values.items():
        key = raw_key.strip().replace("-", "_")
        if "." in key:
            family, param = key.split(".", 1)
            if family not in _FAMILIES:
                raise ConfigError(f"unknown template family {family!r}")
            record = getattr(cfg.initial_params, family)
            if param not in {f.name for f in dataclasses.fields(record)}:
                raise ConfigError(f"unknown {family} template parameter {param!r}")
            families.setdefault(family, {})[param] = _coerce(raw_value, 0, raw_key)
            continue
        if key not in fields or key == "initial_params":
            raise ConfigError(f"unknown configuration key {raw_key!r}")
        current = getattr(cfg, key)
        if key == "seed":
            updates[key] = _coerce(raw_value, 0, raw_key)
        elif key == "log_path":
            updates[key] = Path(raw_value.strip())
        else:
            updates[key] = _coerce(raw_value, current, raw_key)
    if families:
        params = cfg.initial_params
        replaced = {
            family: dataclasses.replace(getattr(params, family), **changes)
            for family, changes in families.items()
        }
        updates["initial_params"] = dataclasses.replace(params, **replaced)
    return dataclasses.replace(cfg, **updates)


def parse_config_text(text: str) -> Dict[str, str]:
    """``key = value`` lines; blank lines and ``#`` comments are skipped."""
    values: Dict[str, str] = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        stripped = line.split("#", 1)[0].strip()
        if not stripped:
            continue
        if "=" not in stripped:
            raise ConfigError(f"line {lineno}: expected 'key = value'")
        key, value = stripped.split("=", 1)
        values[key.strip()] = value.strip()
    return values


def load_config_file(
    path: Union[str, Path], base: Optional[RunConfig] = None
) -> RunConfig:
    """Layer a configuration file over ``base`` (dataclass defaults when omitted)."""
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read config file {path}: {exc}") from None
    return apply_overrides(base or RunConfig(), parse_config_text(text))
