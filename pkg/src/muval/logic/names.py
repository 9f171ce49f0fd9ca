"""Fresh-name generation and the dual-predicate naming convention."""

from __future__ import annotations

import re
from typing import Dict, Iterable, Set

DUAL_SUFFIX = "_neg"

_NUMBERED = re.compile(r"^(.*?)_(\d+)$")


def dual_name(name: str) -> str:
    """Name of the De Morgan dual predicate; an involution on names."""
    if name.endswith(DUAL_SUFFIX) and len(name) > len(DUAL_SUFFIX):
        return name[: -len(DUAL_SUFFIX)]
    return name + DUAL_SUFFIX


class NameSupply:
    """Deterministic supply of names that avoid every name seen so far."""

    def __init__(self, taken: Iterable[str] = ()) -> None:
        self._taken: Set[str] = set(taken)
        self._counters: Dict[str, int] = {}

    def reserve(self, names: Iterable[str]) -> None:
        self._taken.update(names)

    def __contains__(self, name: str) -> bool:
        return name in self._taken

    def fresh(self, base: str, *, exact_if_free: bool = True) -> str:
        if exact_if_free and base not in self._taken:
            self._taken.add(base)
            return base
        match = _NUMBERED.match(base)
        stem = match.group(1) if match and match.group(1) else base
        n = self._counters.get(stem, 0)
        while True:
            n += 1
            candidate = f"{stem}_{n}"
            if candidate not in self._taken:
                break
        self._counters[stem] = n
        self._taken.add(candidate)
        return candidate
