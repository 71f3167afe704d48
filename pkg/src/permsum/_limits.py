"""Size caps for brute-force routines.

``PERMSUM_MAX_N`` in the environment replaces the default cap of every
brute-force routine (exp_sum, naive and cycle-cover permanents, cover
enumeration). An explicit ``max_n`` argument wins over both.
"""
from __future__ import annotations

import os

from .errors import DomainError, ResourceError

ENV_VAR = "PERMSUM_MAX_N"


def brute_force_cap(default: int, explicit: int | None = None) -> int:
    if explicit is not None:
        return int(explicit)
    raw = os.environ.get(ENV_VAR)
    if raw is None or raw.strip() == "":
        return default
    try:
        return int(raw)
    except ValueError as exc:
        raise DomainError(f"{ENV_VAR} must be an integer, got {raw!r}") from exc


def check_cap(size: int, cap: int, what: str) -> None:
    if size > cap:
        raise ResourceError(f"{what}: size {size} exceeds cap {cap}")
