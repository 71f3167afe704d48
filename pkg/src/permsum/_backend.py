"""Kernel selection and deterministic chunked reduction.

The compiled extension is used when it imports; otherwise the numpy
fallback. Setting ``PERMSUM_PURE_PYTHON=1`` forces the fallback.
"""
from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from types import ModuleType
from typing import Callable, Sequence

from . import _fallback


def _load_compiled() -> ModuleType | None:
    try:
        from . import _kernels  # type: ignore[attr-defined]
    except ImportError:
        return None
    return _kernels


_COMPILED = _load_compiled()

if _COMPILED is not None and not os.environ.get("PERMSUM_PURE_PYTHON"):
    kernels: ModuleType = _COMPILED
    BACKEND = "cython"
else:
    kernels = _fallback
    BACKEND = "python"

CHUNK = 1 << 14


def get_kernels(name: str | None = None) -> ModuleType:
    """Return the active kernels, or a named backend ("cython" or "python")."""
    if name is None:
        return kernels
    if name == "python":
        return _fallback
    if name == "cython":
        if _COMPILED is None:
            raise ImportError("compiled kernels are not built")
        return _COMPILED
    raise ValueError(f"unknown backend {name!r}")


def chunk_ranges(total: int, chunk: int = CHUNK) -> list[tuple[int, int]]:
    return [(lo, min(lo + chunk, total)) for lo in range(0, total, chunk)]


def tree_sum(values: Sequence[complex]) -> complex:
    """Pairwise sum in a fixed order, so the result ignores scheduling."""
    vals = list(values)
    if not vals:
        return 0j
    while len(vals) > 1:
        nxt = [vals[i] + vals[i + 1] for i in range(0, len(vals) - 1, 2)]
        if len(vals) % 2:
            nxt.append(vals[-1])
        vals = nxt
    return vals[0]


def reduce_ranges(fn: Callable[[int, int], complex], total: int, threads: int = 1) -> complex:
    ranges = chunk_ranges(total)
    if threads > 1 and len(ranges) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            parts = list(pool.map(lambda r: fn(*r), ranges))
    else:
        parts = [fn(lo, hi) for lo, hi in ranges]
    return tree_sum(parts)
