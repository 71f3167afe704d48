"""Multilinear phase polynomials over boolean variables.

A polynomial is f(x) = c + sum_S theta_S prod_{i in S} x_i with real
radian coefficients. The reference quantity is the exponential sum
sum_x exp(i f(x)) over all 2^n assignments.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

import numpy as np

from . import _backend
from ._limits import brute_force_cap, check_cap
from ._numeric import TWO_PI, fmt_float, unit_phase
from .errors import DomainError

EXP_SUM_CAP = 24
_ZERO_TOL = 1e-12


def wrap_angle(theta: float) -> float:
    """Reduce an angle to [0, 2*pi), snapping values within 1e-12 of 2*pi to 0."""
    t = math.fmod(float(theta), TWO_PI)
    if t < 0.0:
        t += TWO_PI
    if t >= TWO_PI - _ZERO_TOL or t < _ZERO_TOL:
        return 0.0
    return t


@dataclass(frozen=True)
class Clause:
    theta: float
    vars: tuple[int, ...]

    @property
    def degree(self) -> int:
        return len(self.vars)


@dataclass(frozen=True)
class Polynomial:
    num_vars: int
    clauses: tuple[Clause, ...] = ()
    constant_phase: float = 0.0

    def __post_init__(self) -> None:
        if self.num_vars < 0:
            raise DomainError("num_vars must be non-negative")
        seen = set()
        for c in self.clauses:
            if any(b <= a for a, b in zip(c.vars, c.vars[1:])):
                raise DomainError(f"clause vars must be strictly increasing: {c.vars}")
            if c.vars and (c.vars[0] < 0 or c.vars[-1] >= self.num_vars):
                raise DomainError(f"clause var out of range in {c.vars}")
            if c.vars in seen:
                raise DomainError(f"duplicate clause on vars {c.vars}")
            seen.add(c.vars)

    @property
    def degree(self) -> int:
        return max((c.degree for c in self.clauses), default=0)

    def occurring_vars(self) -> list[int]:
        """Variables that appear in at least one clause, ascending."""
        return sorted({v for c in self.clauses for v in c.vars})

    def as_dict(self) -> dict[tuple[int, ...], float]:
        return {c.vars: c.theta for c in self.clauses}


def canonicalize(raw_clauses: Iterable[tuple[float, Sequence[int]]], num_vars: int) -> Polynomial:
    """Build a canonical polynomial from raw ``(theta, vars)`` pairs.

    Clauses on the same variable set are merged, zero clauses dropped and
    empty-variable clauses folded into the constant phase. Clause order
    follows first appearance.
    """
    merged: dict[tuple[int, ...], float] = {}
    constant = 0.0
    for theta, vs in raw_clauses:
        key = tuple(sorted(set(int(v) for v in vs)))
        for v in key:
            if v < 0 or v >= num_vars:
                raise DomainError(f"variable index {v} outside 0..{num_vars - 1}")
        if not key:
            constant += float(theta)
        else:
            merged[key] = merged.get(key, 0.0) + float(theta)
    clauses = []
    for key, theta in merged.items():
        t = wrap_angle(theta)
        if t != 0.0:
            clauses.append(Clause(t, key))
    return Polynomial(num_vars, tuple(clauses), wrap_angle(constant))


def evaluate(poly: Polynomial, assignment: Sequence[int]) -> float:
    """Value of f at a bit assignment (plain real sum, not reduced mod 2*pi)."""
    if len(assignment) != poly.num_vars:
        raise DomainError(f"assignment has length {len(assignment)}, expected {poly.num_vars}")
    bits = [int(b) for b in assignment]
    if any(b not in (0, 1) for b in bits):
        raise DomainError("assignment entries must be 0 or 1")
    total = poly.constant_phase
    for c in poly.clauses:
        if all(bits[v] for v in c.vars):
            total += c.theta
    return total


def exp_sum(poly: Polynomial, *, max_vars: int | None = None, threads: int = 1) -> complex:
    """Brute-force sum of exp(i f(x)) over all assignments.

    The assignment space is cut into fixed chunks and reduced pairwise, so
    the result does not depend on ``threads``.
    """
    cap = brute_force_cap(EXP_SUM_CAP, max_vars)
    check_cap(poly.num_vars, cap, "exp_sum variable count")
    masks = np.array([sum(1 << v for v in c.vars) for c in poly.clauses], dtype=np.uint64)
    thetas = np.array([c.theta for c in poly.clauses], dtype=np.float64)
    kern = _backend.kernels
    total = _backend.reduce_ranges(
        lambda lo, hi: kern.exp_sum_range(masks, thetas, lo, hi), 1 << poly.num_vars, threads
    )
    return unit_phase(poly.constant_phase) * total


def substitute(
    poly: Polynomial, fixed: Mapping[int, int], *, return_map: bool = False
) -> Polynomial | tuple[Polynomial, tuple[int, ...]]:
    """Fix some variables to bits and re-index the rest densely.

    With ``return_map`` the old index of each surviving variable is returned
    alongside, in new-index order.
    """
    for v, b in fixed.items():
        if v < 0 or v >= poly.num_vars:
            raise DomainError(f"fixed variable {v} outside 0..{poly.num_vars - 1}")
        if b not in (0, 1):
            raise DomainError(f"fixed value for x{v} must be 0 or 1")
    keep = tuple(v for v in range(poly.num_vars) if v not in fixed)
    index = {old: new for new, old in enumerate(keep)}
    raw: list[tuple[float, list[int]]] = [(poly.constant_phase, [])]
    for c in poly.clauses:
        if any(fixed.get(v) == 0 for v in c.vars):
            continue
        raw.append((c.theta, [index[v] for v in c.vars if v not in fixed]))
    out = canonicalize(raw, len(keep))
    return (out, keep) if return_map else out


def read_polynomial(text: str) -> Polynomial:
    """Parse the ``poly n=<int>`` text format."""
    lines = [ln.strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln and not ln.startswith("#")]
    if not lines or not lines[0].startswith("poly"):
        raise DomainError("polynomial text must start with 'poly n=<int>'")
    header = lines[0].split()
    try:
        (n,) = [int(tok[2:]) for tok in header[1:] if tok.startswith("n=")]
    except ValueError as exc:
        raise DomainError(f"bad polynomial header: {lines[0]!r}") from exc
    raw = []
    for ln in lines[1:]:
        toks = ln.split()
        try:
            raw.append((float(toks[0]), [int(t) for t in toks[1:]]))
        except ValueError as exc:
            raise DomainError(f"bad clause line: {ln!r}") from exc
    return canonicalize(raw, n)


def write_polynomial(poly: Polynomial) -> str:
    out = [f"poly n={poly.num_vars}"]
    if poly.constant_phase:
        out.append(fmt_float(poly.constant_phase))
    for c in poly.clauses:
        out.append(" ".join([fmt_float(c.theta)] + [str(v) for v in c.vars]))
    return "\n".join(out) + "\n"
