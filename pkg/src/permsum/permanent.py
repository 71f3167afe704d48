"""Permanent engines, cycle-cover enumeration, Gurvits sampling and spectral norms."""
from __future__ import annotations

import json
import math
import warnings
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import _backend
from ._limits import brute_force_cap, check_cap
from ._numeric import fmt_complex
from .errors import DomainError, NumericError, ResourceError

NAIVE_CAP = 10
COVER_CAP = 8
RYSER_CAP = 32
SPARSE_STATE_CAP = 5_000_000
METHODS = ("naive", "ryser", "cycle_cover", "block_auto", "sparse")
GURVITS_BLOCK = 4096


@dataclass(frozen=True)
class CycleCover:
    perm: tuple[int, ...]
    weight: complex

    def cycles(self) -> list[tuple[int, ...]]:
        """Disjoint cycles, each starting at its smallest vertex."""
        seen, out = set(), []
        for s in range(len(self.perm)):
            if s in seen:
                continue
            cyc, v = [], s
            while v not in seen:
                seen.add(v)
                cyc.append(v)
                v = self.perm[v]
            out.append(tuple(cyc))
        return out


def as_matrix(m) -> np.ndarray:
    a = np.asarray(m, dtype=np.complex128)
    if a.ndim == 1 and a.size == 0:
        a = a.reshape(0, 0)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise DomainError(f"expected a square matrix, got shape {a.shape}")
    return a


def _naive(a: np.ndarray) -> complex:
    """Sum over permutations, row by row, skipping zero entries."""
    n = a.shape[0]
    if n == 0:
        return 1 + 0j
    rows = [[(j, complex(a[i, j])) for j in range(n) if a[i, j] != 0] for i in range(n)]
    if n == 1:
        return complex(a[0, 0])
    r1, r2 = [complex(v) for v in a[n - 2]], [complex(v) for v in a[n - 1]]
    full = (1 << n) - 1

    def rec(i: int, used: int) -> complex:
        if i == n - 2:
            free = full & ~used
            j = (free & -free).bit_length() - 1
            k = free.bit_length() - 1
            return r1[j] * r2[k] + r1[k] * r2[j]
        s = 0j
        for j, w in rows[i]:
            if not used >> j & 1:
                s += w * rec(i + 1, used | 1 << j)
        return s

    return rec(0, 0)


def _sparse(a: np.ndarray, state_cap: int = SPARSE_STATE_CAP) -> complex:
    """Row expansion over nonzero entries, memoised on the set of used columns.

    Exact and free of the cancellation that inclusion-exclusion suffers on
    large sparse graphs; cost grows with the number of reachable column sets.
    """
    n = a.shape[0]
    if n > 63:
        raise ResourceError("sparse permanent supports at most 63 rows")
    rows = [[(int(j), complex(a[i, j])) for j in np.flatnonzero(a[i])] for i in range(n)]
    memo: dict[int, complex] = {}
    full = (1 << n) - 1

    def rec(i: int, used: int) -> complex:
        if used == full:
            return 1 + 0j
        hit = memo.get(used)
        if hit is not None:
            return hit
        s = 0j
        for j, w in rows[i]:
            if not used >> j & 1:
                s += w * rec(i + 1, used | 1 << j)
        if len(memo) >= state_cap:
            raise ResourceError(f"sparse permanent exceeded {state_cap} memoised states")
        memo[used] = s
        return s

    return rec(0, 0)


def _walk_covers(a: np.ndarray, emit) -> None:
    """Build covers one cycle at a time and call ``emit(perm, weight)`` for each.

    Each cycle starts at the smallest uncovered vertex and follows nonzero
    edges until the walk closes.
    """
    n = a.shape[0]
    succ = [[(j, complex(a[i, j])) for j in range(n) if a[i, j] != 0] for i in range(n)]
    perm = [-1] * n
    full = (1 << n) - 1

    def close_cycle(start: int, v: int, covered: int, w: complex) -> None:
        for u, auv in succ[v]:
            if u == start:
                perm[v] = u
                next_cycle(covered, w * auv)
                perm[v] = -1
            elif not covered >> u & 1:
                perm[v] = u
                close_cycle(start, u, covered | 1 << u, w * auv)
                perm[v] = -1

    def next_cycle(covered: int, w: complex) -> None:
        if covered == full:
            emit(perm, w)
            return
        start = (~covered & (covered + 1)).bit_length() - 1
        close_cycle(start, start, covered | 1 << start, w)

    next_cycle(0, 1 + 0j)


def enumerate_cycle_covers(m, *, max_n: int | None = None) -> list[CycleCover]:
    """All cycle covers with nonzero weight."""
    a = as_matrix(m)
    check_cap(a.shape[0], brute_force_cap(COVER_CAP, max_n), "cycle-cover enumeration")
    out: list[CycleCover] = []
    _walk_covers(a, lambda perm, w: out.append(CycleCover(tuple(perm), w)))
    return out


def _cover_sum(a: np.ndarray) -> complex:
    total = [0j]

    def emit(_perm, w: complex) -> None:
        total[0] += w

    _walk_covers(a, emit)
    return total[0]


def _ryser(a: np.ndarray, threads: int = 1) -> complex:
    n = a.shape[0]
    if n == 0:
        return 1 + 0j
    a = np.ascontiguousarray(a)
    kern = _backend.kernels
    total = _backend.reduce_ranges(lambda lo, hi: kern.ryser_range(a, lo, hi), 1 << n, threads)
    out = -total if n % 2 else total
    return complex(out.real + 0.0, out.imag + 0.0)  # drop signed zeros


def components(a: np.ndarray) -> list[list[int]]:
    """Connected components of the symmetrised support, each sorted."""
    n = a.shape[0]
    parent = list(range(n))

    def find(i: int) -> int:
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    rows, cols = np.nonzero(a)
    for i, j in zip(rows.tolist(), cols.tolist()):
        ri, rj = find(i), find(j)
        if ri != rj:
            parent[max(ri, rj)] = min(ri, rj)
    groups: dict[int, list[int]] = {}
    for i in range(n):
        groups.setdefault(find(i), []).append(i)
    return list(groups.values())


def permanent(m, method: str = "ryser", *, threads: int = 1, max_n: int | None = None) -> complex:
    """Permanent of a square complex matrix; per of the 0x0 matrix is 1.

    Parameters
    ----------
    m : array_like
        Square matrix.
    method : {"naive", "ryser", "cycle_cover", "block_auto", "sparse"}
        ``block_auto`` splits by connected components of the symmetrised
        support and runs Ryser on each block. ``sparse`` is an exact
        memoised expansion suited to large sparse graphs.
    threads : int
        Worker threads for Ryser; the result is identical for any value.
    max_n : int, optional
        Overrides the brute-force cap of ``naive`` and ``cycle_cover``.
    """
    a = as_matrix(m)
    n = a.shape[0]
    if method == "naive":
        check_cap(n, brute_force_cap(NAIVE_CAP, max_n), "naive permanent")
        return _naive(a)
    if method == "cycle_cover":
        check_cap(n, brute_force_cap(NAIVE_CAP, max_n), "cycle-cover permanent")
        return _cover_sum(a)
    if method == "ryser":
        check_cap(n, RYSER_CAP, "ryser permanent")
        return _ryser(a, threads)
    if method == "sparse":
        return _sparse(a)
    if method == "block_auto":
        out = 1 + 0j
        for comp in components(a):
            check_cap(len(comp), RYSER_CAP, "ryser permanent of a block")
            out *= _ryser(a[np.ix_(comp, comp)], threads)
            if out == 0:
                break
        return out
    raise DomainError(f"unknown permanent method {method!r}; choose from {METHODS}")


def gurvits_samples(m, samples: int, seed: int = 0) -> np.ndarray:
    """Individual estimator values prod_i (A x)_i * prod_i x_i for x uniform in {-1, 1}^n.

    Sample ``s`` belongs to block ``s // 4096``, whose generator is seeded
    from ``(seed, block)``; results therefore do not depend on how blocks
    are scheduled.
    """
    a = as_matrix(m)
    if samples < 1:
        raise DomainError("need at least one sample")
    n = a.shape[0]
    out = np.empty(samples, dtype=np.complex128)
    for b, lo in enumerate(range(0, samples, GURVITS_BLOCK)):
        hi = min(lo + GURVITS_BLOCK, samples)
        rng = np.random.default_rng(np.random.SeedSequence(entropy=seed, spawn_key=(b,)))
        x = rng.integers(0, 2, size=(hi - lo, n)).astype(np.float64) * 2.0 - 1.0
        out[lo:hi] = np.prod(x @ a.T, axis=1) * np.prod(x, axis=1)
    return out


def gurvits_estimate(m, samples: int, seed: int = 0) -> complex:
    """Unbiased Monte-Carlo estimate of per(m); deterministic for a fixed seed."""
    vals = gurvits_samples(m, samples, seed)
    blocks = [vals[lo : lo + GURVITS_BLOCK].sum() for lo in range(0, samples, GURVITS_BLOCK)]
    return complex(_backend.tree_sum(blocks) / samples)


def _power(a: np.ndarray, v: np.ndarray, tol: float, max_iter: int) -> tuple[float, int]:
    ah = a.conj().T
    lam_old = -1.0
    for it in range(1, max_iter + 1):
        w = ah @ (a @ v)
        lam = float(np.real(np.vdot(v, w)))
        nw = np.linalg.norm(w)
        if nw == 0.0:
            return 0.0, it
        v = w / nw
        if abs(lam - lam_old) <= tol * abs(lam):
            return math.sqrt(max(lam, 0.0)), it
        lam_old = lam
    raise NumericError(f"power iteration did not converge in {max_iter} iterations")


def spectral_norm(m, tol: float = 1e-10, max_iter: int = 10000) -> float:
    """Largest singular value by power iteration on A^H A.

    Starts from the normalised all-ones vector and again from a
    deterministic perturbation of it, keeping the larger value, which guards
    against a start vector orthogonal to the top singular space.
    """
    a = as_matrix(m)
    n = a.shape[0]
    if n == 0:
        raise DomainError("spectral norm of an empty matrix")
    if not np.any(a):
        return 0.0
    ones = np.ones(n, dtype=np.complex128) / math.sqrt(n)
    ramp = ones + 0.1 * np.exp(1j * np.arange(1, n + 1)) / math.sqrt(n)
    ramp /= np.linalg.norm(ramp)
    # the eigenvalue of A^H A converges at twice the rate of the singular value
    best = 0.0
    for v in (ones, ramp):
        try:
            s, _ = _power(a, v, tol * 1e-2, max_iter)
        except NumericError:
            warnings.warn("spectral norm: one start vector did not converge", RuntimeWarning)
            continue
        best = max(best, s)
    if best == 0.0 and np.any(a):
        raise NumericError(f"power iteration did not converge in {max_iter} iterations")
    return best


def read_matrix(text: str) -> np.ndarray:
    """Parse dense matrix text (``n`` then n rows of ``re+imj`` tokens) or graph JSON."""
    stripped = text.strip()
    if stripped.startswith("{"):
        data = json.loads(stripped)
        n = int(data["n"])
        a = np.zeros((n, n), dtype=np.complex128)
        for i, j, re, im in data.get("entries", []):
            a[int(i), int(j)] = complex(re, im)
        return a
    lines = [ln for ln in stripped.splitlines() if ln.strip() and not ln.lstrip().startswith("#")]
    try:
        n = int(lines[0])
        rows = [[complex(tok) for tok in ln.split()] for ln in lines[1 : n + 1]]
    except (ValueError, IndexError) as exc:
        raise DomainError("cannot parse dense matrix text") from exc
    if len(rows) != n or any(len(r) != n for r in rows):
        raise DomainError(f"dense matrix text does not hold {n}x{n} entries")
    return np.array(rows, dtype=np.complex128).reshape(n, n)


def write_matrix(m: Sequence[Sequence[complex]] | np.ndarray) -> str:
    a = as_matrix(m)
    lines = [str(a.shape[0])] + [" ".join(fmt_complex(z) for z in row) for row in a]
    return "\n".join(lines) + "\n"
