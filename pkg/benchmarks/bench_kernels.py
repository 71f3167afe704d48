"""Time the compiled and numpy kernels on identical inputs.

    python3 benchmarks/bench_kernels.py [--repeat 3]
"""
from __future__ import annotations

import argparse
import time

import numpy as np

from permsum import _backend


def _ryser(kern, a: np.ndarray) -> complex:
    return _backend.reduce_ranges(lambda lo, hi: kern.ryser_range(a, lo, hi), 1 << a.shape[0])


def _exp_sum(kern, masks, thetas, n: int) -> complex:
    return _backend.reduce_ranges(lambda lo, hi: kern.exp_sum_range(masks, thetas, lo, hi), 1 << n)


def _best(fn, repeat: int) -> tuple[float, complex]:
    best, val = float("inf"), 0j
    for _ in range(repeat):
        t0 = time.perf_counter()
        val = fn()
        best = min(best, time.perf_counter() - t0)
    return best, val


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    rng = np.random.default_rng(args.seed)
    backends = ["python"]
    try:
        _backend.get_kernels("cython")
        backends.insert(0, "cython")
    except ImportError:
        print("compiled kernels unavailable; timing the fallback only")

    print(f"{'kernel':<10}{'size':>6}" + "".join(f"{b:>14}" for b in backends) + f"{'speedup':>10}")
    for n in (12, 16, 20):
        a = np.ascontiguousarray(rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n)))
        times, vals = [], []
        for b in backends:
            t, v = _best(lambda: _ryser(_backend.get_kernels(b), a), args.repeat)
            times.append(t)
            vals.append(v)
        _row("ryser", n, times, vals)
    for n in (16, 20, 22):
        k = 3 * n
        masks = np.array(
            [sum(1 << int(v) for v in rng.choice(n, rng.integers(1, 4), replace=False)) for _ in range(k)],
            dtype=np.uint64,
        )
        thetas = rng.uniform(0, 2 * np.pi, size=k)
        times, vals = [], []
        for b in backends:
            t, v = _best(lambda: _exp_sum(_backend.get_kernels(b), masks, thetas, n), args.repeat)
            times.append(t)
            vals.append(v)
        _row("exp_sum", n, times, vals)


def _row(name: str, n: int, times: list[float], vals: list[complex]) -> None:
    speed = f"{times[-1] / times[0]:9.1f}x" if len(times) > 1 else ""
    cells = "".join(f"{t * 1e3:12.2f}ms" for t in times)
    print(f"{name:<10}{n:>6}{cells}{speed}")
    if len(vals) > 1:
        scale = max(1.0, abs(vals[0]))
        assert abs(vals[0] - vals[1]) <= 1e-9 * scale, (name, n, vals)


if __name__ == "__main__":
    main()
