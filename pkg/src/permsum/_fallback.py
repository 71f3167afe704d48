"""Pure numpy versions of the compiled kernels, used when the extension is absent."""
from __future__ import annotations

import numpy as np


def _gray(k: np.ndarray) -> np.ndarray:
    return k ^ (k >> np.uint64(1))


def _ctz(k: np.ndarray) -> np.ndarray:
    low = k & (~k + np.uint64(1))
    return np.log2(low.astype(np.float64)).astype(np.int64)


def ryser_range(a: np.ndarray, start: int, stop: int) -> complex:
    """Signed Ryser partial sum over Gray-code indices ``start <= k < stop``.

    Row sums are advanced by a cumulative sum of signed column deltas, which
    is the vectorised form of the Gray-code update.
    """
    a = np.ascontiguousarray(a, dtype=np.complex128)
    n = a.shape[0]
    if stop <= start:
        return 0j
    g0 = start ^ (start >> 1)
    cols = [j for j in range(n) if (g0 >> j) & 1]
    base = a[:, cols].sum(axis=1) if cols else np.zeros(n, dtype=np.complex128)
    ks = np.arange(start + 1, stop, dtype=np.uint64)
    if ks.size:
        js = _ctz(ks)
        gs = _gray(ks)
        adding = ((gs >> js.astype(np.uint64)) & np.uint64(1)).astype(bool)
        deltas = a[:, js].T * np.where(adding, 1.0, -1.0)[:, None]
        rows = np.vstack([base[None, :], base[None, :] + np.cumsum(deltas, axis=0)])
        codes = np.concatenate([np.array([g0], dtype=np.uint64), gs])
    else:
        rows = base[None, :]
        codes = np.array([g0], dtype=np.uint64)
    prods = np.prod(rows, axis=1)
    parity = np.zeros(codes.shape, dtype=np.int64)
    c = codes.copy()
    while np.any(c):
        parity ^= (c & np.uint64(1)).astype(np.int64)
        c >>= np.uint64(1)
    prods = np.where(codes == 0, 0.0, prods)
    return complex(np.sum(np.where(parity == 1, -prods, prods)))


def exp_sum_range(masks: np.ndarray, thetas: np.ndarray, start: int, stop: int) -> complex:
    """Sum of exp(i * phase(x)) for assignments ``start <= x < stop``."""
    xs = np.arange(start, stop, dtype=np.uint64)
    phase = np.zeros(xs.shape, dtype=np.float64)
    for m, t in zip(np.asarray(masks, dtype=np.uint64), np.asarray(thetas, dtype=np.float64)):
        phase += np.where((xs & m) == m, t, 0.0)
    return complex(np.cos(phase).sum(), np.sin(phase).sum())
