"""NumPy implementations of the routines in ``_kernels.pyx``.

Annealing is vectorised across reads: every read owns one SplitMix64 lane
and the lanes advance in lockstep, consuming draws in the same order as the
compiled per-read loop. Enumeration evaluates blocks of states directly.
"""

from __future__ import annotations

import numpy as np

from .rng import next_double_lanes, next_u64_lanes

_CHUNK = 1 << 15


def anneal(w: np.ndarray, v: np.ndarray, betas: np.ndarray, seed: int,
           reads: int, n_threads: int = 1) -> np.ndarray:
    n = v.shape[0]
    if n == 0 or reads == 0:
        return np.zeros((reads, n), dtype=np.uint8)
    states = np.uint64(seed) ^ np.arange(reads, dtype=np.uint64)
    rows = np.arange(reads)

    q = np.empty((reads, n), dtype=np.uint8)
    for a in range(n):
        q[:, a] = (next_u64_lanes(states) >> np.uint64(63)).astype(np.uint8)
    field = np.tile(v, (reads, 1))
    for k in range(n):
        field += q[:, k:k + 1] * w[:, k]

    perm = np.empty((reads, n), dtype=np.int64)
    with np.errstate(over="ignore"):
        for beta in betas:
            perm[:] = np.arange(n)
            for i in range(n - 1, 0, -1):
                j = (next_double_lanes(states) * (i + 1)).astype(np.int64)
                pi = perm[:, i].copy()
                perm[:, i] = perm[rows, j]
                perm[rows, j] = pi
            for k in range(n):
                a = perm[:, k]
                dq = 1.0 - 2.0 * q[rows, a]
                delta = dq * field[rows, a]
                u = next_double_lanes(states)
                accept = (delta <= 0.0) | (u < np.exp(-(beta * delta)))
                if not accept.any():
                    continue
                hit = rows[accept]
                ah = a[accept]
                q[hit, ah] ^= 1
                field[hit] += dq[accept, None] * w[ah]
    return q


def _block_bits(start: int, stop: int, n: int) -> np.ndarray:
    idx = np.arange(start, stop, dtype=np.int64)
    return ((idx[:, None] >> np.arange(n - 1, -1, -1)) & 1).astype(np.float64)


def _block_energies(w: np.ndarray, v: np.ndarray, start: int, stop: int) -> np.ndarray:
    x = _block_bits(start, stop, v.shape[0])
    return x @ v + 0.5 * np.einsum("ij,ij->i", x @ w, x)


def exhaustive_min(w: np.ndarray, v: np.ndarray, tol: float) -> tuple[int, float]:
    n = v.shape[0]
    if n == 0:
        return 0, 0.0
    total = 1 << n
    emin = np.inf
    for start in range(0, total, _CHUNK):
        emin = min(emin, float(_block_energies(w, v, start, min(start + _CHUNK, total)).min()))
    for start in range(0, total, _CHUNK):
        e = _block_energies(w, v, start, min(start + _CHUNK, total))
        hits = np.flatnonzero(e <= emin + tol)
        if hits.size:
            return start + int(hits[0]), float(e[hits[0]])
    raise AssertionError("unreachable: minimum not revisited")


def all_energies(w: np.ndarray, v: np.ndarray) -> np.ndarray:
    n = v.shape[0]
    total = 1 << n
    if n == 0:
        return np.zeros(1)
    return np.concatenate([_block_energies(w, v, s, min(s + _CHUNK, total))
                           for s in range(0, total, _CHUNK)])
