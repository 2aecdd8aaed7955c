"""numpy implementations of the kernels in ``_modp.pyx``.

Used when the compiled extension is unavailable; results are bit-identical.
"""

from __future__ import annotations

import numpy as np

_GOLDEN = np.uint64(0x9E3779B97F4A7C15)
_M1 = np.uint64(0xBF58476D1CE4E5B9)
_M2 = np.uint64(0x94D049BB133111EB)


def _splitmix(z: np.ndarray) -> np.ndarray:
    z = z + _GOLDEN
    z = (z ^ (z >> np.uint64(30))) * _M1
    z = (z ^ (z >> np.uint64(27))) * _M2
    return z ^ (z >> np.uint64(31))


def dense_rank(a: np.ndarray, p: int) -> int:
    nr, nc = a.shape
    r = 0
    for c in range(nc):
        if r == nr:
            break
        nz = np.flatnonzero(a[r:, c])
        if nz.size == 0:
            continue
        piv = r + int(nz[0])
        if piv != r:
            a[[r, piv], c:] = a[[piv, r], c:]
        inv = pow(int(a[r, c]), -1, p)
        a[r, c:] = (a[r, c:] * inv) % p
        below = a[r + 1:, c]
        rows = np.flatnonzero(below)
        if rows.size:
            rows = rows + r + 1
            f = (p - a[rows, c])[:, None]
            a[rows, c:] = (a[rows, c:] + f * a[r, c:][None, :]) % p
        r += 1
    return r


def compress(indptr, indices, data, ncols: int, k: int, p: int, seed: int) -> np.ndarray:
    nrows = len(indptr) - 1
    out = np.zeros((ncols, k), dtype=np.int64)
    if k == 0 or nrows == 0:
        return out
    counts = np.diff(indptr)
    row_of = np.repeat(np.arange(nrows, dtype=np.uint64), counts)
    t = np.arange(k, dtype=np.uint64)
    pu = np.uint64(p)
    chunk = max(1, (8 << 20) // k)
    with np.errstate(over="ignore"):
        for s in range(0, len(indices), chunk):
            rows = row_of[s:s + chunk]
            z = np.uint64(seed) + rows[:, None] * np.uint64(k) + t[None, :]
            rv = (_splitmix(z) % pu).astype(np.int64)
            contrib = (rv * np.asarray(data[s:s + chunk], dtype=np.int64)[:, None]) % p
            np.add.at(out, np.asarray(indices[s:s + chunk]), contrib)
            out %= p
    return out
