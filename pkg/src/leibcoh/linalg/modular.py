"""Rank modulo word-sized primes.

The compiled kernels from ``_modp`` are used when the extension has been
built; otherwise the numpy versions in ``_modp_py`` are selected at import.
Set ``LEIBCOH_PURE_PYTHON=1`` to force the fallback.
"""

from __future__ import annotations

import os

import numpy as np

from .sparse import SparseMat

if os.environ.get("LEIBCOH_PURE_PYTHON"):
    from . import _modp_py as _kernels
    BACKEND = "python"
else:
    try:
        from . import _modp as _kernels
        BACKEND = "compiled"
    except ImportError:  # extension not built
        from . import _modp_py as _kernels
        BACKEND = "python"

# two primes just below 2**31; products of residues fit in int64
PRIMES = (2147483647, 2147483629)
SEED = 0x5EED_1E1B

# dense blocks larger than this many entries are compressed first
DENSE_LIMIT = 4_000_000


def _residues(m: SparseMat, p: int, rows=None, cols=None):
    """CSR arrays of the (sub)matrix reduced mod p; ``None`` if a
    denominator is divisible by p."""
    if rows is None:
        rows = range(m.nrows)
    if cols is None:
        cols = range(m.ncols)
    rpos = {r: k for k, r in enumerate(rows)}
    per_row: list[list[tuple[int, int]]] = [[] for _ in range(len(rpos))]
    for cj, j in enumerate(cols):
        for i, v in m.col(j).items():
            k = rpos.get(i)
            if k is None:
                continue
            if isinstance(v, int):
                x = v % p
            else:
                d = v.denominator % p
                if d == 0:
                    return None
                x = v.numerator * pow(d, -1, p) % p
            if x:
                per_row[k].append((cj, x))
    indptr = np.zeros(len(per_row) + 1, dtype=np.int64)
    np.cumsum([len(r) for r in per_row], out=indptr[1:])
    indices = np.fromiter((c for r in per_row for c, _ in r), dtype=np.int64, count=int(indptr[-1]))
    data = np.fromiter((x for r in per_row for _, x in r), dtype=np.int64, count=int(indptr[-1]))
    return indptr, indices, data


def csr_rank(indptr, indices, data, ncols: int, p: int, seed: int = SEED) -> int:
    """Rank over F_p of a CSR matrix with entries already reduced mod p.

    Tall matrices are first multiplied by a pseudo-random ``ncols x nrows``
    matrix; the rank of the product never exceeds the true rank mod p and
    equals it unless an ``r x r`` minor vanishes by accident (probability at
    most ``r / p``).
    """
    nrows = len(indptr) - 1
    if nrows == 0 or ncols == 0 or len(data) == 0:
        return 0
    if nrows > 2 * ncols or nrows * ncols > DENSE_LIMIT:
        k = min(ncols, nrows)
        a = _kernels.compress(indptr, indices, data, ncols, k, p, seed)
        return int(_kernels.dense_rank(np.ascontiguousarray(a), p))
    a = np.zeros((nrows, ncols), dtype=np.int64)
    counts = np.diff(indptr)
    a[np.repeat(np.arange(nrows), counts), indices] = data
    if ncols > nrows:
        a = np.ascontiguousarray(a.T)
    return int(_kernels.dense_rank(a, p))


def rank_mod_p(m: SparseMat, p: int, rows=None, cols=None) -> int | None:
    """Rank of ``m`` (or a submatrix) over F_p; ``None`` if p divides a denominator."""
    nc = m.ncols if cols is None else len(cols)
    nr = m.nrows if rows is None else len(rows)
    if nr > 2 * nc:
        res = _residues(m, p, rows, cols)
        if res is None:
            return None
        return csr_rank(*res, nc, p)
    # wide or square: work on the transpose so the compressed side is short
    res = _residues(m, p, rows, cols)
    if res is None:
        return None
    indptr, indices, data = res
    if nc > 2 * nr:
        # transpose CSR -> CSR of the transpose
        counts = np.bincount(indices, minlength=nc)
        tptr = np.zeros(nc + 1, dtype=np.int64)
        np.cumsum(counts, out=tptr[1:])
        row_of = np.repeat(np.arange(nr, dtype=np.int64), np.diff(indptr))
        order = np.argsort(indices, kind="stable")
        return csr_rank(tptr, row_of[order], data[order], nr, p)
    return csr_rank(indptr, indices, data, nc, p)
