"""Public rank / kernel / solve entry points with strategy selection."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components

from .exact import ff_rank, kernel_basis_exact, solve_exact
from .modular import PRIMES, rank_mod_p
from .sparse import SparseMat

EXACT_THRESHOLD = 10**7
STRATEGIES = ("exact", "modular", "auto")


@dataclass(frozen=True)
class RankResult:
    rank: int
    method: str  # "exact" or "modular"
    certified: bool
    primes: tuple[int, ...] = field(default=())

    def __post_init__(self):
        if self.method not in ("exact", "modular"):
            raise ValueError(f"unknown method {self.method!r}")
        if self.method == "exact" and not self.certified:
            raise ValueError("exact ranks are always certified")


def blocks(m: SparseMat) -> list[tuple[list[int], list[int]]]:
    """Split ``m`` into independent blocks (connected components of the
    bipartite row/column graph).  Returns ``(rows, cols)`` index lists, each
    sorted; empty rows and columns are dropped."""
    nr, nc = m.shape
    if nr == 0 or nc == 0:
        return []
    ii, jj = [], []
    for j, c in enumerate(m.columns()):
        for i in c:
            ii.append(i)
            jj.append(j)
    if not ii:
        return []
    ii = np.asarray(ii, dtype=np.int64)
    jj = np.asarray(jj, dtype=np.int64) + nr
    n = nr + nc
    g = coo_matrix((np.ones(len(ii), dtype=np.int8), (ii, jj)), shape=(n, n))
    ncomp, labels = connected_components(g, directed=False)
    touched = np.zeros(n, dtype=bool)
    touched[ii] = True
    touched[jj] = True
    groups: dict[int, tuple[list[int], list[int]]] = {}
    for node in np.flatnonzero(touched):
        lab = int(labels[node])
        rows, cols = groups.setdefault(lab, ([], []))
        if node < nr:
            rows.append(int(node))
        else:
            cols.append(int(node - nr))
    return sorted(groups.values(), key=lambda rc: (rc[1][0], rc[0][0]))


def _block_exact(m: SparseMat, rows, cols) -> int:
    if len(rows) < len(cols):
        sub = m.select(rows, cols).transpose()
    else:
        sub = m.select(rows, cols)
    return ff_rank(sub.columns())


def _block_modular(m: SparseMat, rows, cols, primes) -> tuple[int, ...] | None:
    out = []
    for p in primes:
        r = rank_mod_p(m, p, rows, cols)
        if r is None:
            return None
        out.append(r)
    return tuple(out)


def rank(m: SparseMat, strategy: str = "auto", threshold: int = EXACT_THRESHOLD,
         primes: Sequence[int] = PRIMES) -> RankResult:
    """Rank of ``m`` over Q.

    ``exact`` runs fraction-free elimination.  ``modular`` reports the larger
    of the ranks modulo ``primes`` (each a lower bound for the rational rank).
    ``auto`` decides per independent block: blocks with at most ``threshold``
    entries (rows x cols) are eliminated exactly, larger ones modularly with
    an exact fallback when the primes disagree.
    """
    if strategy not in STRATEGIES:
        raise ValueError(f"unknown strategy {strategy!r}")
    primes = tuple(primes)
    total = 0
    used_modular = False
    for rows, cols in blocks(m):
        size = len(rows) * len(cols)
        if strategy == "exact" or (strategy == "auto" and size <= threshold):
            total += _block_exact(m, rows, cols)
            continue
        rs = _block_modular(m, rows, cols, primes)
        if rs is None or (strategy == "auto" and len(set(rs)) > 1):
            total += _block_exact(m, rows, cols)
            continue
        used_modular = True
        total += max(rs)
    if used_modular:
        return RankResult(total, "modular", False, primes)
    return RankResult(total, "exact", True)


def kernel_basis(m: SparseMat) -> list[list]:
    """Exact kernel basis as dense vectors; count = cols - rank."""
    out = []
    for v in kernel_basis_exact(m):
        x = [0] * m.ncols
        for k, val in v.items():
            x[k] = val.numerator if val.denominator == 1 else val
        out.append(x)
    return out


def solve(m: SparseMat, b: Sequence[object]) -> list | None:
    """Some ``x`` with ``m x = b`` (free variables zero), or ``None``."""
    return solve_exact(m, b)
