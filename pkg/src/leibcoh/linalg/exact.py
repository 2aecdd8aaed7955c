"""Exact elimination: fraction-free ranks, rational echelon forms, kernels."""

from __future__ import annotations

import heapq
from fractions import Fraction
from math import gcd, lcm
from typing import Mapping, Sequence

from .sparse import SparseMat, norm_scalar


def integral_vector(v: Mapping[int, object]) -> dict[int, int]:
    """Scale a sparse rational vector to a primitive integer vector."""
    den = 1
    for x in v.values():
        if not isinstance(x, int):
            den = lcm(den, x.denominator)
    out = {}
    g = 0
    for k, x in v.items():
        if x:
            y = int(x * den)
            out[k] = y
            g = gcd(g, y)
    if g > 1:
        for k in out:
            out[k] //= g
    return out


def _content(v: dict[int, int]) -> int:
    g = 0
    for x in v.values():
        g = gcd(g, x)
        if g == 1:
            break
    return g


def ff_rank(vectors: Sequence[Mapping[int, object]]) -> int:
    """Rank of a family of sparse vectors by fraction-free elimination.

    Each vector is made primitive over the integers; reduction against a
    pivot ``u`` with leading index ``i`` is ``v <- u[i]/g * v - v[i]/g * u``
    followed by removal of the content, so no rationals are ever formed.
    The pivot of a vector is its smallest index.
    """
    pivots: dict[int, dict[int, int]] = {}
    rank = 0
    for vec in vectors:
        v = integral_vector(vec)
        if not v:
            continue
        heap = list(v)
        heapq.heapify(heap)
        while heap:
            lead = heapq.heappop(heap)
            b = v.get(lead)
            if b is None:
                continue
            u = pivots.get(lead)
            if u is None:
                pivots[lead] = v
                rank += 1
                break
            a = u[lead]
            g = gcd(a, b)
            a //= g
            b //= g
            if a != 1:
                for k in v:
                    v[k] *= a
            for k, x in u.items():
                y = v.get(k)
                if y is None:
                    v[k] = -b * x
                    heapq.heappush(heap, k)
                else:
                    y -= b * x
                    if y:
                        v[k] = y
                    else:
                        del v[k]
            c = _content(v)
            if c > 1:
                for k in v:
                    v[k] //= c
    return rank


class Echelon:
    """Incrementally grown echelon basis of a subspace of Q^n.

    Vectors are sparse dicts.  Each stored pivot vector has leading entry 1
    at its smallest index and remembers which input vectors produced it, so
    :meth:`decompose` can express a vector of the span in terms of the inputs.
    """

    def __init__(self, track: bool = True):
        self.pivots: dict[int, dict[int, Fraction]] = {}
        self.combos: dict[int, dict[int, Fraction]] = {}
        self.track = track
        self.count = 0

    @property
    def rank(self) -> int:
        return len(self.pivots)

    def _reduce(self, vec: Mapping[int, object], combo: dict | None):
        v = {k: Fraction(x) for k, x in vec.items() if x}
        heap = list(v)
        heapq.heapify(heap)
        while heap:
            lead = heapq.heappop(heap)
            b = v.get(lead)
            if b is None:
                continue
            u = self.pivots.get(lead)
            if u is None:
                continue
            for k, x in u.items():
                y = v.get(k)
                if y is None:
                    v[k] = -b * x
                    heapq.heappush(heap, k)
                else:
                    y -= b * x
                    if y:
                        v[k] = y
                    else:
                        del v[k]
            if combo is not None:
                for k, x in self.combos[lead].items():
                    y = combo.get(k, 0) - b * x
                    if y:
                        combo[k] = y
                    else:
                        combo.pop(k, None)
        return v

    def add(self, vec: Mapping[int, object]) -> dict[int, Fraction] | None:
        """Insert ``vec``.  Returns ``None`` if it was independent, otherwise
        the dependency: coefficients ``c`` over earlier inputs with
        ``vec = sum c[j] * input_j``."""
        idx = self.count
        self.count += 1
        combo = {idx: Fraction(1)} if self.track else None
        v = self._reduce(vec, combo)
        if not v:
            if combo is None:
                return {}
            return {k: -x for k, x in combo.items() if k != idx}
        lead = min(v)
        s = v[lead]
        if s != 1:
            inv = 1 / s
            v = {k: x * inv for k, x in v.items()}
            if combo is not None:
                combo = {k: x * inv for k, x in combo.items()}
        self.pivots[lead] = v
        if combo is not None:
            self.combos[lead] = combo
        return None

    def contains(self, vec: Mapping[int, object]) -> bool:
        return not self._reduce(vec, None)

    def decompose(self, vec: Mapping[int, object]) -> dict[int, Fraction] | None:
        """Coefficients over the inserted vectors reproducing ``vec``, or
        ``None`` if ``vec`` is outside the span."""
        combo: dict[int, Fraction] = {}
        v = self._reduce(vec, combo)
        if v:
            return None
        return {k: -x for k, x in combo.items()}


def rref(vectors: Sequence[Mapping[int, object]]) -> tuple[list[dict[int, Fraction]], list[int]]:
    """Reduced row echelon basis of the span of ``vectors``.

    Returns ``(rows, pivots)`` with rows sorted by pivot; each row has a 1 at
    its pivot and zeros at every other pivot position.  The result depends
    only on the span.
    """
    ech = Echelon(track=False)
    for v in vectors:
        ech.add(v)
    piv = sorted(ech.pivots)
    rows = {p: dict(ech.pivots[p]) for p in piv}
    for p in reversed(piv):
        row = rows[p]
        for q in piv:
            if q <= p:
                continue
            c = row.get(q)
            if c:
                for k, x in rows[q].items():
                    y = row.get(k, 0) - c * x
                    if y:
                        row[k] = y
                    else:
                        row.pop(k, None)
    return [rows[p] for p in piv], piv


def kernel_basis_exact(m: SparseMat) -> list[dict[int, Fraction]]:
    """Kernel basis of ``m`` as sparse dicts (one per free column).

    Columns are processed left to right; every dependent column ``j`` gives
    the vector with ``x_j = 1``, the earlier pivot columns solved, and all
    other free variables zero, i.e. the reduced-echelon kernel basis.
    """
    ech = Echelon(track=True)
    out = []
    for j in range(m.ncols):
        dep = ech.add(m.col(j))
        if dep is not None:
            v = {k: -x for k, x in dep.items()}
            v[j] = Fraction(1)
            out.append(v)
    return out


def solve_exact(m: SparseMat, b: Sequence[object]) -> list | None:
    """One solution of ``m x = b`` or ``None``.

    The row-reduced echelon form of ``[m | b]`` is formed and the free
    variables are set to zero.
    """
    if len(b) != m.nrows:
        raise ValueError(f"right-hand side has length {len(b)}, expected {m.nrows}")
    n = m.ncols
    rows = m.row_dicts()
    aug = []
    for i, r in enumerate(rows):
        r = dict(r)
        if b[i]:
            r[n] = b[i]
        if r:
            aug.append(r)
    red, piv = rref(aug)
    if n in piv:
        return None
    x = [0] * n
    for row, p in zip(red, piv):
        x[p] = norm_scalar(row.get(n, 0))
    return x


def dense_rank_oracle(rows: Sequence[Sequence[object]]) -> int:
    """Textbook dense Gaussian elimination over Fractions (test oracle)."""
    a = [[Fraction(x) for x in r] for r in rows]
    if not a:
        return 0
    nr, nc = len(a), len(a[0])
    r = 0
    for c in range(nc):
        p = next((i for i in range(r, nr) if a[i][c] != 0), None)
        if p is None:
            continue
        a[r], a[p] = a[p], a[r]
        for i in range(r + 1, nr):
            if a[i][c]:
                f = a[i][c] / a[r][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        r += 1
        if r == nr:
            break
    return r
