"""Immutable sparse matrices over the rationals.

Entries are stored column-major (one dict per column, row -> value) because
coboundary matrices are assembled one basis cochain at a time.  Values are
``int`` or ``fractions.Fraction``; integral fractions are normalised to ``int``
so that the fraction-free and modular paths can use them directly.
"""

from __future__ import annotations

from fractions import Fraction
from math import lcm
from typing import Iterable, Mapping, Sequence


Rational = Fraction


def as_rational(x) -> Fraction:
    """Coerce ints, Fractions and "p/q" strings to a Fraction."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, str):
        return Fraction(x.replace("−", "-"))
    if isinstance(x, float):
        raise TypeError("floats are not accepted; pass an int, Fraction or 'p/q' string")
    return Fraction(x)


def norm_scalar(x):
    """Return ``x`` as an int when it is integral, else as a Fraction."""
    if isinstance(x, int):
        return x
    x = as_rational(x)
    return x.numerator if x.denominator == 1 else x


class SparseMat:
    """Sparse ``nrows x ncols`` matrix with exact entries.

    Never mutate the dicts returned by :meth:`col`; the matrix is treated as
    an immutable value and may be shared between threads.
    """

    __slots__ = ("nrows", "ncols", "_cols", "_hash")

    def __init__(self, nrows: int, ncols: int, columns: Sequence[Mapping[int, object]] | None = None):
        if nrows < 0 or ncols < 0:
            raise ValueError("negative shape")
        self.nrows = nrows
        self.ncols = ncols
        cols = []
        if columns is None:
            cols = [{} for _ in range(ncols)]
        else:
            if len(columns) != ncols:
                raise ValueError(f"expected {ncols} columns, got {len(columns)}")
            for c in columns:
                d = {}
                for r, v in c.items():
                    if not 0 <= r < nrows:
                        raise IndexError(f"row index {r} out of range for {nrows} rows")
                    if v:
                        d[r] = norm_scalar(v)
                cols.append(d)
        self._cols = tuple(cols)
        self._hash = None

    @classmethod
    def _trusted(cls, nrows, ncols, cols):
        # columns already normalised: no zeros, indices in range
        m = cls.__new__(cls)
        m.nrows = nrows
        m.ncols = ncols
        m._cols = tuple(cols)
        m._hash = None
        return m

    @classmethod
    def zeros(cls, nrows: int, ncols: int) -> "SparseMat":
        return cls._trusted(nrows, ncols, [{} for _ in range(ncols)])

    @classmethod
    def identity(cls, n: int) -> "SparseMat":
        return cls._trusted(n, n, [{i: 1} for i in range(n)])

    @classmethod
    def from_dense(cls, rows: Sequence[Sequence[object]], ncols: int | None = None) -> "SparseMat":
        nrows = len(rows)
        if ncols is None:
            ncols = len(rows[0]) if nrows else 0
        cols = [{} for _ in range(ncols)]
        for i, row in enumerate(rows):
            if len(row) != ncols:
                raise ValueError("ragged rows")
            for j, v in enumerate(row):
                if v:
                    cols[j][i] = norm_scalar(v)
        return cls._trusted(nrows, ncols, cols)

    @classmethod
    def from_entries(cls, nrows: int, ncols: int, entries: Mapping[tuple[int, int], object]) -> "SparseMat":
        cols = [{} for _ in range(ncols)]
        for (i, j), v in entries.items():
            if not (0 <= i < nrows and 0 <= j < ncols):
                raise IndexError(f"entry {(i, j)} out of range")
            if v:
                cols[j][i] = norm_scalar(v)
        return cls._trusted(nrows, ncols, cols)

    @classmethod
    def from_columns(cls, nrows: int, columns: Iterable[Mapping[int, object]]) -> "SparseMat":
        cols = list(columns)
        return cls(nrows, len(cols), cols)

    # -- access -----------------------------------------------------------

    @property
    def shape(self) -> tuple[int, int]:
        return (self.nrows, self.ncols)

    def col(self, j: int) -> Mapping[int, object]:
        return self._cols[j]

    def columns(self):
        return self._cols

    def __getitem__(self, ij):
        i, j = ij
        return self._cols[j].get(i, 0)

    def nnz(self) -> int:
        return sum(len(c) for c in self._cols)

    def entries(self) -> dict[tuple[int, int], object]:
        return {(i, j): v for j, c in enumerate(self._cols) for i, v in c.items()}

    def triplets(self):
        for j, c in enumerate(self._cols):
            for i, v in c.items():
                yield i, j, v

    def row_dicts(self) -> list[dict[int, object]]:
        rows = [{} for _ in range(self.nrows)]
        for j, c in enumerate(self._cols):
            for i, v in c.items():
                rows[i][j] = v
        return rows

    def to_dense(self) -> list[list[object]]:
        out = [[0] * self.ncols for _ in range(self.nrows)]
        for j, c in enumerate(self._cols):
            for i, v in c.items():
                out[i][j] = v
        return out

    def is_zero(self) -> bool:
        return all(not c for c in self._cols)

    def is_integral(self) -> bool:
        return all(isinstance(v, int) for c in self._cols for v in c.values())

    def denominator_lcm(self) -> int:
        den = 1
        for c in self._cols:
            for v in c.values():
                if not isinstance(v, int):
                    den = lcm(den, v.denominator)
        return den

    # -- algebra ----------------------------------------------------------

    def transpose(self) -> "SparseMat":
        return SparseMat._trusted(self.ncols, self.nrows, self.row_dicts())

    def matvec(self, v: Sequence[object] | Mapping[int, object]) -> list:
        """Dense product ``self @ v``; ``v`` may be a list or a sparse dict."""
        out = [0] * self.nrows
        items = v.items() if isinstance(v, Mapping) else enumerate(v)
        for j, x in items:
            if x:
                for i, a in self._cols[j].items():
                    out[i] += a * x
        return [norm_scalar(x) if x else 0 for x in out]

    def apply_sparse(self, v: Mapping[int, object]) -> dict[int, object]:
        out: dict[int, object] = {}
        for j, x in v.items():
            if x:
                for i, a in self._cols[j].items():
                    y = out.get(i, 0) + a * x
                    if y:
                        out[i] = y
                    else:
                        out.pop(i, None)
        return out

    def __matmul__(self, other: "SparseMat") -> "SparseMat":
        if self.ncols != other.nrows:
            raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
        cols = [{i: norm_scalar(x) for i, x in self.apply_sparse(c).items()} for c in other._cols]
        return SparseMat._trusted(self.nrows, other.ncols, cols)

    def __add__(self, other: "SparseMat") -> "SparseMat":
        if self.shape != other.shape:
            raise ValueError("shape mismatch")
        cols = []
        for a, b in zip(self._cols, other._cols):
            d = dict(a)
            for i, v in b.items():
                y = d.get(i, 0) + v
                if y:
                    d[i] = norm_scalar(y)
                else:
                    d.pop(i, None)
            cols.append(d)
        return SparseMat._trusted(self.nrows, self.ncols, cols)

    def __neg__(self) -> "SparseMat":
        return self.scale(-1)

    def __sub__(self, other: "SparseMat") -> "SparseMat":
        return self + (-other)

    def scale(self, s) -> "SparseMat":
        s = norm_scalar(s)
        if not s:
            return SparseMat.zeros(self.nrows, self.ncols)
        cols = [{i: norm_scalar(v * s) for i, v in c.items()} for c in self._cols]
        return SparseMat._trusted(self.nrows, self.ncols, cols)

    def select(self, rows: Sequence[int] | None = None, cols: Sequence[int] | None = None) -> "SparseMat":
        """Submatrix on the given row and column index lists (in that order)."""
        cols = range(self.ncols) if cols is None else cols
        if rows is None:
            return SparseMat._trusted(self.nrows, len(cols), [dict(self._cols[j]) for j in cols])
        pos = {r: k for k, r in enumerate(rows)}
        out = []
        for j in cols:
            out.append({pos[i]: v for i, v in self._cols[j].items() if i in pos})
        return SparseMat._trusted(len(rows), len(cols), out)

    def hstack(self, other: "SparseMat") -> "SparseMat":
        if self.nrows != other.nrows:
            raise ValueError("row mismatch")
        return SparseMat._trusted(self.nrows, self.ncols + other.ncols, list(self._cols) + list(other._cols))

    # -- value semantics --------------------------------------------------

    def __eq__(self, other):
        if not isinstance(other, SparseMat):
            return NotImplemented
        return self.shape == other.shape and self._cols == other._cols

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.nrows, self.ncols, tuple(frozenset(c.items()) for c in self._cols)))
        return self._hash

    def __repr__(self):
        return f"SparseMat({self.nrows}x{self.ncols}, nnz={self.nnz()})"
