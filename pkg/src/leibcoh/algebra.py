"""Algebra laws given by structure constants, and subspaces of them.

A law on ``k^n`` is stored as ``c[(i, j)] = {k: c_ij^k}`` so that
``[e_i, e_j] = sum_k c_ij^k e_k``.  Brackets are right Leibniz:
``[[x, y], z] = [[x, z], y] + [x, [y, z]]``.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .errors import NotAnIdeal, NotLeibniz, SingularMatrix
from .linalg import SparseMat, kernel_basis, norm_scalar, rref

Vector = Sequence[object]


def _clean(d: Mapping[int, object]) -> dict[int, object]:
    return {k: norm_scalar(v) for k, v in d.items() if v}


class AlgebraLaw:
    """Bilinear law on ``k^dim`` with exact structure constants."""

    __slots__ = ("dim", "labels", "_c", "meta", "_left", "_right")

    def __init__(self, dim: int, brackets: Mapping[tuple[int, int], Mapping[int, object]],
                 labels: Sequence[str] | None = None, meta: dict | None = None):
        table = {}
        for (i, j), terms in brackets.items():
            if not (0 <= i < dim and 0 <= j < dim):
                raise IndexError(f"bracket index {(i, j)} out of range for dim {dim}")
            t = _clean(terms)
            for k in t:
                if not 0 <= k < dim:
                    raise IndexError(f"output index {k} out of range for dim {dim}")
            if t:
                table[(i, j)] = t
        self.dim = dim
        self.labels = tuple(labels) if labels is not None else tuple(f"e{i}" for i in range(dim))
        if len(self.labels) != dim:
            raise ValueError("need one label per basis element")
        self._c = table
        self.meta = dict(meta or {})
        self._left = None
        self._right = None

    # structure constants ------------------------------------------------

    def bracket(self, i: int, j: int) -> Mapping[int, object]:
        """``[e_i, e_j]`` as a sparse dict (do not mutate)."""
        return self._c.get((i, j), {})

    def c(self, i: int, j: int, k: int):
        return self._c.get((i, j), {}).get(k, 0)

    def table(self) -> dict[tuple[int, int], dict[int, object]]:
        return {key: dict(v) for key, v in self._c.items()}

    def nonzero_count(self) -> int:
        return sum(len(v) for v in self._c.values())

    def mul(self, x: Vector | Mapping[int, object], y: Vector | Mapping[int, object]) -> dict[int, object]:
        """Bracket of two vectors, returned as a sparse dict."""
        xs = x.items() if isinstance(x, Mapping) else enumerate(x)
        ys = list(y.items() if isinstance(y, Mapping) else enumerate(y))
        out: dict[int, object] = {}
        for i, a in xs:
            if not a:
                continue
            for j, b in ys:
                if not b:
                    continue
                for k, c in self._c.get((i, j), {}).items():
                    out[k] = out.get(k, 0) + a * b * c
        return _clean(out)

    def left_mult(self, i: int) -> SparseMat:
        """Matrix of ``y -> [e_i, y]``."""
        if self._left is None:
            self._left = [SparseMat(self.dim, self.dim, [self.bracket(a, j) for j in range(self.dim)])
                          for a in range(self.dim)]
        return self._left[i]

    def right_mult(self, i: int) -> SparseMat:
        """Matrix of ``y -> [y, e_i]``."""
        if self._right is None:
            self._right = [SparseMat(self.dim, self.dim, [self.bracket(j, a) for j in range(self.dim)])
                           for a in range(self.dim)]
        return self._right[i]

    def by_output(self) -> dict[int, list[tuple[int, int, object]]]:
        """``k -> [(i, j, c_ij^k)]``: all basis pairs whose bracket hits e_k."""
        out: dict[int, list] = {}
        for (i, j), terms in self._c.items():
            for k, v in terms.items():
                out.setdefault(k, []).append((i, j, v))
        return out

    def with_meta(self, **kw) -> "AlgebraLaw":
        meta = dict(self.meta)
        meta.update(kw)
        return AlgebraLaw(self.dim, self._c, self.labels, meta)

    def __eq__(self, other):
        if not isinstance(other, AlgebraLaw):
            return NotImplemented
        return self.dim == other.dim and self._c == other._c

    def __hash__(self):
        return hash((self.dim, frozenset((k, frozenset(v.items())) for k, v in self._c.items())))

    def __repr__(self):
        name = self.meta.get("name", "law")
        return f"AlgebraLaw({name}, dim={self.dim}, nnz={self.nonzero_count()})"


class Subspace:
    """Subspace of ``k^n`` held as a reduced row echelon basis."""

    __slots__ = ("ambient_dim", "basis", "pivots")

    def __init__(self, ambient_dim: int, vectors: Iterable[Vector | Mapping[int, object]] = ()):
        sparse = []
        for v in vectors:
            if isinstance(v, Mapping):
                sparse.append({k: x for k, x in v.items() if x})
            else:
                if len(v) != ambient_dim:
                    raise ValueError("vector length differs from ambient dimension")
                sparse.append({k: x for k, x in enumerate(v) if x})
        rows, piv = rref(sparse)
        self.ambient_dim = ambient_dim
        self.pivots = tuple(piv)
        self.basis = tuple(tuple(norm_scalar(r.get(k, 0)) for k in range(ambient_dim)) for r in rows)

    @classmethod
    def zero(cls, n: int) -> "Subspace":
        return cls(n)

    @classmethod
    def full(cls, n: int) -> "Subspace":
        return cls(n, [{i: 1} for i in range(n)])

    @classmethod
    def coordinate(cls, n: int, indices: Iterable[int]) -> "Subspace":
        return cls(n, [{i: 1} for i in indices])

    @property
    def dim(self) -> int:
        return len(self.basis)

    def reduce(self, v: Vector | Mapping[int, object]) -> list:
        """``v`` minus its echelon reduction; zero at every pivot position."""
        if isinstance(v, Mapping):
            w = [0] * self.ambient_dim
            for k, x in v.items():
                w[k] = x
        else:
            w = list(v)
        for row, p in zip(self.basis, self.pivots):
            c = w[p]
            if c:
                w = [a - c * b for a, b in zip(w, row)]
        return [norm_scalar(x) if x else 0 for x in w]

    def contains(self, v) -> bool:
        return not any(self.reduce(v))

    def coordinates(self, v) -> list:
        """Coefficients of ``v`` in :attr:`basis`; raises if ``v`` is outside."""
        if not self.contains(v):
            raise ValueError("vector not in subspace")
        if isinstance(v, Mapping):
            return [norm_scalar(v.get(p, 0)) for p in self.pivots]
        return [norm_scalar(v[p]) for p in self.pivots]

    def complement_indices(self) -> list[int]:
        piv = set(self.pivots)
        return [i for i in range(self.ambient_dim) if i not in piv]

    def issubspace(self, other: "Subspace") -> bool:
        return all(other.contains(b) for b in self.basis)

    def __add__(self, other: "Subspace") -> "Subspace":
        return Subspace(self.ambient_dim, list(self.basis) + list(other.basis))

    def __eq__(self, other):
        if not isinstance(other, Subspace):
            return NotImplemented
        return self.ambient_dim == other.ambient_dim and self.basis == other.basis

    def __hash__(self):
        return hash((self.ambient_dim, self.basis))

    def __repr__(self):
        return f"Subspace(dim={self.dim} in k^{self.ambient_dim})"


# -- identities ----------------------------------------------------------------

def leibniz_residual(mu: AlgebraLaw) -> dict[tuple[int, int, int], dict[int, object]]:
    """``mu(mu(x,y),z) - mu(x,mu(y,z)) - mu(mu(x,z),y)`` on all basis triples.

    Only nonzero values are returned, so an empty dict means ``mu`` is Leibniz.
    """
    n = mu.dim
    out = {}
    for i in range(n):
        for j in range(n):
            xy = mu.bracket(i, j)
            for k in range(n):
                acc: dict[int, object] = {}
                for a, ca in xy.items():
                    for t, ct in mu.bracket(a, k).items():
                        acc[t] = acc.get(t, 0) + ca * ct
                for a, ca in mu.bracket(j, k).items():
                    for t, ct in mu.bracket(i, a).items():
                        acc[t] = acc.get(t, 0) - ca * ct
                for a, ca in mu.bracket(i, k).items():
                    for t, ct in mu.bracket(a, j).items():
                        acc[t] = acc.get(t, 0) - ca * ct
                acc = _clean(acc)
                if acc:
                    out[(i, j, k)] = acc
    return out


def is_leibniz(mu: AlgebraLaw) -> bool:
    return not leibniz_residual(mu)


def is_antisymmetric(mu: AlgebraLaw) -> bool:
    n = mu.dim
    for i in range(n):
        if mu.bracket(i, i):
            return False
        for j in range(i + 1, n):
            a = mu.bracket(i, j)
            b = mu.bracket(j, i)
            if set(a) != set(b) or any(a[k] != -b[k] for k in a):
                return False
    return True


def is_lie(mu: AlgebraLaw) -> bool:
    return is_antisymmetric(mu) and is_leibniz(mu)


def require_leibniz(mu: AlgebraLaw) -> None:
    res = leibniz_residual(mu)
    if res:
        triple = next(iter(res))
        raise NotLeibniz(f"Leibniz identity fails on basis triple {triple}")


# -- subspaces attached to a law -------------------------------------------------

def closure(mu: AlgebraLaw, generators: Iterable, left: bool = True, right: bool = True) -> Subspace:
    """Smallest subspace containing ``generators`` and stable under
    ``y -> [e_k, y]`` (``left``) and ``y -> [y, e_k]`` (``right``)."""
    n = mu.dim
    span = Subspace(n, [g for g in generators])
    frontier = list(span.basis)
    while frontier:
        new = []
        for v in frontier:
            for k in range(n):
                if left:
                    new.append(mu.left_mult(k).matvec(v))
                if right:
                    new.append(mu.right_mult(k).matvec(v))
        new = [w for w in new if any(w)]
        grown = Subspace(n, list(span.basis) + new)
        if grown.dim == span.dim:
            break
        frontier = [b for b in grown.basis if not span.contains(b)]
        span = grown
    return span


def ideal_of_squares(mu: AlgebraLaw) -> Subspace:
    """Two-sided ideal generated by all squares ``[x, x]``."""
    require_leibniz(mu)
    n = mu.dim
    gens = []
    for i in range(n):
        gens.append(mu.bracket(i, i))
        for j in range(i + 1, n):
            s = dict(mu.bracket(i, j))
            for k, v in mu.bracket(j, i).items():
                s[k] = s.get(k, 0) + v
            gens.append(s)
    return closure(mu, [g for g in gens if any(g.values())])


def right_center(mu: AlgebraLaw) -> Subspace:
    """``{z : [x, z] = 0 for all x}``."""
    n = mu.dim
    # stack the left multiplications into one (n*n) x n system
    cols = []
    for z in range(n):
        col = {}
        for i in range(n):
            for k, v in mu.bracket(i, z).items():
                col[i * n + k] = v
        cols.append(col)
    system = SparseMat(n * n, n, cols)
    return Subspace(n, kernel_basis(system))


def is_ideal(mu: AlgebraLaw, sub: Subspace) -> bool:
    for v in sub.basis:
        for k in range(mu.dim):
            if not sub.contains(mu.left_mult(k).matvec(v)):
                return False
            if not sub.contains(mu.right_mult(k).matvec(v)):
                return False
    return True


def is_subalgebra(mu: AlgebraLaw, sub: Subspace) -> bool:
    return all(sub.contains(mu.mul(a, b)) for a in sub.basis for b in sub.basis)


def quotient_law(mu: AlgebraLaw, ideal: Subspace) -> AlgebraLaw:
    """Induced law on ``k^n / ideal``, written in the basis of the non-pivot
    standard vectors of the ideal's echelon form."""
    if ideal.ambient_dim != mu.dim:
        raise ValueError("ideal lives in a different space")
    if not is_ideal(mu, ideal):
        raise NotAnIdeal("subspace is not stable under left and right multiplication")
    comp = ideal.complement_indices()
    pos = {c: a for a, c in enumerate(comp)}
    table = {}
    for a, i in enumerate(comp):
        for b, j in enumerate(comp):
            br = mu.bracket(i, j)
            if not br:
                continue
            red = ideal.reduce(br)
            t = {pos[k]: red[k] for k in comp if red[k]}
            if t:
                table[(a, b)] = t
    labels = [mu.labels[i] for i in comp]
    return AlgebraLaw(len(comp), table, labels, {"name": f"{mu.meta.get('name', 'law')}/ideal"})


# -- base change ---------------------------------------------------------------

def invert(g: Sequence[Sequence[object]]) -> list[list]:
    """Inverse of a square matrix over Q (Gauss-Jordan)."""
    n = len(g)
    a = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(g)]
    for c in range(n):
        p = next((r for r in range(c, n) if a[r][c] != 0), None)
        if p is None:
            raise SingularMatrix("matrix is not invertible")
        a[c], a[p] = a[p], a[c]
        inv = 1 / a[c][c]
        a[c] = [x * inv for x in a[c]]
        for r in range(n):
            if r != c and a[r][c]:
                f = a[r][c]
                a[r] = [x - f * y for x, y in zip(a[r], a[c])]
    return [[norm_scalar(x) for x in row[n:]] for row in a]


def mat_vec(g: Sequence[Sequence[object]], v: Mapping[int, object]) -> dict[int, object]:
    out: dict[int, object] = {}
    for j, x in v.items():
        for i in range(len(g)):
            if g[i][j]:
                out[i] = out.get(i, 0) + g[i][j] * x
    return _clean(out)


def change_of_basis(g: Sequence[Sequence[object]], mu: AlgebraLaw) -> AlgebraLaw:
    """``(g . mu)(x, y) = g mu(g^-1 x, g^-1 y)``."""
    n = mu.dim
    if len(g) != n or any(len(r) != n for r in g):
        raise ValueError("g must be a square matrix of the law's dimension")
    ginv = invert(g)
    cols = [{i: ginv[i][j] for i in range(n) if ginv[i][j]} for j in range(n)]
    table = {}
    for i in range(n):
        for j in range(n):
            val = mat_vec(g, mu.mul(cols[i], cols[j]))
            if val:
                table[(i, j)] = val
    return AlgebraLaw(n, table, mu.labels, dict(mu.meta))


def adapted_basis(sub: Subspace) -> list[list]:
    """Matrix whose columns are the basis of ``sub`` followed by the
    complementary standard vectors."""
    n = sub.ambient_dim
    cols = [list(b) for b in sub.basis] + [[int(i == c) for i in range(n)] for c in sub.complement_indices()]
    return [[cols[j][i] for j in range(n)] for i in range(n)]
