"""Cochain complexes: Leibniz (Loday), Chevalley-Eilenberg, and relative ones.

An ``n``-cochain is a multilinear map ``h^(x)n -> M``.  Basis cochains are
labelled ``(args, t)`` with ``args`` a tuple of ``n`` basis indices of ``h``
and ``t`` a basis index of ``M``; labels are ordered lexicographically, so the
position of ``(args, t)`` in ``C^n`` is ``enc(args) * dim M + t`` where
``enc`` reads ``args`` as a base-``dim h`` number.

The Leibniz coboundary is

    (d phi)(x1, ..., x_{n+1}) = [x1, phi(x2, ..., x_{n+1})]
        + sum_{i>=2} (-1)^i [phi(x1, ..^i.., x_{n+1}), x_i]
        + sum_{i<j} (-1)^(j+1) phi(x1, .., [x_i, x_j], .., ^j, .., x_{n+1})

with ``[x_i, x_j]`` in slot ``i`` and ``x_j`` omitted.
"""

from __future__ import annotations

import itertools
from collections.abc import Sequence as SequenceABC
from dataclasses import dataclass
from typing import Sequence

from .algebra import (AlgebraLaw, Subspace, adapted_basis, change_of_basis, invert, is_lie,
                      is_subalgebra, require_leibniz)
from .bimodules import Bimodule, adjoint_bimodule, pullback, require_bimodule
from .errors import BadModule, NotAMorphism, NotASubalgebra, NotLie, NotSurjective, NotSymmetricModule
from .linalg import SparseMat, norm_scalar, rref


def _perm_sign(seq) -> int:
    s = 1
    seq = list(seq)
    for i in range(len(seq)):
        for j in range(i + 1, len(seq)):
            if seq[i] > seq[j]:
                s = -s
    return s


def encode(args: Sequence[int], n: int) -> int:
    e = 0
    for a in args:
        e = e * n + a
    return e


def decode(e: int, n: int, length: int) -> tuple[int, ...]:
    out = [0] * length
    for p in range(length - 1, -1, -1):
        e, out[p] = divmod(e, n)
    return tuple(out)


class TupleBasis(SequenceABC):
    """All labels ``(args, t)`` with ``len(args) == degree`` (lazy)."""

    def __init__(self, n_alg: int, dim_m: int, degree: int):
        self.n_alg, self.dim_m, self.degree = n_alg, dim_m, degree

    def __len__(self):
        return self.n_alg ** self.degree * self.dim_m

    def __getitem__(self, i):
        if isinstance(i, slice):
            return [self[j] for j in range(*i.indices(len(self)))]
        if i < 0:
            i += len(self)
        if not 0 <= i < len(self):
            raise IndexError(i)
        e, t = divmod(i, self.dim_m)
        return decode(e, self.n_alg, self.degree), t

    def index(self, label, *_):
        args, t = label
        return encode(args, self.n_alg) * self.dim_m + t


class ListBasis(SequenceABC):
    """Explicit list of labels ``(args, t)`` built from a list of arg tuples."""

    def __init__(self, arg_tuples: Sequence[tuple[int, ...]], dim_m: int):
        self.tuples = list(arg_tuples)
        self.dim_m = dim_m
        self._pos = {a: p for p, a in enumerate(self.tuples)}

    def __len__(self):
        return len(self.tuples) * self.dim_m

    def __getitem__(self, i):
        if isinstance(i, slice):
            return [self[j] for j in range(*i.indices(len(self)))]
        p, t = divmod(i, self.dim_m)
        return self.tuples[p], t

    def tuple_position(self, args) -> int | None:
        return self._pos.get(tuple(args))

    def index(self, label, *_):
        args, t = label
        p = self._pos.get(tuple(args))
        if p is None:
            raise ValueError(f"{label!r} is not a basis label")
        return p * self.dim_m + t


@dataclass(frozen=True)
class ComplexSlice:
    """``d^n : C^n -> C^{n+1}`` together with the basis labels of both ends."""

    kind: str
    degree: int
    basis_index: Sequence
    target_index: Sequence
    d_matrix: SparseMat


# -- the Leibniz coboundary on basis cochains -------------------------------------

class LodayKernel:
    """Columns of the Leibniz coboundary, keyed by full ``C^{n+1}`` positions."""

    def __init__(self, law: AlgebraLaw, M: Bimodule):
        if M.algebra != law:
            raise BadModule("module is over a different algebra")
        self.law, self.M = law, M
        self.N, self.D = law.dim, M.dim_m
        D = self.D
        # Lt[t] = [(x, s, v)] with [e_x, m_t] having m_s-coefficient v
        self.Lt = [[(x, s, v) for x in range(self.N) for s, v in M.left[x].col(t).items()] for t in range(D)]
        self.Rt = [[(x, s, v) for x in range(self.N) for s, v in M.right[x].col(t).items()] for t in range(D)]
        self.by_out = law.by_output()

    def column(self, args: tuple[int, ...], t: int) -> dict[int, object]:
        N, D = self.N, self.D
        n = len(args)
        out: dict[int, object] = {}

        def add(key, v):
            y = out.get(key, 0) + v
            if y:
                out[key] = y
            else:
                del out[key]

        full = encode(args, N)
        # [x1, phi(x2..)]
        top = N ** n
        for x, s, v in self.Lt[t]:
            add(((x * top) + full) * D + s, v)
        # (-1)^i [phi(..^i..), x_i], x inserted at 1-based position i >= 2
        for i in range(2, n + 2):
            sgn = 1 if i % 2 == 0 else -1
            pre = encode(args[:i - 1], N)
            suf_len = n - i + 1
            suf = encode(args[i - 1:], N)
            base_pre = pre * N ** (suf_len + 1)
            w = N ** suf_len
            for x, s, v in self.Rt[t]:
                add((base_pre + x * w + suf) * D + s, sgn * v)
        # (-1)^(j+1) phi(.., [x_i, x_j], .., ^j, ..): slot i of args receives a bracket
        for i in range(1, n + 1):
            hits = self.by_out.get(args[i - 1])
            if not hits:
                continue
            pre = encode(args[:i - 1], N)
            for j in range(i + 1, n + 2):
                sgn = 1 if (j + 1) % 2 == 0 else -1
                mid = encode(args[i:j - 1], N)
                suf = encode(args[j - 1:], N)
                p_u = N ** (n + 1 - i)
                p_mid = N ** (n + 2 - j)
                p_v = N ** (n + 1 - j)
                base = pre * N * p_u + mid * p_mid + suf
                for u, v, c in hits:
                    add((base + u * p_u + v * p_v) * D + t, sgn * c)
        return out


class CochainComplex:
    """A cochain complex given degree by degree.  ``d(n)`` is cached."""

    kind = "abstract"
    start = 0  # lowest degree with a (possibly zero) cochain space
    label_shift = 0  # reported degree = cochain degree - label_shift

    def __init__(self):
        self._d: dict[int, SparseMat] = {}

    def dim(self, n: int) -> int:
        raise NotImplementedError

    def labels(self, n: int) -> Sequence:
        raise NotImplementedError

    def _build(self, n: int) -> SparseMat:
        raise NotImplementedError

    def d(self, n: int) -> SparseMat:
        if n < 0:
            return SparseMat.zeros(self.dim(0), 0)
        if n not in self._d:
            self._d[n] = self._build(n)
        return self._d[n]

    def slice(self, n: int) -> ComplexSlice:
        return ComplexSlice(self.kind, n, self.labels(n), self.labels(n + 1), self.d(n))

    def check_d_squared(self, n: int) -> bool:
        return (self.d(n + 1) @ self.d(n)).is_zero()


class LodayComplex(CochainComplex):
    kind = "loday"

    def __init__(self, law: AlgebraLaw, M: Bimodule):
        super().__init__()
        require_leibniz(law)
        self.law, self.M = law, M
        self.kernel = LodayKernel(law, M)

    def dim(self, n):
        return self.law.dim ** n * self.M.dim_m if n >= 0 else 0

    def labels(self, n):
        return TupleBasis(self.law.dim, self.M.dim_m, n)

    def _build(self, n):
        N, D = self.law.dim, self.M.dim_m
        cols = [self.kernel.column(decode(e, N, n), t) for e in range(N ** n) for t in range(D)]
        return SparseMat._trusted(self.dim(n + 1), self.dim(n), cols)


def _increasing(args) -> bool:
    return all(a < b for a, b in zip(args, args[1:]))


class CEComplex(CochainComplex):
    """Alternating cochains, identified with their values on strictly
    increasing argument tuples.  It is the subcomplex of the Leibniz complex
    cut out by antisymmetry (requires a Lie algebra and a symmetric module)."""

    kind = "ce"

    def __init__(self, law: AlgebraLaw, M: Bimodule):
        super().__init__()
        if not is_lie(law):
            raise NotLie("the Chevalley-Eilenberg complex needs a Lie algebra")
        if not M.is_symmetric():
            raise NotSymmetricModule("the Chevalley-Eilenberg complex needs a symmetric module")
        self.law, self.M = law, M
        self.kernel = LodayKernel(law, M)
        self._bases: dict[int, ListBasis] = {}

    def labels(self, n) -> ListBasis:
        if n not in self._bases:
            self._bases[n] = ListBasis(list(itertools.combinations(range(self.law.dim), n)), self.M.dim_m)
        return self._bases[n]

    def dim(self, n):
        return len(self.labels(n)) if n >= 0 else 0

    def inclusion_column(self, args, t) -> dict[int, object]:
        """Full Leibniz coordinates of the alternating basis cochain."""
        N, D = self.law.dim, self.M.dim_m
        return {encode(p, N) * D + t: _perm_sign(p) for p in itertools.permutations(args)}

    def inclusion(self, n: int) -> SparseMat:
        """``C^n_CE -> CL^n``."""
        lab = self.labels(n)
        cols = [self.inclusion_column(a, t) for a, t in lab]
        return SparseMat._trusted(self.law.dim ** n * self.M.dim_m, len(lab), cols)

    def _build(self, n):
        N, D = self.law.dim, self.M.dim_m
        target = self.labels(n + 1)
        cols = []
        for args, t in self.labels(n):
            full: dict[int, object] = {}
            for p in itertools.permutations(args):
                sg = _perm_sign(p)
                for k, v in self.kernel.column(p, t).items():
                    y = full.get(k, 0) + sg * v
                    if y:
                        full[k] = y
                    else:
                        del full[k]
            col = {}
            for k, v in full.items():
                e, s = divmod(k, D)
                a = decode(e, N, n + 1)
                if _increasing(a):
                    col[target.index((a, s))] = v
            cols.append(col)
        return SparseMat._trusted(self.dim(n + 1), self.dim(n), cols)

    def image_is_alternating(self, n: int) -> bool:
        """``d`` of every alternating basis cochain is again alternating
        (checked in full Leibniz coordinates)."""
        N, D = self.law.dim, self.M.dim_m
        for args, t in self.labels(n):
            full: dict[int, object] = {}
            for p in itertools.permutations(args):
                sg = _perm_sign(p)
                for k, v in self.kernel.column(p, t).items():
                    full[k] = full.get(k, 0) + sg * v
            full = {k: v for k, v in full.items() if v}
            for k, v in full.items():
                e, s = divmod(k, D)
                a = decode(e, N, n + 1)
                if len(set(a)) < len(a):
                    return False
                srt = tuple(sorted(a))
                if full.get(encode(srt, N) * D + s, 0) * _perm_sign(a) != v:
                    return False
        return True


class PirashviliRelComplex(CochainComplex):
    """Quotient ``CL / C_CE``, on the basis of non-increasing argument tuples.

    Cochain degree ``n`` is reported as relative degree ``n - 2``.
    """

    kind = "pirashvili"
    label_shift = 2

    def __init__(self, law: AlgebraLaw, M: Bimodule):
        super().__init__()
        self.ce = CEComplex(law, M)
        self.loday = LodayComplex(law, M)
        self.law, self.M = law, M
        self._bases: dict[int, ListBasis] = {}

    def labels(self, n) -> ListBasis:
        if n not in self._bases:
            tuples = [a for a in itertools.product(range(self.law.dim), repeat=n) if not _increasing(a)] if n >= 0 else []
            self._bases[n] = ListBasis(tuples, self.M.dim_m)
        return self._bases[n]

    def dim(self, n):
        return len(self.labels(n)) if n >= 0 else 0

    def _project(self, full: dict[int, object], n: int) -> dict[int, object]:
        """Coordinates in the quotient of a full Leibniz cochain of degree ``n``."""
        N, D = self.law.dim, self.M.dim_m
        lab = self.labels(n)
        out: dict[int, object] = {}
        for k, v in full.items():
            e, s = divmod(k, D)
            a = decode(e, N, n)
            if _increasing(a):
                # subtract v * (alternating cochain at a) on its non-identity permutations
                for p in itertools.permutations(a):
                    if p == a:
                        continue
                    key = lab.tuple_position(p) * D + s
                    y = out.get(key, 0) - _perm_sign(p) * v
                    out[key] = y
            else:
                key = lab.tuple_position(a) * D + s
                out[key] = out.get(key, 0) + v
        return {k: v for k, v in out.items() if v}

    def projection(self, n: int) -> SparseMat:
        """``CL^n -> CL^n / C^n_CE``."""
        cols = [self._project({j: 1}, n) for j in range(self.loday.dim(n))]
        return SparseMat._trusted(self.dim(n), self.loday.dim(n), cols)

    def section(self, n: int) -> SparseMat:
        """Coordinate inclusion of the quotient basis into ``CL^n``."""
        N, D = self.law.dim, self.M.dim_m
        cols = [{encode(a, N) * D + t: 1} for a, t in self.labels(n)]
        return SparseMat._trusted(self.loday.dim(n), self.dim(n), cols)

    def _build(self, n):
        kern = self.loday.kernel
        cols = [self._project(kern.column(a, t), n + 1) for a, t in self.labels(n)]
        return SparseMat._trusted(self.dim(n + 1), self.dim(n), cols)


class PairRelComplex(CochainComplex):
    """Quotient ``CL(h, f*M) / f*CL(b, M)`` for a surjective morphism
    ``f: h -> b`` and a ``b``-bimodule ``M``.

    The image of ``f*`` in degree ``n`` is spanned by the tensor powers of the
    rows of ``f``; its reduced echelon form is the ``n``-th tensor power of
    the reduced echelon form ``R`` of ``f`` with pivot tuples ``P^n``.  The
    quotient basis consists of the labels whose argument tuple leaves ``P``.
    """

    kind = "pair"

    def __init__(self, f: Sequence[Sequence[object]], h: AlgebraLaw, b: AlgebraLaw, M: Bimodule):
        super().__init__()
        require_leibniz(h)
        require_leibniz(b)
        if M.algebra != b:
            raise BadModule("coefficients must be a module over the target algebra")
        if len(f) != b.dim or any(len(r) != h.dim for r in f):
            raise NotAMorphism("f must be a dim(b) x dim(h) matrix")
        for i in range(h.dim):
            for j in range(h.dim):
                lhs: dict[int, object] = {}
                for k, c in h.bracket(i, j).items():
                    for r in range(b.dim):
                        if f[r][k]:
                            lhs[r] = lhs.get(r, 0) + f[r][k] * c
                fi = {r: f[r][i] for r in range(b.dim) if f[r][i]}
                fj = {r: f[r][j] for r in range(b.dim) if f[r][j]}
                rhs = b.mul(fi, fj)
                if {k: v for k, v in lhs.items() if v} != rhs:
                    raise NotAMorphism(f"f does not preserve the bracket of basis pair {(i, j)}")
        rows, piv = rref([{j: f[r][j] for j in range(h.dim) if f[r][j]} for r in range(b.dim)])
        if len(piv) != b.dim:
            raise NotSurjective("f is not surjective")
        self.f = [list(r) for r in f]
        self.h, self.b, self.Mb = h, b, M
        self.M = pullback(M, f, h)
        self.R = [{k: norm_scalar(v) for k, v in r.items()} for r in rows]
        self.P = piv
        self.Pset = set(piv)
        self.loday = LodayComplex(h, self.M)
        self.base = LodayComplex(b, M)
        self._bases: dict[int, ListBasis] = {}

    def labels(self, n) -> ListBasis:
        if n not in self._bases:
            tuples = [a for a in itertools.product(range(self.h.dim), repeat=n)
                      if any(x not in self.Pset for x in a)] if n >= 0 else []
            self._bases[n] = ListBasis(tuples, self.M.dim_m)
        return self._bases[n]

    def dim(self, n):
        return len(self.labels(n)) if n >= 0 else 0

    def _project(self, full: dict[int, object], n: int) -> dict[int, object]:
        N, D = self.h.dim, self.M.dim_m
        lab = self.labels(n)
        pidx = {p: c for c, p in enumerate(self.P)}
        out: dict[int, object] = {}
        for k, v in full.items():
            e, s = divmod(k, D)
            a = decode(e, N, n)
            if all(x in self.Pset for x in a):
                rows = [list(self.R[pidx[x]].items()) for x in a]
                for combo in itertools.product(*rows):
                    tup = tuple(i for i, _ in combo)
                    if all(x in self.Pset for x in tup):
                        continue
                    coef = v
                    for _, c in combo:
                        coef *= c
                    key = lab.tuple_position(tup) * D + s
                    out[key] = out.get(key, 0) - coef
            else:
                key = lab.tuple_position(a) * D + s
                out[key] = out.get(key, 0) + v
        return {k: norm_scalar(v) for k, v in out.items() if v}

    def pullback_map(self, n: int) -> SparseMat:
        """``f*: CL^n(b, M) -> CL^n(h, f*M)``."""
        Nb, N, D = self.b.dim, self.h.dim, self.M.dim_m
        fr = [[(a, self.f[c][a]) for a in range(N) if self.f[c][a]] for c in range(Nb)]
        cols = []
        for e in range(Nb ** n):
            cs = decode(e, Nb, n)
            vec = {}
            for combo in itertools.product(*[fr[c] for c in cs]):
                coef = 1
                for _, x in combo:
                    coef *= x
                vec[encode([a for a, _ in combo], N)] = coef
            for t in range(D):
                cols.append({k * D + t: v for k, v in vec.items()})
        return SparseMat._trusted(self.loday.dim(n), self.base.dim(n), cols)

    def projection(self, n: int) -> SparseMat:
        cols = [self._project({j: 1}, n) for j in range(self.loday.dim(n))]
        return SparseMat._trusted(self.dim(n), self.loday.dim(n), cols)

    def section(self, n: int) -> SparseMat:
        N, D = self.h.dim, self.M.dim_m
        cols = [{encode(a, N) * D + t: 1} for a, t in self.labels(n)]
        return SparseMat._trusted(self.loday.dim(n), self.dim(n), cols)

    def _build(self, n):
        kern = self.loday.kernel
        cols = [self._project(kern.column(a, t), n + 1) for a, t in self.labels(n)]
        return SparseMat._trusted(self.dim(n + 1), self.dim(n), cols)


def _transform_module(M: Bimodule, P, law_new: AlgebraLaw) -> Bimodule:
    """Re-express the action for the algebra basis given by the columns of ``P``."""
    n = law_new.dim
    left, right = [], []
    for i in range(n):
        Li = SparseMat.zeros(M.dim_m, M.dim_m)
        Ri = SparseMat.zeros(M.dim_m, M.dim_m)
        for j in range(n):
            if P[j][i]:
                Li = Li + M.left[j].scale(P[j][i])
                Ri = Ri + M.right[j].scale(P[j][i])
        left.append(Li)
        right.append(Ri)
    return Bimodule(law_new, M.dim_m, left, right, M.name)


class SubRelComplex(CochainComplex):
    """Cochains on tuples with at most one argument outside a subalgebra ``s``.

    The algebra is rewritten in a basis adapted to ``s`` (basis of ``s``
    first, then standard vectors completing it); an argument index is an
    ``s``-slot if it is below ``dim s``.  The differential is the Leibniz
    coboundary of the zero-extended cochain, restricted to the admissible
    tuples.
    """

    kind = "subrel"

    def __init__(self, h: AlgebraLaw, s: Subspace, M: Bimodule | str = "adjoint"):
        super().__init__()
        require_leibniz(h)
        if s.ambient_dim != h.dim:
            raise NotASubalgebra("subspace lives in a different space")
        if not is_subalgebra(h, s):
            raise NotASubalgebra("subspace is not closed under the bracket")
        P = adapted_basis(s)
        identity = all(P[i][j] == int(i == j) for i in range(h.dim) for j in range(h.dim))
        self.basis_change = P
        law = h if identity else change_of_basis(invert(P), h)
        if isinstance(M, str):
            if M != "adjoint":
                raise ValueError("coefficients must be a Bimodule or 'adjoint'")
            mod = adjoint_bimodule(law)
        else:
            if M.algebra != h:
                raise BadModule("module is over a different algebra")
            mod = M if identity else _transform_module(M, P, law)
        self.law, self.M, self.ds = law, mod, s.dim
        self.kernel = LodayKernel(law, mod)
        self._bases: dict[int, ListBasis] = {}

    def admissible(self, args) -> bool:
        return sum(1 for a in args if a >= self.ds) <= 1

    def labels(self, n) -> ListBasis:
        if n not in self._bases:
            tuples = [a for a in itertools.product(range(self.law.dim), repeat=n) if self.admissible(a)] if n >= 0 else []
            self._bases[n] = ListBasis(tuples, self.M.dim_m)
        return self._bases[n]

    def dim(self, n):
        return len(self.labels(n)) if n >= 0 else 0

    def _build(self, n):
        N, D = self.law.dim, self.M.dim_m
        target = self.labels(n + 1)
        cols = []
        for a, t in self.labels(n):
            col = {}
            for k, v in self.kernel.column(a, t).items():
                e, s = divmod(k, D)
                p = target.tuple_position(decode(e, N, n + 1))
                if p is not None:
                    col[p * D + s] = v
            cols.append(col)
        return SparseMat._trusted(self.dim(n + 1), self.dim(n), cols)


# -- slice helpers ---------------------------------------------------------------

def loday_slice(law: AlgebraLaw, M: Bimodule, n: int) -> ComplexSlice:
    require_bimodule(M)
    return LodayComplex(law, M).slice(n)


def ce_slice(law: AlgebraLaw, M: Bimodule, n: int) -> ComplexSlice:
    return CEComplex(law, M).slice(n)


def pirashvili_rel_slice(law: AlgebraLaw, M: Bimodule, n: int) -> ComplexSlice:
    """Slice of the relative complex at cochain degree ``n`` (relative degree ``n - 2``)."""
    return PirashviliRelComplex(law, M).slice(n)


def pair_rel_slice(f, h: AlgebraLaw, b: AlgebraLaw, M: Bimodule, n: int) -> ComplexSlice:
    return PairRelComplex(f, h, b, M).slice(n)


def f_rel_slice(h: AlgebraLaw, s: Subspace, M: Bimodule | str, n: int) -> ComplexSlice:
    return SubRelComplex(h, s, M).slice(n)


def invariant_quadratic_forms(law: AlgebraLaw) -> list[list[list]]:
    """Basis of the symmetric bilinear forms ``B`` with
    ``B([x, y], z) + B(y, [x, z]) = 0`` for all ``x, y, z`` (Lie algebras)."""
    if not is_lie(law):
        raise NotLie("invariant forms are computed for Lie algebras")
    n = law.dim
    pairs = [(i, j) for i in range(n) for j in range(i, n)]
    pos = {p: k for k, p in enumerate(pairs)}

    def var(i, j):
        return pos[(i, j) if i <= j else (j, i)]

    rows = []
    for x in range(n):
        for y in range(n):
            for z in range(n):
                eq: dict[int, object] = {}
                for k, c in law.bracket(x, y).items():
                    eq[var(k, z)] = eq.get(var(k, z), 0) + c
                for k, c in law.bracket(x, z).items():
                    eq[var(y, k)] = eq.get(var(y, k), 0) + c
                eq = {k: v for k, v in eq.items() if v}
                if eq:
                    rows.append(eq)
    from .linalg import kernel_basis
    system = SparseMat(len(pairs), len(rows), rows).transpose() if rows else SparseMat.zeros(0, len(pairs))
    out = []
    for v in kernel_basis(system):
        B = [[v[var(i, j)] for j in range(n)] for i in range(n)]
        out.append(B)
    return out
