"""Leibniz bimodules, right modules over Lie algebras, and module extensions.

Actions are matrices acting on column vectors of the coefficient space:
``left[i] m = [e_i, m]`` and ``right[i] m = [m, e_i]``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .algebra import AlgebraLaw, Subspace, is_lie, require_leibniz
from .errors import BadModule, NotLie, NotRightModule, NotSymmetricModule
from .linalg import SparseMat, kernel_basis, rank, norm_scalar


def _combo(law: AlgebraLaw, mats: Sequence[SparseMat], i: int, j: int, dim: int) -> SparseMat:
    """``sum_k c_ij^k mats[k]``."""
    out = SparseMat.zeros(dim, dim)
    for k, c in law.bracket(i, j).items():
        out = out + mats[k].scale(c)
    return out


@dataclass(frozen=True)
class RightAction:
    """Right action ``m . e_i = mats[i] m`` of an algebra on ``k^dim``."""

    dim: int
    mats: tuple[SparseMat, ...]

    def __post_init__(self):
        for m in self.mats:
            if m.shape != (self.dim, self.dim):
                raise ValueError("action matrices must be dim x dim")


def right_module_violations(g: AlgebraLaw, act: RightAction) -> list[tuple[int, int]]:
    """Basis pairs where ``m.[x,y] = (m.x).y - (m.y).x`` fails."""
    if len(act.mats) != g.dim:
        raise NotRightModule("need one action matrix per basis element")
    bad = []
    R = act.mats
    for i in range(g.dim):
        for j in range(g.dim):
            lhs = _combo(g, R, i, j, act.dim)
            rhs = R[j] @ R[i] - R[i] @ R[j]
            if lhs != rhs:
                bad.append((i, j))
    return bad


def check_right_module(g: AlgebraLaw, act: RightAction) -> None:
    bad = right_module_violations(g, act)
    if bad:
        raise NotRightModule(f"right-module axiom fails on basis pair {bad[0]}")


class Bimodule:
    """Leibniz bimodule over ``algebra`` on ``k^dim_m``."""

    __slots__ = ("algebra", "dim_m", "left", "right", "name")

    def __init__(self, algebra: AlgebraLaw, dim_m: int, left: Sequence[SparseMat],
                 right: Sequence[SparseMat], name: str = ""):
        if len(left) != algebra.dim or len(right) != algebra.dim:
            raise BadModule("need one left and one right matrix per basis element")
        for m in list(left) + list(right):
            if m.shape != (dim_m, dim_m):
                raise BadModule("action matrices must be dim_m x dim_m")
        self.algebra = algebra
        self.dim_m = dim_m
        self.left = tuple(left)
        self.right = tuple(right)
        self.name = name

    def is_symmetric(self) -> bool:
        return all(L == -R for L, R in zip(self.left, self.right))

    def is_antisymmetric(self) -> bool:
        return all(L.is_zero() for L in self.left)

    def __eq__(self, other):
        if not isinstance(other, Bimodule):
            return NotImplemented
        return (self.algebra == other.algebra and self.dim_m == other.dim_m
                and self.left == other.left and self.right == other.right)

    def __hash__(self):
        return hash((self.algebra, self.dim_m, self.left, self.right))

    def __repr__(self):
        return f"Bimodule({self.name or 'M'}, dim={self.dim_m} over dim {self.algebra.dim})"


def check_bimodule(M: Bimodule) -> list[tuple[str, tuple[int, int, int]]]:
    """All violations of (MLL), (LML), (LLM) as ``(axiom, (x, y, m))`` basis triples."""
    law, L, R, d = M.algebra, M.left, M.right, M.dim_m
    out = []
    for i in range(law.dim):
        for j in range(law.dim):
            Lij = _combo(law, L, i, j, d)
            Rij = _combo(law, R, i, j, d)
            # (MLL) [m,[x,y]] = [[m,x],y] - [[m,y],x]
            mll = Rij - (R[j] @ R[i] - R[i] @ R[j])
            # (LML) [x,[m,y]] = [[x,m],y] - [[x,y],m]
            lml = L[i] @ R[j] - (R[j] @ L[i] - Lij)
            # (LLM) [x,[y,m]] = [[x,y],m] - [[x,m],y]
            llm = L[i] @ L[j] - (Lij - R[j] @ L[i])
            for name, defect in (("MLL", mll), ("LML", lml), ("LLM", llm)):
                for t in range(d):
                    if defect.col(t):
                        out.append((name, (i, j, t)))
    return out


def require_bimodule(M: Bimodule) -> None:
    bad = check_bimodule(M)
    if bad:
        axiom, triple = bad[0]
        raise BadModule(f"axiom ({axiom}) fails on basis triple {triple}")


def adjoint_bimodule(mu: AlgebraLaw) -> Bimodule:
    require_leibniz(mu)
    n = mu.dim
    return Bimodule(mu, n, [mu.left_mult(i) for i in range(n)], [mu.right_mult(i) for i in range(n)], "adjoint")


def trivial_bimodule(mu: AlgebraLaw, dim_m: int = 1) -> Bimodule:
    z = SparseMat.zeros(dim_m, dim_m)
    return Bimodule(mu, dim_m, [z] * mu.dim, [z] * mu.dim, "trivial")


def symmetric_from_lie(g: AlgebraLaw, act: RightAction, name: str = "") -> Bimodule:
    """``[x, m] = -[m, x] = -m.x``."""
    if not is_lie(g):
        raise NotLie("symmetric modules are built over Lie algebras")
    check_right_module(g, act)
    return Bimodule(g, act.dim, [-R for R in act.mats], act.mats, name or "symmetric")


def antisymmetric_from_lie(g: AlgebraLaw, act: RightAction, name: str = "") -> Bimodule:
    """``[x, m] = 0``, ``[m, x] = m.x``."""
    if not is_lie(g):
        raise NotLie("antisymmetric modules are built over Lie algebras")
    check_right_module(g, act)
    z = SparseMat.zeros(act.dim, act.dim)
    return Bimodule(g, act.dim, [z] * g.dim, act.mats, name or "antisymmetric")


def pullback(M: Bimodule, f: Sequence[Sequence[object]], h: AlgebraLaw) -> Bimodule:
    """Regard a ``b``-bimodule as an ``h``-bimodule along ``f: h -> b``
    (``f`` is the ``dim b x dim h`` matrix)."""
    d = M.dim_m
    left, right = [], []
    for x in range(h.dim):
        Lx = SparseMat.zeros(d, d)
        Rx = SparseMat.zeros(d, d)
        for c in range(M.algebra.dim):
            if f[c][x]:
                Lx = Lx + M.left[c].scale(f[c][x])
                Rx = Rx + M.right[c].scale(f[c][x])
        left.append(Lx)
        right.append(Rx)
    return Bimodule(h, d, left, right, f"{M.name}^*")


def restrict(M: Bimodule, sub_law: AlgebraLaw, embedding: Sequence[int]) -> Bimodule:
    """Restrict to a subalgebra spanned by the basis vectors ``embedding``."""
    return Bimodule(sub_law, M.dim_m, [M.left[i] for i in embedding], [M.right[i] for i in embedding], M.name)


def sub_bimodule(M: Bimodule, indices: Sequence[int], name: str = "") -> Bimodule:
    """The coordinate subspace ``indices`` of ``M`` with the restricted actions.

    Raises BadModule if the subspace is not stable under both actions.
    """
    pos = {k: a for a, k in enumerate(indices)}

    def cut(A: SparseMat) -> SparseMat:
        cols = []
        for k in indices:
            col = A.col(k)
            if any(r not in pos for r in col):
                raise BadModule("subspace is not stable under the actions")
            cols.append({pos[r]: v for r, v in col.items()})
        return SparseMat(len(indices), len(indices), cols)

    return Bimodule(M.algebra, len(indices), [cut(A) for A in M.left], [cut(A) for A in M.right], name or M.name)


def direct_sum(*mods: Bimodule, name: str = "") -> Bimodule:
    law = mods[0].algebra
    dim = sum(m.dim_m for m in mods)
    left, right = [], []
    for i in range(law.dim):
        lc, rc = [], []
        off = 0
        for m in mods:
            for col in m.left[i].columns():
                lc.append({r + off: v for r, v in col.items()})
            for col in m.right[i].columns():
                rc.append({r + off: v for r, v in col.items()})
            off += m.dim_m
        left.append(SparseMat(dim, dim, lc))
        right.append(SparseMat(dim, dim, rc))
    return Bimodule(law, dim, left, right, name or "+".join(m.name for m in mods))


def _module_subspace_closure(M: Bimodule, gens) -> Subspace:
    span = Subspace(M.dim_m, gens)
    frontier = list(span.basis)
    while frontier:
        new = []
        for v in frontier:
            for A in M.left + M.right:
                w = A.matvec(v)
                if any(w):
                    new.append(w)
        grown = Subspace(M.dim_m, list(span.basis) + new)
        if grown.dim == span.dim:
            break
        frontier = [b for b in grown.basis if not span.contains(b)]
        span = grown
    return span


def invariant_subspace(M: Bimodule) -> Subspace:
    """Vectors killed by every right action (the invariants ``M^g`` of the
    underlying right module)."""
    d = M.dim_m
    cols = []
    for t in range(d):
        col = {}
        for i, R in enumerate(M.right):
            for r, v in R.col(t).items():
                col[i * d + r] = v
        cols.append(col)
    return Subspace(d, kernel_basis(SparseMat(d * len(M.right), d, cols)))


def split_symmetrization(M: Bimodule) -> tuple[Bimodule, list[list], Bimodule]:
    """``0 -> M^a -> M -> M^s -> 0``.

    ``M^a`` is the sub-bimodule generated by all ``[x, m] + [m, x]``; ``M^s``
    is the quotient written on the non-pivot standard basis of ``M^a``.
    Returns ``(M^a, projection matrix M -> M^s, M^s)``.
    """
    d = M.dim_m
    gens = []
    for L, R in zip(M.left, M.right):
        S = L + R
        gens.extend(dict(S.col(t)) for t in range(d) if S.col(t))
    sub = _module_subspace_closure(M, gens)
    comp = sub.complement_indices()
    cpos = {c: a for a, c in enumerate(comp)}

    def project(v) -> list:
        red = sub.reduce(v)
        return [red[c] for c in comp]

    proj = [[0] * d for _ in comp]
    for t in range(d):
        col = project({t: 1})
        for a, x in enumerate(col):
            proj[a][t] = x

    def quotient_action(A: SparseMat) -> SparseMat:
        cols = []
        for c in comp:
            w = project(A.col(c))
            cols.append({a: x for a, x in enumerate(w) if x})
        return SparseMat(len(comp), len(comp), cols)

    def sub_action(A: SparseMat) -> SparseMat:
        cols = []
        for b in sub.basis:
            w = A.matvec(b)
            coords = sub.coordinates(w)
            cols.append({a: x for a, x in enumerate(coords) if x})
        return SparseMat(sub.dim, sub.dim, cols)

    Ma = Bimodule(M.algebra, sub.dim, [sub_action(A) for A in M.left], [sub_action(A) for A in M.right], "M^a")
    Ms = Bimodule(M.algebra, len(comp), [quotient_action(A) for A in M.left],
                  [quotient_action(A) for A in M.right], "M^s")
    del cpos
    return Ma, proj, Ms


def hom_module(N: Bimodule, M: Bimodule) -> Bimodule:
    """Symmetric module ``Hom(N, M)`` with ``(a.x)(n) = a(n).x - a(n.x)``.

    Basis ``E_ab`` (``n_b -> m_a``) is ordered row-major: index ``a*dim N + b``.
    """
    s = M.algebra
    if not is_lie(s):
        raise NotLie("Hom modules are formed over Lie algebras")
    if N.algebra != s:
        raise BadModule("N and M must be modules over the same algebra")
    for X in (N, M):
        if not X.is_symmetric():
            raise NotSymmetricModule(f"{X.name or 'module'} is not symmetric")
    dn, dm = N.dim_m, M.dim_m
    right = []
    for x in range(s.dim):
        RM, RN = M.right[x], N.right[x]
        cols = []
        for a in range(dm):
            for b in range(dn):
                col = {}
                for c, v in RM.col(a).items():
                    k = c * dn + b
                    col[k] = col.get(k, 0) + v
                # E_ab R^N_x = sum_d RN[b, d] E_ad
                for dd in range(dn):
                    v = RN[b, dd]
                    if v:
                        k = a * dn + dd
                        col[k] = col.get(k, 0) - v
                cols.append(col)
        right.append(SparseMat(dm * dn, dm * dn, cols))
    return Bimodule(s, dm * dn, [-R for R in right], right, f"Hom({N.name},{M.name})")


# -- extensions of modules -------------------------------------------------------

@dataclass(frozen=True)
class TwistingPair:
    """``phi_l(e_x)``, ``phi_r(e_x)`` as ``dim M x dim N`` dense matrices."""

    phi_l: tuple
    phi_r: tuple


def extension_bimodule(M: Bimodule, N: Bimodule, pair: TwistingPair) -> Bimodule:
    """The module ``E = M + N`` glued by the twisting functions."""
    dm, dn = M.dim_m, N.dim_m
    d = dm + dn
    left, right = [], []
    for x in range(M.algebra.dim):
        for acts, own_m, own_n, phi in ((left, M.left[x], N.left[x], pair.phi_l[x]),
                                        (right, M.right[x], N.right[x], pair.phi_r[x])):
            cols = [dict(own_m.col(t)) for t in range(dm)]
            for b in range(dn):
                col = {a: phi[a][b] for a in range(dm) if phi[a][b]}
                for r, v in own_n.col(b).items():
                    col[dm + r] = v
                cols.append(col)
            acts.append(SparseMat(d, d, cols))
    return Bimodule(M.algebra, d, left, right, "E")


def _twisting_system(h: AlgebraLaw, M: Bimodule, N: Bimodule):
    """Cocycle equations (a)-(c) and coboundary map for twisting pairs.

    Unknown ``(side, x, a, b)`` is entry ``(a, b)`` of ``phi_side(e_x)`` with
    side 0 = left, 1 = right; its column index is
    ``((side*dim h + x)*dim M + a)*dim N + b``.
    """
    H, dm, dn = h.dim, M.dim_m, N.dim_m
    LM, RM, LN, RN = M.left, M.right, N.left, N.right

    def var(side, x, a, b):
        return ((side * H + x) * dm + a) * dn + b

    nvars = 2 * H * dm * dn
    rows: list[dict[int, object]] = []

    def add(row, key, v):
        y = row.get(key, 0) + v
        if y:
            row[key] = y
        else:
            row.pop(key, None)

    # phi(e_x)(n_b) component a, composed with module maps:
    # [phi(x)(n_b), y]_a   = sum_c RM_y[a, c] var(x, c, b)
    # [y, phi(x)(n_b)]_a   = sum_c LM_y[a, c] var(x, c, b)
    # phi(y)(A n_b)_a      = sum_d A[d, b] var(y, a, d)
    RMrows = [SparseMat.transpose(R).columns() for R in RM]  # row dicts: a -> {c: v}
    LMrows = [SparseMat.transpose(L).columns() for L in LM]

    def outer(row, sign, side, x, mat_rows, a, b):
        for c, v in mat_rows[a].items():
            add(row, var(side, x, c, b), sign * v)

    def inner(row, sign, side, y, A, a, b):
        for dd, v in A.col(b).items():
            add(row, var(side, y, a, dd), sign * v)

    def bracket_arg(row, sign, side, x, y, a, b):
        for k, c in h.bracket(x, y).items():
            add(row, var(side, k, a, b), sign * c)

    for x in range(H):
        for y in range(H):
            for b in range(dn):
                for a in range(dm):
                    # (a) phi_r([x,y])(n) - [phi_r(x)(n),y] - phi_r(y)([n,x]) + [phi_r(y)(n),x] + phi_r(x)([n,y])
                    r = {}
                    bracket_arg(r, 1, 1, x, y, a, b)
                    outer(r, -1, 1, x, RMrows[y], a, b)
                    inner(r, -1, 1, y, RN[x], a, b)
                    outer(r, 1, 1, y, RMrows[x], a, b)
                    inner(r, 1, 1, x, RN[y], a, b)
                    rows.append(r)
                    # (b) phi_l(x)([n,y]) + [x,phi_r(y)(n)] - [phi_l(x)(n),y] - phi_r(y)([x,n]) + phi_l([x,y])(n)
                    r = {}
                    inner(r, 1, 0, x, RN[y], a, b)
                    outer(r, 1, 1, y, LMrows[x], a, b)
                    outer(r, -1, 0, x, RMrows[y], a, b)
                    inner(r, -1, 1, y, LN[x], a, b)
                    bracket_arg(r, 1, 0, x, y, a, b)
                    rows.append(r)
                    # (c) [x,phi_l(y)(n)] + phi_l(x)([y,n]) - phi_l([x,y])(n) + [phi_l(x)(n),y] + phi_r(y)([x,n])
                    r = {}
                    outer(r, 1, 0, y, LMrows[x], a, b)
                    inner(r, 1, 0, x, LN[y], a, b)
                    bracket_arg(r, -1, 0, x, y, a, b)
                    outer(r, 1, 0, x, RMrows[y], a, b)
                    inner(r, 1, 1, y, LN[x], a, b)
                    rows.append(r)
    eqs = SparseMat(len(rows), nvars, [{}] * nvars) if not rows else SparseMat(nvars, len(rows), rows).transpose()

    # coboundaries of fbar in Hom(N, M), basis E_ab at index a*dn + b:
    # phi_l(x) = LM_x fbar - fbar LN_x,  phi_r(x) = RM_x fbar - fbar RN_x
    cob_cols = []
    for a in range(dm):
        for b in range(dn):
            col: dict[int, object] = {}
            for x in range(H):
                for side, AM, AN in ((0, LM[x], LN[x]), (1, RM[x], RN[x])):
                    for c, v in AM.col(a).items():
                        add(col, var(side, x, c, b), v)
                    # (E_ab AN)(n_d) = AN[b, d] m_a
                    for dd in range(dn):
                        v = AN[b, dd]
                        if v:
                            add(col, var(side, x, a, dd), -v)
            cob_cols.append(col)
    cob = SparseMat(nvars, dm * dn, cob_cols)
    return eqs, cob


def module_extension_group(h: AlgebraLaw, M: Bimodule, N: Bimodule, strategy: str = "exact",
                           with_basis: bool = False):
    """Dimension of the group of extensions ``0 -> M -> E -> N -> 0`` of
    Leibniz ``h``-modules modulo equivalence.

    Returns ``(dim, basis)`` where ``basis`` lists :class:`TwistingPair`
    representatives of a basis of classes when ``with_basis`` is set (else
    ``None``).  ``dim == 0`` means every such extension splits.
    """
    for X in (M, N):
        if X.algebra != h:
            raise BadModule("modules must be over the given algebra")
        require_bimodule(X)
    eqs, cob = _twisting_system(h, M, N)
    if not (eqs @ cob).is_zero():
        raise BadModule("coboundary pairs do not satisfy the cocycle equations")
    nvars = eqs.ncols
    dim_z = nvars - rank(eqs, strategy).rank
    dim_b = rank(cob, strategy).rank
    dim = dim_z - dim_b
    basis = None
    if with_basis:
        from .linalg import Echelon
        ech = Echelon(track=False)
        for j in range(cob.ncols):
            ech.add(cob.col(j))
        basis = []
        H, dm, dn = h.dim, M.dim_m, N.dim_m
        for z in kernel_basis(eqs):
            zs = {k: v for k, v in enumerate(z) if v}
            if ech.add(zs) is None:
                mats = [[[norm_scalar(z[((s * H + x) * dm + a) * dn + b]) for b in range(dn)] for a in range(dm)]
                        for s in range(2) for x in range(H)]
                basis.append(TwistingPair(tuple(mats[:H]), tuple(mats[H:])))
        assert len(basis) == dim
    return dim, basis
