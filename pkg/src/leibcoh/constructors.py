"""Named algebras, irreducible sl2 modules and (hemi)semidirect products."""

from __future__ import annotations

from fractions import Fraction
import random
import re

from .algebra import AlgebraLaw, invert, is_lie
from .bimodules import RightAction, check_right_module
from .errors import BadModule, NotLie, SingularMatrix, UnknownName
from .linalg import SparseMat, kernel_basis

# e, h, f with [e,f] = h, [h,e] = 2e, [h,f] = -2f
E, H, F = 0, 1, 2


def sl2() -> AlgebraLaw:
    table = {
        (E, F): {H: 1}, (F, E): {H: -1},
        (H, E): {E: 2}, (E, H): {E: -2},
        (H, F): {F: -2}, (F, H): {F: 2},
    }
    return AlgebraLaw(3, table, ["e", "h", "f"], {"name": "sl2"})


def abelian(n: int) -> AlgebraLaw:
    if n < 0:
        raise ValueError("dimension must be non-negative")
    return AlgebraLaw(n, {}, None, {"name": f"abelian({n})"})


def heisenberg3() -> AlgebraLaw:
    return AlgebraLaw(3, {(0, 1): {2: 1}, (1, 0): {2: -1}}, ["x", "y", "z"], {"name": "heisenberg3"})


def sl2_irreducible(k: int) -> RightAction:
    """Right action of sl2 on the irreducible module of dimension ``2k+1``.

    Basis ``m_0 .. m_2k`` with ``m_j . h = (2k - 2j) m_j``,
    ``m_j . e = (2k - j) m_{j+1}`` and ``m_j . f = j m_{j-1}``.
    """
    if k < 0 or int(k) != k:
        raise ValueError("k must be a non-negative integer")
    n = 2 * k
    d = n + 1
    Re = SparseMat(d, d, [{j + 1: n - j} if j < n else {} for j in range(d)])
    Rh = SparseMat(d, d, [{j: n - 2 * j} if n - 2 * j else {} for j in range(d)])
    Rf = SparseMat(d, d, [{j - 1: j} if j > 0 else {} for j in range(d)])
    act = RightAction(d, (Re, Rh, Rf))
    check_right_module(sl2(), act)
    return act


def adjoint_action(g: AlgebraLaw) -> RightAction:
    """``m . x = [m, x]`` on ``g`` itself."""
    return RightAction(g.dim, tuple(g.right_mult(i) for i in range(g.dim)))


def trivial_action(g: AlgebraLaw, dim: int = 1) -> RightAction:
    z = SparseMat.zeros(dim, dim)
    return RightAction(dim, (z,) * g.dim)


def semidirect(g: AlgebraLaw, act: RightAction, name: str = "") -> AlgebraLaw:
    """``g x| M`` with ``[(x, m), (y, n)] = ([x, y], m.y - n.x)``; basis (g, M)."""
    if not is_lie(g):
        raise NotLie("semidirect products are formed over Lie algebras")
    check_right_module(g, act)
    dg = g.dim
    table = {key: dict(v) for key, v in g.table().items()}
    for a in range(dg):
        R = act.mats[a]
        for s in range(act.dim):
            col = R.col(s)
            if col:
                table[(dg + s, a)] = {dg + r: v for r, v in col.items()}
                table[(a, dg + s)] = {dg + r: -v for r, v in col.items()}
    labels = list(g.labels) + [f"m{s}" for s in range(act.dim)]
    return AlgebraLaw(dg + act.dim, table, labels,
                      {"name": name or f"{g.meta.get('name', 'g')}+M",
                       "summands": {"g": list(range(dg)), "M": list(range(dg, dg + act.dim))}})


def hemisemidirect(g: AlgebraLaw, act: RightAction, name: str = "") -> AlgebraLaw:
    """``[(x, m), (y, n)] = ([x, y], m.y)``; basis (g, I)."""
    if not is_lie(g):
        raise NotLie("hemisemidirect products are formed over Lie algebras")
    check_right_module(g, act)
    dg = g.dim
    table = {key: dict(v) for key, v in g.table().items()}
    for a in range(dg):
        R = act.mats[a]
        for s in range(act.dim):
            col = R.col(s)
            if col:
                table[(dg + s, a)] = {dg + r: v for r, v in col.items()}
    labels = list(g.labels) + [f"i{s}" for s in range(act.dim)]
    return AlgebraLaw(dg + act.dim, table, labels,
                      {"name": name or f"{g.meta.get('name', 'g')}+I",
                       "summands": {"g": list(range(dg)), "I": list(range(dg, dg + act.dim))}})


def richardson_lie(k: int) -> AlgebraLaw:
    """``sl2 x| M_k``."""
    return semidirect(sl2(), sl2_irreducible(k), name=f"sl2+M{k}")


def richardson_leibniz(k: int, l: int) -> AlgebraLaw:
    """``(sl2 x| M_k)`` hemisemidirect ``I_l``, where ``I_l`` is acted on through
    the projection onto sl2.  Basis order: sl2, ``M_k``, ``I_l``."""
    if k < 1 or l < 0:
        raise ValueError("need k >= 1 and l >= 0")
    ghat = richardson_lie(k)
    il = sl2_irreducible(l)
    dm = 2 * k + 1
    z = SparseMat.zeros(il.dim, il.dim)
    act = RightAction(il.dim, tuple(il.mats) + (z,) * dm)
    law = hemisemidirect(ghat, act)
    labels = ["e", "h", "f"] + [f"m{s}" for s in range(dm)] + [f"i{s}" for s in range(il.dim)]
    return AlgebraLaw(law.dim, law.table(), labels, {
        "name": f"richardson({k},{l})", "k": k, "l": l,
        "summands": {"g": [0, 1, 2], "M": list(range(3, 3 + dm)),
                     "I": list(range(3 + dm, 3 + dm + il.dim))},
    })


def projection_to_quotient(k: int, l: int) -> list[list[int]]:
    """Matrix of ``richardson_leibniz(k, l) -> sl2 x| M_k`` (forget ``I``)."""
    n = 3 + 2 * k + 1
    return [[int(i == j) for j in range(n + 2 * l + 1)] for i in range(n)]


# -- sl2 + sl2 and its diagonal -------------------------------------------------

def sl2_plus_sl2() -> AlgebraLaw:
    """Direct sum in the basis e1, h1, f1, e2, h2, f2.  The diagonal copy
    ``x1 + x2`` and the complement ``x1 - x2`` are recorded in ``meta``."""
    s = sl2()
    table = {}
    for (i, j), v in s.table().items():
        table[(i, j)] = dict(v)
        table[(i + 3, j + 3)] = {k + 3: c for k, c in v.items()}
    diag = [[int(i == a or i == a + 3) for i in range(6)] for a in range(3)]
    comp = [[(1 if i == a else -1 if i == a + 3 else 0) for i in range(6)] for a in range(3)]
    return AlgebraLaw(6, table, ["e1", "h1", "f1", "e2", "h2", "f2"],
                      {"name": "sl2+sl2", "diagonal": diag, "complement": comp})


def diagonal_basis_matrix() -> list[list]:
    """Columns: diagonal e, h, f, then the complement in the weight basis of
    ``sl2_irreducible(1)``: ``-(f1 - f2)``, ``(h1 - h2)/2``, ``e1 - e2``."""
    m = sl2_plus_sl2().meta
    e, h, f = m["complement"]
    comp = [[-x for x in f], [Fraction(x, 2) for x in h], list(e)]
    cols = m["diagonal"] + comp
    return [[cols[j][i] for j in range(6)] for i in range(6)]


def sl2_diag_embedding_data() -> AlgebraLaw:
    """sl2 + sl2 rewritten in the basis (diagonal, complement), so the
    diagonal sl2 is spanned by the first three vectors and the complement
    is ``sl2_irreducible(1)`` entry for entry."""
    from .algebra import change_of_basis
    P = diagonal_basis_matrix()
    law = change_of_basis(invert(P), sl2_plus_sl2())
    return AlgebraLaw(6, law.table(), ["d_e", "d_h", "d_f", "m_0", "m_1", "m_2"],
                      {"name": "sl2+sl2 (diagonal basis)",
                       "summands": {"g": [0, 1, 2], "M": [3, 4, 5]}})


# -- intertwiners --------------------------------------------------------------

def intertwiners(g: AlgebraLaw, a: RightAction, b: RightAction) -> list[list[list]]:
    """Basis of ``{T : T (m.x) = (T m).x}`` as ``dim b x dim a`` matrices."""
    if len(a.mats) != g.dim or len(b.mats) != g.dim:
        raise BadModule("actions do not match the algebra")
    da, db = a.dim, b.dim
    # unknown T[r, c] at index r*da + c; equation T Ra - Rb T = 0
    rows = []
    for x in range(g.dim):
        Ra, Rb = a.mats[x], b.mats[x]
        for r in range(db):
            for c in range(da):
                eq = {}
                for j, v in Ra.col(c).items():  # (T Ra)[r, c] = sum_j T[r, j] Ra[j, c]
                    eq[r * da + j] = eq.get(r * da + j, 0) + v
                for i in range(db):  # (Rb T)[r, c] = sum_i Rb[r, i] T[i, c]
                    v = Rb[r, i]
                    if v:
                        eq[i * da + c] = eq.get(i * da + c, 0) - v
                rows.append({k: v for k, v in eq.items() if v})
    system = SparseMat(da * db, len(rows), rows).transpose() if rows else SparseMat.zeros(0, da * db)
    return [[[v[r * da + c] for c in range(da)] for r in range(db)] for v in kernel_basis(system)]


def find_isomorphism(g: AlgebraLaw, a: RightAction, b: RightAction, tries: int = 20, seed: int = 0):
    """An invertible intertwiner ``a -> b`` or ``None``.

    Random integer combinations of a basis of intertwiners are tried; for
    irreducible modules the space is at most one-dimensional so one try
    decides.
    """
    if a.dim != b.dim:
        return None
    basis = intertwiners(g, a, b)
    if not basis:
        return None
    rng = random.Random(seed)
    n = a.dim
    for _ in range(tries):
        coeffs = [rng.randint(1, 97) for _ in basis]
        T = [[sum(c * B[i][j] for c, B in zip(coeffs, basis)) for j in range(n)] for i in range(n)]
        try:
            invert(T)
        except SingularMatrix:
            continue
        return T
    return None


# -- catalog -------------------------------------------------------------------

_CATALOG = {
    "sl2": sl2,
    "heisenberg3": heisenberg3,
    "sl2_plus_sl2": sl2_plus_sl2,
    "sl2_diag_embedding_data": sl2_diag_embedding_data,
}

_PARAM = re.compile(r"^(\w+)\(([\d,\s]*)\)$")


def catalog(name: str) -> AlgebraLaw:
    """Look up a named algebra: ``sl2``, ``heisenberg3``, ``sl2_plus_sl2``,
    ``sl2_diag_embedding_data``, ``abelian(n)``, ``richardson_lie(k)``,
    ``richardson_leibniz(k,l)``."""
    key = name.strip()
    if key in _CATALOG:
        return _CATALOG[key]()
    m = _PARAM.match(key)
    if m:
        fn, args = m.group(1), [int(a) for a in m.group(2).split(",") if a.strip()]
        table = {"abelian": (abelian, 1), "richardson_lie": (richardson_lie, 1),
                 "richardson_leibniz": (richardson_leibniz, 2)}
        if fn in table and len(args) == table[fn][1]:
            return table[fn][0](*args)
    raise UnknownName(f"unknown algebra {name!r}")


def catalog_names() -> list[str]:
    return sorted(_CATALOG) + ["abelian(n)", "richardson_lie(k)", "richardson_leibniz(k,l)"]
