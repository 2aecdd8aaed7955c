"""Deformation-side computations: Massey square, first-order identities,
one-parameter contractions, and the stability / rigidity reports."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Sequence

from .algebra import (AlgebraLaw, Subspace, ideal_of_squares, is_leibniz, is_lie, leibniz_residual,
                      quotient_law, require_leibniz, right_center)
from .bimodules import (Bimodule, adjoint_bimodule, hom_module, module_extension_group, restrict, sub_bimodule)
from .cohomology import cohomology
from .complexes import CEComplex, LodayComplex, SubRelComplex
from .constructors import find_isomorphism, richardson_leibniz, richardson_lie, sl2, sl2_irreducible, adjoint_action
from .errors import HypothesisFailed, NegativePowers, NotASubalgebra, NotLeibniz
from .linalg import SparseMat, ff_rank, kernel_basis, norm_scalar

Bilinear = Mapping[tuple[int, int], Mapping[int, object]]


def _table(x) -> dict:
    if isinstance(x, AlgebraLaw):
        return x.table()
    return {k: {a: b for a, b in v.items() if b} for k, v in x.items() if any(v.values())}


def _apply(tab: Mapping, dim: int, u: Mapping[int, object], v: Mapping[int, object]) -> dict[int, object]:
    out: dict[int, object] = {}
    for i, a in u.items():
        for j, b in v.items():
            for k, c in tab.get((i, j), {}).items():
                out[k] = out.get(k, 0) + a * b * c
    return {k: norm_scalar(x) for k, x in out.items() if x}


def _composite(a: Mapping, b: Mapping, dim: int) -> dict[tuple[int, int, int], dict[int, object]]:
    """``a(b(x,y),z) - a(x,b(y,z)) - a(b(x,z),y)`` on basis triples."""
    out = {}
    for x in range(dim):
        for y in range(dim):
            bxy = b.get((x, y), {})
            for z in range(dim):
                t: dict[int, object] = {}
                for part, sign in ((_apply(a, dim, bxy, {z: 1}), 1),
                                   (_apply(a, dim, {x: 1}, b.get((y, z), {})), -1),
                                   (_apply(a, dim, b.get((x, z), {}), {y: 1}), -1)):
                    for k, v in part.items():
                        t[k] = t.get(k, 0) + sign * v
                t = {k: norm_scalar(v) for k, v in t.items() if v}
                if t:
                    out[(x, y, z)] = t
    return out


def massey_square(mu: AlgebraLaw | Bilinear, dim: int | None = None) -> dict:
    """``mu(mu(x,y),z) - mu(x,mu(y,z)) - mu(mu(x,z),y)`` on basis triples
    (nonzero entries only).  Same as :func:`leibniz_residual` for laws."""
    if isinstance(mu, AlgebraLaw):
        return leibniz_residual(mu)
    if dim is None:
        raise ValueError("dim is required for a bare bilinear table")
    t = _table(mu)
    return _composite(t, t, dim)


def _add_tri(a: dict, b: dict, sb=1) -> dict:
    out = {k: dict(v) for k, v in a.items()}
    for key, terms in b.items():
        d = out.setdefault(key, {})
        for k, v in terms.items():
            y = d.get(k, 0) + sb * v
            if y:
                d[k] = y
            else:
                d.pop(k, None)
        if not d:
            del out[key]
    return out


def polarized_differential(mu: AlgebraLaw, phi: Bilinear) -> dict:
    """Coefficient of ``eps`` in ``(mu + eps phi) o (mu + eps phi)``."""
    require_leibniz(mu)
    m, p = mu.table(), _table(phi)
    return _add_tri(_composite(m, p, mu.dim), _composite(p, m, mu.dim))


def action_derivative(mu: AlgebraLaw, psi) -> dict:
    """``psi([x,y]) - [psi(x),y] - [x,psi(y)]`` on basis pairs; ``psi`` is a
    square matrix (``psi[i][j]`` = coefficient of ``e_i`` in ``psi(e_j)``)."""
    n = mu.dim
    if isinstance(psi, SparseMat):
        cols = [dict(psi.col(j)) for j in range(n)]
    else:
        cols = [{i: psi[i][j] for i in range(n) if psi[i][j]} for j in range(n)]
    out = {}
    for x in range(n):
        for y in range(n):
            t: dict[int, object] = {}
            for k, c in mu.bracket(x, y).items():
                for i, v in cols[k].items():
                    t[i] = t.get(i, 0) + c * v
            for k, v in mu.mul(cols[x], {y: 1}).items():
                t[k] = t.get(k, 0) - v
            for k, v in mu.mul({x: 1}, cols[y]).items():
                t[k] = t.get(k, 0) - v
            t = {k: norm_scalar(v) for k, v in t.items() if v}
            if t:
                out[(x, y)] = t
    return out


def to_cochain(table: Mapping, dim: int) -> dict[int, object]:
    """Multilinear table (keys are argument tuples) as a sparse vector in the
    lexicographic cochain basis of the adjoint Leibniz complex."""
    out = {}
    for args, terms in table.items():
        e = 0
        for a in args:
            e = e * dim + a
        for k, v in terms.items():
            if v:
                out[e * dim + k] = v
    return out


# -- contractions ----------------------------------------------------------------

class LaurentLaw:
    """Structure constants that are Laurent polynomials in ``t``:
    ``c[(i, j)][k] = {power: coefficient}``."""

    __slots__ = ("dim", "c", "labels")

    def __init__(self, dim: int, c: Mapping, labels=None):
        table = {}
        for key, terms in c.items():
            tk = {}
            for k, poly in terms.items():
                p = {e: norm_scalar(v) for e, v in poly.items() if v}
                if p:
                    tk[k] = p
            if tk:
                table[key] = tk
        self.dim, self.c = dim, table
        self.labels = labels

    @classmethod
    def constant(cls, mu: AlgebraLaw) -> "LaurentLaw":
        return cls(mu.dim, {key: {k: {0: v} for k, v in t.items()} for key, t in mu.table().items()}, mu.labels)

    def min_power(self) -> int | None:
        powers = [e for t in self.c.values() for poly in t.values() for e in poly]
        return min(powers) if powers else None

    def conjugate(self, exponents: Sequence[int]) -> "LaurentLaw":
        """Rescale basis vectors ``e_i -> t^{v_i} e_i``: the coefficient of
        ``e_k`` in ``[e_i, e_j]`` picks up ``t^{v_i + v_j - v_k}``."""
        if len(exponents) != self.dim:
            raise ValueError("one exponent per basis vector")
        v = list(exponents)
        out = {}
        for (i, j), t in self.c.items():
            out[(i, j)] = {k: {e + v[i] + v[j] - v[k]: c for e, c in poly.items()} for k, poly in t.items()}
        return LaurentLaw(self.dim, out, self.labels)

    def specialize(self, t) -> AlgebraLaw:
        table = {}
        for key, terms in self.c.items():
            table[key] = {k: norm_scalar(sum(c * Fraction(t) ** e for e, c in poly.items()))
                          for k, poly in terms.items()}
        return AlgebraLaw(self.dim, table, self.labels)

    def limit(self) -> AlgebraLaw:
        """Constant terms, valid when no negative power occurs."""
        mp = self.min_power()
        if mp is not None and mp < 0:
            raise NegativePowers(self)
        table = {key: {k: poly.get(0, 0) for k, poly in t.items()} for key, t in self.c.items()}
        return AlgebraLaw(self.dim, table, self.labels)

    def __eq__(self, other):
        return isinstance(other, LaurentLaw) and self.dim == other.dim and self.c == other.c

    def __repr__(self):
        return f"LaurentLaw(dim={self.dim}, min_power={self.min_power()})"


def contract(mu: AlgebraLaw, exponents: Sequence[int], allow_negative: bool = False):
    """One-parameter contraction ``t -> 0`` of ``mu`` along ``e_i -> t^{v_i} e_i``.

    Returns ``(laurent, limit)``.  When some coefficient carries a negative
    power of ``t`` the limit does not exist: NegativePowers is raised (the
    exception carries the Laurent law), or ``(laurent, None)`` is returned if
    ``allow_negative`` is set.  A limit that exists is checked to be Leibniz.
    """
    if len(exponents) != mu.dim:
        raise ValueError("one exponent per basis vector")
    laurent = LaurentLaw.constant(mu).conjugate(exponents)
    mp = laurent.min_power()
    if mp is not None and mp < 0:
        if allow_negative:
            return laurent, None
        raise NegativePowers(laurent)
    lim = laurent.limit()
    lim.meta["name"] = f"lim {mu.meta.get('name', 'law')}"
    if not is_leibniz(lim):
        raise NotLeibniz("contraction limit is not Leibniz")
    return laurent, lim


# -- stability and rigidity ----------------------------------------------------------

@dataclass
class Check:
    name: str
    passed: bool | None  # None: not evaluated
    detail: str = ""


@dataclass
class StabilityEvidence:
    subalgebra: list
    e_dims: dict[int, int]
    certified: bool
    checklist: list[Check] = field(default_factory=list)

    @property
    def e2(self) -> int:
        return self.e_dims[2]

    @property
    def verdict(self) -> str:
        if self.e2 == 0 and self.certified:
            return "stable-certified"
        return "not certified"

    @property
    def hypotheses_pass(self) -> bool:
        return all(c.passed for c in self.checklist)

    def as_dict(self) -> dict:
        return {"subalgebra": self.subalgebra, "E": self.e_dims, "certified": self.certified,
                "verdict": self.verdict,
                "checklist": [{"name": c.name, "passed": c.passed, "detail": c.detail} for c in self.checklist]}


def _sub_law(h: AlgebraLaw, idx: Sequence[int]) -> AlgebraLaw:
    pos = {a: p for p, a in enumerate(idx)}
    table = {}
    for a in idx:
        for b in idx:
            br = h.bracket(a, b)
            if any(k not in pos for k in br):
                raise NotASubalgebra("coordinate subspace is not closed")
            if br:
                table[(pos[a], pos[b])] = {pos[k]: v for k, v in br.items()}
    return AlgebraLaw(len(idx), table, [h.labels[a] for a in idx])


def _span_inside(h: AlgebraLaw, vec: Mapping[int, object], idx: set) -> bool:
    return all(k in idx for k in vec)


def _hypothesis_checklist(h: AlgebraLaw, s_idx, m_idx, i_idx, strategy) -> list[Check]:
    S, Mset, Iset = set(s_idx), set(m_idx), set(i_idx)
    out = []
    bad = []
    for a in m_idx:
        for b in m_idx:
            if h.bracket(a, b):
                bad.append("[M,M]")
    for x in s_idx:
        for w in m_idx:
            if not _span_inside(h, h.bracket(x, w), Mset):
                bad.append("[s,M]")
            if not _span_inside(h, h.bracket(w, x), Mset):
                bad.append("[M,s]")
            sw, ws = h.bracket(x, w), h.bracket(w, x)
            if {k: -v for k, v in ws.items()} != dict(sw):
                bad.append("[s,w] != -[w,s]")
        for i in i_idx:
            if h.bracket(x, i):
                bad.append("[s,I]")
            if not _span_inside(h, h.bracket(i, x), Iset):
                bad.append("[I,s]")
    zr = right_center(h)
    if zr != Subspace.coordinate(h.dim, i_idx):
        bad.append("I != right center")
    out.append(Check("(a) bracket structure", not bad, ", ".join(sorted(set(bad)))))

    s_law = _sub_law(h, s_idx)
    ad = adjoint_bimodule(h)
    h_over_s = restrict(ad, s_law, s_idx)
    hl2 = cohomology(LodayComplex(s_law, h_over_s), [2], strategy).dim(2)
    out.append(Check("(b) HL^2(s, h) = 0", hl2 == 0, f"dim = {hl2}"))

    def part(indices, name):
        return sub_bimodule(h_over_s, list(indices), name)

    M = part(m_idx, "M")
    if M.is_symmetric():
        hom = hom_module(M, M)
        hl1 = cohomology(LodayComplex(s_law, hom), [1], strategy).dim(1)
        out.append(Check("(c) HL^1(s, Hom(M,M)) = 0", hl1 == 0, f"dim = {hl1}"))
    else:
        out.append(Check("(c) HL^1(s, Hom(M,M)) = 0", False, "M is not a symmetric s-module"))

    dm, di, ds = len(m_idx), len(i_idx), len(s_idx)
    out.append(Check("(d) dim M > dim I * dim s", dm > di * ds, f"{dm} vs {di} * {ds} = {di * ds}"))
    e1, _ = module_extension_group(s_law, part(list(s_idx) + list(i_idx), "s+I"), part(list(m_idx) + list(i_idx), "M+I"))
    e2, _ = module_extension_group(s_law, part(m_idx, "M"), part(i_idx, "I"))
    out.append(Check("(d) extensions of M+I by s+I split", e1 == 0, f"dim = {e1}"))
    out.append(Check("(d) extensions of I by M split", e2 == 0, f"dim = {e2}"))
    return out


def stability_evidence(h: AlgebraLaw, s: Subspace, summands: Mapping[str, Sequence[int]] | None = None,
                       strategy: str = "auto") -> StabilityEvidence:
    """``E^n(h; s, h)`` for n = 0, 1, 2 and the vanishing-criterion checklist.

    The checklist needs the decomposition ``h = s + M + I`` into coordinate
    summands, taken from ``summands`` or ``h.meta['summands']`` (keys ``g``,
    ``M``, ``I``); without it the checklist is left unevaluated.
    """
    C = SubRelComplex(h, s, "adjoint")
    rep = cohomology(C, [0, 1, 2], strategy)
    summ = summands or h.meta.get("summands")
    if summ and all(k in summ for k in ("g", "M", "I")) and s == Subspace.coordinate(h.dim, summ["g"]):
        checks = _hypothesis_checklist(h, list(summ["g"]), list(summ["M"]), list(summ["I"]), strategy)
    else:
        checks = [Check("decomposition h = s + M + I", None, "no coordinate decomposition available")]
    sub = [list(b) for b in s.basis]
    return StabilityEvidence(sub, rep.dims(), rep.certified, checks)


def _modules_isomorphic(l: int) -> bool:
    if 2 * l + 1 != 3:
        return False
    return find_isomorphism(sl2(), sl2_irreducible(l), adjoint_action(sl2())) is not None


@dataclass
class RigidityReport:
    k: int
    l: int
    hypotheses: list[Check]
    h2_ghat: int
    hl2_h: int
    hl2_ghat: int | None
    e2: int
    certified: bool
    verdict: str

    def as_dict(self) -> dict:
        return {"k": self.k, "l": self.l,
                "hypotheses": [{"name": c.name, "passed": c.passed, "detail": c.detail} for c in self.hypotheses],
                "H2(ghat,ghat)": self.h2_ghat, "HL2(h,h)": self.hl2_h, "HL2(ghat,ghat)": self.hl2_ghat,
                "E2(h;s,h)": self.e2, "certified": self.certified, "verdict": self.verdict}


RIGID = "rigid with nonzero HL\u00b2 (evidence)"
OUTSIDE = "outside theorem hypotheses"
UNCERTIFIED = "consistent with rigidity (uncertified ranks)"
NOT_REPRODUCED = "theorem prediction not reproduced"


def rigidity_report(k: int, l: int, strategy: str = "auto", with_ghat_hl2: bool = True) -> RigidityReport:
    """Cohomological evidence for rigidity of ``richardson_leibniz(k, l)``.

    Rigidity itself (an open orbit) is not decided; the report certifies the
    two computable ingredients, ``E^2(h; sl2, h) = 0`` and ``HL^2(h, h) != 0``.
    """
    if k < 1 or l < 1:
        raise ValueError("need k, l >= 1")
    hyp = [
        Check("k > 4l", k > 4 * l, f"{k} vs {4 * l}"),
        Check("k odd", k % 2 == 1),
        Check("I not isomorphic to sl2", not _modules_isomorphic(l), f"dim I = {2 * l + 1}"),
        Check("dim M > dim I * dim g", 2 * k + 1 > 3 * (2 * l + 1), f"{2 * k + 1} vs {3 * (2 * l + 1)}"),
    ]
    h = richardson_leibniz(k, l)
    g = richardson_lie(k)
    ce = cohomology(CEComplex(g, adjoint_bimodule(g)), [2], strategy)
    hl = cohomology(LodayComplex(h, adjoint_bimodule(h)), [2], strategy)
    hlg = cohomology(LodayComplex(g, adjoint_bimodule(g)), [2], strategy) if with_ghat_hl2 else None
    ev = stability_evidence(h, Subspace.coordinate(h.dim, [0, 1, 2]), strategy=strategy)
    certified = ce.certified and hl.certified and ev.certified and (hlg is None or hlg.certified)
    hl2 = hl.dim(2)
    if not all(c.passed for c in hyp):
        verdict = OUTSIDE
    elif ev.e2 == 0 and hl2 > 0:
        # a modular E^2 = 0 is exact, but a modular HL^2 is only an upper bound
        verdict = RIGID if certified else UNCERTIFIED
    else:
        verdict = NOT_REPRODUCED
    return RigidityReport(k, l, hyp, ce.dim(2), hl2, hlg.dim(2) if hlg else None, ev.e2, certified, verdict)


def quotient_equality_report(k: int, l: int, strategy: str = "auto") -> dict:
    """``dim HL^2(h,h)``, ``dim H^2(ghat,ghat)`` and ``dim HL^2(ghat,ghat)``
    computed independently for ``h = richardson_leibniz(k, l)`` and its Lie
    quotient ``ghat``; checks ``HL^2(h,h) = HL^2(ghat,ghat) >= H^2(ghat,ghat)``."""
    if k < 1 or l < 1:
        raise ValueError("need k, l >= 1")
    h = richardson_leibniz(k, l)
    g = richardson_lie(k)
    a = cohomology(LodayComplex(h, adjoint_bimodule(h)), [2], strategy)
    b = cohomology(CEComplex(g, adjoint_bimodule(g)), [2], strategy)
    c = cohomology(LodayComplex(g, adjoint_bimodule(g)), [2], strategy)
    out = {"k": k, "l": l, "HL2(h,h)": a.dim(2), "H2(ghat,ghat)": b.dim(2), "HL2(ghat,ghat)": c.dim(2),
           "certified": a.certified and b.certified and c.certified}
    out["direct_factor_ok"] = out["HL2(ghat,ghat)"] >= out["H2(ghat,ghat)"]
    out["equal"] = out["HL2(h,h)"] == out["HL2(ghat,ghat)"]
    return out


def _killing_nondegenerate(g: AlgebraLaw) -> bool:
    n = g.dim
    ads = [g.left_mult(i) for i in range(n)]
    rows = []
    for i in range(n):
        row = {}
        for j in range(n):
            prod = ads[i] @ ads[j]
            tr = sum(prod[a, a] for a in range(n))
            if tr:
                row[j] = tr
        rows.append(row)
    return ff_rank(rows) == n


def semisimple_leibniz_report(h: AlgebraLaw, strategy: str = "auto") -> dict:
    """Vanishing of ``HL^1(h,h)`` and ``HL^2(h,h)`` for a Leibniz algebra whose
    Lie quotient is semisimple and whose ideal of squares has no invariants.

    Raises HypothesisFailed naming the failing hypothesis.
    """
    require_leibniz(h)
    I = ideal_of_squares(h)
    q = quotient_law(h, I)
    if not (is_lie(q) and q.dim > 0 and _killing_nondegenerate(q)):
        raise HypothesisFailed("Lie quotient semisimple", "Killing form of the quotient is degenerate")
    if I.dim:
        # invariants: i in I with [i, x] = 0 for all x
        cols = []
        for b in I.basis:
            col = {}
            for x in range(h.dim):
                for k, v in h.right_mult(x).apply_sparse({a: c for a, c in enumerate(b) if c}).items():
                    col[x * h.dim + k] = v
            cols.append(col)
        inv = kernel_basis(SparseMat(h.dim * h.dim, len(cols), cols))
        if inv:
            raise HypothesisFailed("no invariants in the ideal of squares", f"{len(inv)}-dimensional invariants")
    rep = cohomology(LodayComplex(h, adjoint_bimodule(h)), [1, 2], strategy)
    dims = rep.dims()
    return {"HL1": dims[1], "HL2": dims[2], "certified": rep.certified,
            "vanishes": dims[1] == 0 and dims[2] == 0}
