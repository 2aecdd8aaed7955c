"""Cohomology dimensions, representatives, induced maps and long exact sequences.

Dimensions are computed block by block.  ``d^{n-1}`` and ``d^n`` are split
into the connected components of the graph joining ``C^{n-1}``, ``C^n`` and
``C^{n+1}`` through nonzero entries (for the complexes here these follow the
weight gradings).  Each component contributes
``#C^n-nodes - rank d^n - rank d^{n-1}``.

Ranks modulo a prime never exceed the rational rank, so a modular count is
an upper bound on the cohomology of a block and a modular zero is an exact
zero.  The ``auto`` strategy uses that: blocks whose modular bound is zero
are certified without rational elimination; the others are eliminated
exactly when they are small enough, and otherwise reported as bounds.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components

from .complexes import CochainComplex
from .errors import CompositionNotZero, DimensionMismatch, NotAChainMap
from .linalg import EXACT_THRESHOLD, PRIMES, Echelon, SparseMat, ff_rank, kernel_basis, norm_scalar, rank_mod_p

STRATEGIES = ("auto", "exact", "modular")
SMALL_BLOCK = 4096  # blocks up to this many matrix entries are always eliminated exactly


@dataclass(frozen=True)
class DegreeResult:
    degree: int          # cochain degree
    label: int           # reported degree (cochain degree minus the complex's shift)
    dim: int
    cochains: int
    rank_d: int          # rank of d^n
    rank_prev: int       # rank of d^{n-1}
    method: str          # "exact", "certified" (modular zero) or "mixed"/"modular"
    certified: bool
    blocks: int

    def as_dict(self) -> dict:
        return dict(self.__dict__)


@dataclass
class CohomologyReport:
    kind: str
    strategy: str
    degrees: dict[int, DegreeResult] = field(default_factory=dict)
    representatives: dict[int, list[dict[int, object]]] = field(default_factory=dict)

    def dim(self, label: int) -> int:
        for r in self.degrees.values():
            if r.label == label:
                return r.dim
        raise KeyError(label)

    def dims(self) -> dict[int, int]:
        return {r.label: r.dim for r in self.degrees.values()}

    @property
    def certified(self) -> bool:
        return all(r.certified for r in self.degrees.values())

    def as_dict(self) -> dict:
        return {"kind": self.kind, "strategy": self.strategy,
                "degrees": [r.as_dict() for r in self.degrees.values()],
                "certified": self.certified}

    def table(self) -> str:
        lines = [f"{'deg':>4} {'dim':>6} {'cochains':>9} {'rank d':>7} {'method':>10}"]
        for r in self.degrees.values():
            flag = "" if r.certified else " (upper bound)"
            lines.append(f"{r.label:>4} {r.dim:>6} {r.cochains:>9} {r.rank_d:>7} {r.method:>10}{flag}")
        return "\n".join(lines)


def joint_blocks(dprev: SparseMat, dnext: SparseMat) -> list[tuple[list[int], list[int], list[int]]]:
    """Components ``(prev_cols, mid, next_rows)``; ``mid`` is never empty.
    Isolated middle nodes come out as singleton components."""
    n0, n1, n2 = dprev.ncols, dnext.ncols, dnext.nrows
    if dprev.nrows != n1:
        raise DimensionMismatch("d^{n-1} and d^n do not compose")
    ii, jj = [], []
    for j, col in enumerate(dprev.columns()):
        for i in col:
            ii.append(j)
            jj.append(n0 + i)
    for j, col in enumerate(dnext.columns()):
        for i in col:
            ii.append(n0 + j)
            jj.append(n0 + n1 + i)
    total = n0 + n1 + n2
    g = coo_matrix((np.ones(len(ii), dtype=np.int8), (np.asarray(ii, dtype=np.int64), np.asarray(jj, dtype=np.int64))),
                   shape=(total, total))
    _, labels = connected_components(g, directed=False)
    groups: dict[int, tuple[list, list, list]] = {}
    for node in range(n0, n0 + n1):
        groups.setdefault(int(labels[node]), ([], [], []))[1].append(node - n0)
    for node in range(n0):
        lab = int(labels[node])
        if lab in groups:
            groups[lab][0].append(node)
    for node in range(n0 + n1, total):
        lab = int(labels[node])
        if lab in groups:
            groups[lab][2].append(node - n0 - n1)
    return sorted(groups.values(), key=lambda b: b[1][0])


def _exact_rank(m: SparseMat, rows, cols) -> int:
    if not rows or not cols:
        return 0
    sub = m.select(rows, cols)
    if len(rows) < len(cols):
        sub = sub.transpose()
    return ff_rank(sub.columns())


def _modular_rank(m: SparseMat, rows, cols, primes) -> int | None:
    if not rows or not cols:
        return 0
    best = None
    for p in primes:
        r = rank_mod_p(m, p, rows, cols)
        if r is None:
            continue
        best = r if best is None else max(best, r)
    return best


def degree_cohomology(C: CochainComplex, n: int, strategy: str = "auto", threshold: int = EXACT_THRESHOLD,
                      primes: Sequence[int] = PRIMES) -> DegreeResult:
    if strategy not in STRATEGIES:
        raise ValueError(f"unknown rank strategy {strategy!r}")
    dprev = C.d(n - 1) if n > 0 else SparseMat.zeros(C.dim(0), 0)
    dnext = C.d(n)
    total = rk_d = rk_prev = 0
    methods = set()
    parts = joint_blocks(dprev, dnext)
    for pc, mid, nr in parts:
        size = max(len(pc) * len(mid), len(mid) * len(nr))
        how = "exact"
        if strategy == "exact" or size <= SMALL_BLOCK:
            a, b = _exact_rank(dnext, nr, mid), _exact_rank(dprev, mid, pc)
        else:
            a, b = _modular_rank(dnext, nr, mid, primes), _modular_rank(dprev, mid, pc, primes)
            if a is None or b is None:
                a, b = _exact_rank(dnext, nr, mid), _exact_rank(dprev, mid, pc)
            elif len(mid) - a - b == 0:
                # modular ranks are lower bounds, so an acyclic block is certified
                how = "certified"
            elif strategy == "auto" and size <= threshold:
                a, b = _exact_rank(dnext, nr, mid), _exact_rank(dprev, mid, pc)
            else:
                how = "modular"
        methods.add(how)
        rk_d += a
        rk_prev += b
        total += len(mid) - a - b
    certified = "modular" not in methods
    if methods <= {"exact"}:
        method = "exact"
    elif certified:
        method = "certified"
    else:
        method = "modular"
    return DegreeResult(n, n - C.label_shift, total, C.dim(n), rk_d, rk_prev, method, certified, len(parts))


def cohomology(C: CochainComplex, degrees: Sequence[int], strategy: str = "auto",
               threshold: int = EXACT_THRESHOLD, primes: Sequence[int] = PRIMES,
               representatives: bool = False) -> CohomologyReport:
    """Dimensions of ``H^n(C)`` for the cochain degrees ``degrees``.

    With ``representatives=True`` exact cocycles spanning each ``H^n`` modulo
    coboundaries are attached (rational elimination on the full slices).
    """
    rep = CohomologyReport(C.kind, strategy)
    for n in degrees:
        rep.degrees[n] = degree_cohomology(C, n, strategy, threshold, primes)
        if representatives:
            basis = CohomologyBasis(C, n)
            if len(basis.reps) != rep.degrees[n].dim:
                raise AssertionError("representatives disagree with the rank computation")
            rep.representatives[n] = basis.reps
    return rep


class CohomologyBasis:
    """Exact cocycle representatives of ``H^n`` and coordinates of classes."""

    def __init__(self, C: CochainComplex, n: int):
        self.C, self.n = C, n
        dprev = C.d(n - 1) if n > 0 else SparseMat.zeros(C.dim(0), 0)
        dnext = C.d(n)
        self.ech = Echelon(track=True)
        self._nb = 0
        for col in dprev.columns():
            if col:
                self.ech.add(col)
                self._nb += 1
        self.reps: list[dict[int, object]] = []
        self._rep_input: list[int] = []
        for v in kernel_basis(dnext):
            z = {k: x for k, x in enumerate(v) if x}
            idx = self.ech.count
            if self.ech.add(z) is None:
                self.reps.append(z)
                self._rep_input.append(idx)

    @property
    def dim(self) -> int:
        return len(self.reps)

    def is_cocycle(self, v: dict[int, object]) -> bool:
        return not any(self.C.d(self.n).apply_sparse(v).values())

    def coordinates(self, v: dict[int, object]) -> list:
        """Coordinates of the class of the cocycle ``v`` in the rep basis."""
        if not self.is_cocycle(v):
            raise ValueError("not a cocycle")
        combo = self.ech.decompose(v)
        if combo is None:
            raise AssertionError("cocycle outside boundaries + representatives")
        return [norm_scalar(combo.get(i, 0)) for i in self._rep_input]

    def is_coboundary(self, v: dict[int, object]) -> bool:
        return not any(self.coordinates(v))


def induced_map(f_by_degree, src: CochainComplex, dst: CochainComplex, n: int,
                src_basis: CohomologyBasis | None = None, dst_basis: CohomologyBasis | None = None) -> list[list]:
    """Matrix of ``H^n(src) -> H^n(dst)`` induced by the chain map given as
    ``f_by_degree(k) -> SparseMat`` (``C^k_src -> C^k_dst``).

    The chain-map identity is checked in degrees ``n - 1`` and ``n``, and the
    image of every coboundary is checked to be a coboundary, so the result
    does not depend on the chosen representatives.
    """
    for k in (n - 1, n):
        if k < 0:
            continue
        fk, fk1 = f_by_degree(k), f_by_degree(k + 1)
        if fk.shape != (dst.dim(k), src.dim(k)) or fk1.shape != (dst.dim(k + 1), src.dim(k + 1)):
            raise DimensionMismatch("chain map has the wrong shape")
        if dst.d(k) @ fk != fk1 @ src.d(k):
            raise NotAChainMap(f"d f != f d in degree {k}")
    sb = src_basis or CohomologyBasis(src, n)
    db = dst_basis or CohomologyBasis(dst, n)
    fn = f_by_degree(n)
    if n > 0:
        for col in src.d(n - 1).columns():
            if col and not db.is_coboundary(fn.apply_sparse(col)):
                raise NotAChainMap("a coboundary is not mapped to a coboundary")
    cols = [db.coordinates(fn.apply_sparse(z)) for z in sb.reps]
    return [[cols[j][i] for j in range(len(cols))] for i in range(db.dim)]


def connecting_map(sub: CochainComplex, mid: CochainComplex, quo: CochainComplex, incl, section, n: int,
                   sub_next: CohomologyBasis, quo_basis: CohomologyBasis) -> list[list]:
    """``H^n(quo) -> H^{n+1}(sub)`` by the zig-zag: lift with ``section``,
    apply ``d``, pull back along the inclusion."""
    s = section(n)
    inc = incl(n + 1)
    ech = Echelon(track=True)
    for col in inc.columns():
        ech.add(col)
    cols = []
    for z in quo_basis.reps:
        y = mid.d(n).apply_sparse(s.apply_sparse(z))
        combo = ech.decompose(y)
        if combo is None:
            raise AssertionError("d of a lifted cocycle is not in the subcomplex")
        x = {k: v for k, v in combo.items() if v}
        if inc.apply_sparse(x) != {k: v for k, v in y.items() if v}:
            raise AssertionError("preimage check failed")
        cols.append(sub_next.coordinates(x))
    return [[cols[j][i] for j in range(len(cols))] for i in range(sub_next.dim)]


def _mat_rank(m: list[list]) -> int:
    if not m or not m[0]:
        return 0
    cols = [{i: m[i][j] for i in range(len(m)) if m[i][j]} for j in range(len(m[0]))]
    return ff_rank(cols)


def _mat_mul(a: list[list], b: list[list], inner: int) -> list[list]:
    return [[sum(a[i][k] * b[k][j] for k in range(inner)) for j in range(len(b[0]) if b else 0)] for i in range(len(a))]


@dataclass
class ExactnessReport:
    dims: list[int]
    names: list[str]
    ranks: list[int]          # rank of the map leaving each slot
    exact_at: list[bool]      # exactness at each interior slot

    @property
    def exact(self) -> bool:
        return all(self.exact_at)


def check_long_exact(dims: Sequence[int], maps: Sequence[list[list]], names: Sequence[str] | None = None,
                     zero_before: bool = False, zero_after: bool = False) -> ExactnessReport:
    """Exactness of ``V_0 -> V_1 -> ... -> V_m`` given the maps ``V_i -> V_{i+1}``
    as ``dim V_{i+1} x dim V_i`` matrices.  ``zero_before``/``zero_after``
    say that the sequence starts or ends with ``0``.

    Raises CompositionNotZero when two consecutive maps do not compose to 0.
    """
    dims = list(dims)
    if len(maps) != len(dims) - 1:
        raise DimensionMismatch("need one map between consecutive spaces")
    for i, m in enumerate(maps):
        if len(m) != dims[i + 1] or any(len(r) != dims[i] for r in m):
            raise DimensionMismatch(f"map {i} has the wrong shape")
    for i in range(len(maps) - 1):
        if dims[i] and dims[i + 2]:
            prod = _mat_mul(maps[i + 1], maps[i], dims[i + 1])
            if any(x for r in prod for x in r):
                raise CompositionNotZero(f"maps {i} and {i + 1} do not compose to zero")
    ranks = [_mat_rank(m) if dims[i] and dims[i + 1] else 0 for i, m in enumerate(maps)] + [0]
    exact_at = []
    for i in range(len(dims)):
        incoming = ranks[i - 1] if i > 0 else None
        outgoing = ranks[i] if i < len(maps) else None
        if incoming is None and not zero_before:
            continue
        if outgoing is None and not zero_after:
            continue
        exact_at.append(dims[i] - (outgoing or 0) == (incoming or 0))
    return ExactnessReport(dims, list(names or [str(i) for i in range(len(dims))]), ranks[:-1], exact_at)


def long_exact_sequence(sub: CochainComplex, mid: CochainComplex, quo: CochainComplex,
                        incl, proj, section, degrees: Sequence[int], names=("A", "B", "C")) -> ExactnessReport:
    """Assemble and check ``... -> H^n(A) -> H^n(B) -> H^n(C) -> H^{n+1}(A) -> ...``
    for the short exact sequence ``0 -> A -> B -> C -> 0`` of complexes."""
    degrees = list(degrees)
    bases = {}
    for n in degrees + [degrees[-1] + 1]:
        bases[("A", n)] = CohomologyBasis(sub, n)
    for n in degrees:
        bases[("B", n)] = CohomologyBasis(mid, n)
        bases[("C", n)] = CohomologyBasis(quo, n)
    dims, maps, labels = [], [], []
    for n in degrees:
        a, b, c = bases[("A", n)], bases[("B", n)], bases[("C", n)]
        if dims:
            pass
        else:
            dims.append(a.dim)
            labels.append(f"H^{n}({names[0]})")
        maps.append(induced_map(incl, sub, mid, n, a, b))
        dims.append(b.dim)
        labels.append(f"H^{n}({names[1]})")
        maps.append(induced_map(proj, mid, quo, n, b, c))
        dims.append(c.dim)
        labels.append(f"H^{n - quo.label_shift}({names[2]})")
        nxt = bases[("A", n + 1)]
        maps.append(connecting_map(sub, mid, quo, incl, section, n, nxt, c))
        dims.append(nxt.dim)
        labels.append(f"H^{n + 1}({names[0]})")
    return check_long_exact(dims, maps, labels, zero_before=degrees[0] == 0)


def ce_sequence(law, M, degrees: Sequence[int]) -> ExactnessReport:
    """``0 -> C_CE -> CL -> CL/C_CE -> 0`` for a Lie algebra and symmetric module."""
    from .complexes import CEComplex, LodayComplex, PirashviliRelComplex
    ce, lo, rel = CEComplex(law, M), LodayComplex(law, M), PirashviliRelComplex(law, M)
    rel.ce, rel.loday = ce, lo
    return long_exact_sequence(ce, lo, rel, ce.inclusion, rel.projection, rel.section, degrees,
                               names=("CE", "Leib", "rel"))


def pair_sequence(f, h, b, M, degrees: Sequence[int]) -> ExactnessReport:
    """``0 -> CL(b, M) -> CL(h, f*M) -> CL(h; b, M) -> 0`` for a surjection ``f: h -> b``."""
    from .complexes import PairRelComplex
    rel = PairRelComplex(f, h, b, M)
    return long_exact_sequence(rel.base, rel.loday, rel, rel.pullback_map, rel.projection, rel.section, degrees,
                               names=("b", "h", "h;b"))
