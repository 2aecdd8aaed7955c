import pytest

from leibcoh.bimodules import adjoint_bimodule, symmetric_from_lie, trivial_bimodule
from leibcoh.cohomology import (CohomologyBasis, check_long_exact, ce_sequence, cohomology, degree_cohomology,
                                induced_map, pair_sequence)
from leibcoh.complexes import CEComplex, LodayComplex, PirashviliRelComplex
from leibcoh.constructors import (abelian, heisenberg3, projection_to_quotient, richardson_leibniz,
                                  richardson_lie, sl2, sl2_irreducible)
from leibcoh.errors import CompositionNotZero, DimensionMismatch, NotAChainMap
from leibcoh.linalg import SparseMat

from conftest import corpus, lie_corpus, oracle_ce, oracle_hl


def _hl(law, M, degrees, **kw):
    return cohomology(LodayComplex(law, M), degrees, **kw)


def test_abelian_one_dim():
    k = abelian(1)
    A = adjoint_bimodule(k)
    assert _hl(k, A, [2]).dim(2) == 1
    assert cohomology(CEComplex(k, A), [2]).dim(2) == 0


def test_sl2_vanishing():
    s = sl2()
    assert _hl(s, adjoint_bimodule(s), [1, 2]).dims() == {1: 0, 2: 0}


def test_report_invariant_and_certification():
    h = heisenberg3()
    rep = cohomology(CEComplex(h, adjoint_bimodule(h)), [0, 1, 2, 3])
    for r in rep.degrees.values():
        assert r.dim == r.cochains - r.rank_d - r.rank_prev >= 0
        assert r.certified and r.method == "exact"
    assert rep.certified and "deg" in rep.table()


@pytest.mark.parametrize("name,values", [
    ("hemisemidirect(sl2,M1)", [3, 2, 0]),
    ("richardson_leibniz(1,1)", [3, 3, 1]),
    ("abelian(1)", [1, 1, 1]),
    ("sl2", [0, 0, 0]),
])
def test_hl_adjoint_frozen_values(name, values):
    # frozen from the formula oracle in conftest
    law = corpus()[name]
    got = _hl(law, adjoint_bimodule(law), [0, 1, 2])
    assert list(got.dims().values()) == values


def test_hl_matches_formula_oracle():
    for name in ["heisenberg3", "hemisemidirect(sl2,M1)"]:
        law = corpus()[name]
        for M in (adjoint_bimodule(law), trivial_bimodule(law)):
            assert list(_hl(law, M, [0, 1, 2]).dims().values()) == oracle_hl(law, M, 2)


def test_ghat_one_values():
    g = richardson_lie(1)
    assert list(_hl(g, adjoint_bimodule(g), [0, 1, 2]).dims().values()) == [0, 1, 1]


def test_ce_matches_formula_oracle():
    for name, g in lie_corpus().items():
        for M in (adjoint_bimodule(g), trivial_bimodule(g)):
            assert list(cohomology(CEComplex(g, M), [0, 1, 2]).dims().values()) == oracle_ce(g, M, 2)


@pytest.mark.parametrize("name", sorted(lie_corpus()))
def test_ce_is_direct_factor_in_degree_two(name):
    g = lie_corpus()[name]
    for M in (adjoint_bimodule(g), trivial_bimodule(g)):
        assert cohomology(CEComplex(g, M), [2]).dim(2) <= _hl(g, M, [2]).dim(2)


@pytest.mark.parametrize("name", sorted(lie_corpus()))
def test_ce_vanishing_implies_leibniz_vanishing(name):
    g = lie_corpus()[name]
    modules = [adjoint_bimodule(g), trivial_bimodule(g)]
    if name == "sl2":
        modules.append(symmetric_from_lie(g, sl2_irreducible(1)))
    for M in modules:
        ce = cohomology(CEComplex(g, M), [0, 1, 2, 3]).dims()
        if not any(ce.values()):
            assert not any(_hl(g, M, [0, 1, 2, 3]).dims().values())


@pytest.mark.parametrize("name", ["heisenberg3", "hemisemidirect(sl2,M1)", "richardson_leibniz(1,1)", "sl2"])
def test_strategies_agree(name):
    law = corpus()[name]
    C = LodayComplex(law, adjoint_bimodule(law))
    reps = {s: cohomology(C, [0, 1, 2], strategy=s, threshold=0) for s in ("exact", "modular", "auto")}
    assert reps["exact"].dims() == reps["modular"].dims() == reps["auto"].dims()


def test_unknown_strategy():
    s = sl2()
    with pytest.raises(ValueError):
        degree_cohomology(LodayComplex(s, adjoint_bimodule(s)), 1, strategy="guess")


def test_representatives():
    h = heisenberg3()
    C = CEComplex(h, adjoint_bimodule(h))
    rep = cohomology(C, [1, 2], representatives=True)
    B = CohomologyBasis(C, 2)
    assert B.dim == rep.dim(2) == len(rep.representatives[2])
    for z in B.reps:
        assert B.is_cocycle(z) and not B.is_coboundary(z)
    col = next(c for c in C.d(1).columns() if c)
    assert B.is_coboundary(col)
    unit = next({i: 1} for i in range(C.dim(2)) if not B.is_cocycle({i: 1}))
    with pytest.raises(ValueError):
        B.coordinates(unit)


def test_identity_induces_identity():
    h = heisenberg3()
    C = LodayComplex(h, trivial_bimodule(h))
    m = induced_map(lambda k: SparseMat.identity(C.dim(k)), C, C, 2)
    n = len(m)
    assert n == cohomology(C, [2]).dim(2)
    assert m == [[int(i == j) for j in range(n)] for i in range(n)]


def test_inclusion_injective_in_degree_two():
    from leibcoh.cohomology import _mat_rank
    h = heisenberg3()
    T = trivial_bimodule(h)
    ce, lo = CEComplex(h, T), LodayComplex(h, T)
    m = induced_map(ce.inclusion, ce, lo, 2)
    assert len(m[0]) == cohomology(ce, [2]).dim(2) == _mat_rank(m)


def test_projection_after_inclusion_is_zero():
    h = heisenberg3()
    T = trivial_bimodule(h)
    ce, lo, rel = CEComplex(h, T), LodayComplex(h, T), PirashviliRelComplex(h, T)
    for n in range(3):
        assert (rel.projection(n) @ ce.inclusion(n)).is_zero()


def test_not_a_chain_map():
    h = heisenberg3()
    C = LodayComplex(h, adjoint_bimodule(h))

    def f(k):
        m = SparseMat.identity(C.dim(k))
        return m.scale(2) if k == 2 else m

    with pytest.raises(NotAChainMap):
        induced_map(f, C, C, 2)
    with pytest.raises(DimensionMismatch):
        induced_map(lambda k: SparseMat.identity(C.dim(k) + 1), C, C, 1)


def test_check_long_exact_small():
    ok = check_long_exact([1, 1, 0], [[[1]], []], zero_before=True, zero_after=True)
    assert ok.exact
    bad = check_long_exact([1, 1], [[[0]]], zero_before=True, zero_after=True)
    assert not bad.exact
    with pytest.raises(CompositionNotZero):
        check_long_exact([1, 1, 1], [[[1]], [[1]]])
    with pytest.raises(DimensionMismatch):
        check_long_exact([1, 2], [[[1]]])


def test_heisenberg_sequence_exact():
    h = heisenberg3()
    rep = ce_sequence(h, trivial_bimodule(h), [0, 1, 2, 3])
    assert rep.exact and len(rep.exact_at) >= 12


def test_sl2_sequence_all_zero():
    s = sl2()
    rep = ce_sequence(s, symmetric_from_lie(s, sl2_irreducible(1)), [0, 1, 2])
    assert rep.exact and not any(rep.dims)


def test_pair_sequence_exact():
    h, g = richardson_leibniz(1, 1), richardson_lie(1)
    rep = pair_sequence(projection_to_quotient(1, 1), h, g, adjoint_bimodule(g), [0, 1, 2])
    assert rep.exact

