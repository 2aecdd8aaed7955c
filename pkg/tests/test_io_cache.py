import json
import os
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from leibcoh.algebra import AlgebraLaw
from leibcoh.bimodules import Bimodule, adjoint_bimodule, antisymmetric_from_lie, symmetric_from_lie
from leibcoh.cache import ENV_VAR, ResultCache, cache_key, canonical
from leibcoh.constructors import richardson_leibniz, sl2, sl2_irreducible
from leibcoh.errors import BadModule
from leibcoh.io import (FormatError, dumps_law, dumps_module, law_to_dict, load_law, load_module, loads_law,
                        loads_module, parse_rational, save_law, save_module)
from leibcoh.linalg import SparseMat

from conftest import corpus


@pytest.mark.parametrize("name", sorted(corpus()))
def test_law_round_trip(name):
    law = corpus()[name]
    back = loads_law(dumps_law(law))
    assert back == law and back.labels == law.labels
    assert dumps_law(back) == dumps_law(law)


def test_rational_coefficients_round_trip(tmp_path):
    law = AlgebraLaw(2, {(0, 0): {1: Fraction(-3, 7)}, (1, 0): {1: Fraction(5, 2)}})
    path = tmp_path / "q.json"
    save_law(law, str(path))
    assert load_law(str(path)) == law
    text = path.read_text()
    assert '"-3/7"' in text and '"5/2"' in text


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 4).flatmap(lambda n: st.tuples(st.just(n), st.dictionaries(
    st.tuples(st.integers(0, n - 1), st.integers(0, n - 1)),
    st.dictionaries(st.integers(0, n - 1), st.fractions(max_denominator=9).filter(bool), max_size=n),
    max_size=n * n))))
def test_random_tables_round_trip(data):
    n, table = data
    law = AlgebraLaw(n, table)
    assert loads_law(dumps_law(law)) == law


@pytest.mark.parametrize("embed", [True, False])
def test_module_round_trip(tmp_path, embed):
    h = richardson_leibniz(1, 1)
    M = adjoint_bimodule(h)
    ref = None
    if not embed:
        save_law(h, str(tmp_path / "h.json"))
        ref = "h.json"
    save_module(M, str(tmp_path / "m.json"), law_ref=ref)
    back = load_module(str(tmp_path / "m.json"))
    assert back == M
    s = sl2()
    for N in (symmetric_from_lie(s, sl2_irreducible(2)), antisymmetric_from_lie(s, sl2_irreducible(2))):
        assert loads_module(dumps_module(N)) == N


def test_strict_load_names_axiom():
    s = sl2()
    M = symmetric_from_lie(s, sl2_irreducible(1))
    left = list(M.left)
    left[0] = left[0] + SparseMat.from_entries(3, 3, {(0, 0): 1})
    text = dumps_module(Bimodule(s, 3, left, M.right))
    with pytest.raises(BadModule) as err:
        loads_module(text)
    assert any(ax in str(err.value) for ax in ("MLL", "LML", "LLM"))
    assert loads_module(text, strict=False).dim_m == 3


@pytest.mark.parametrize("text", [
    "not json",
    json.dumps({"format": "other"}),
    json.dumps({"format": "leibcoh-law", "version": 1, "dim": 2}),
    json.dumps({"format": "leibcoh-law", "version": 1, "dim": 2,
                "brackets": [{"i": 0, "j": 0, "terms": [{"k": 1, "c": 0.5}]}]}),
    json.dumps({"format": "leibcoh-law", "version": 1, "dim": 2,
                "brackets": [{"i": 0, "j": 0, "terms": [{"k": 1, "c": "1/0"}]}]}),
    json.dumps({"format": "leibcoh-law", "version": 1, "dim": 2,
                "brackets": [{"i": 0, "j": 0, "terms": []}, {"i": 0, "j": 0, "terms": []}]}),
])
def test_format_errors(text):
    with pytest.raises(FormatError):
        loads_law(text)


def test_parse_rational():
    assert parse_rational("4/6") == Fraction(2, 3)
    assert parse_rational(3) == 3
    for bad in (True, 1.5, "x"):
        with pytest.raises(FormatError):
            parse_rational(bad)


def test_cache_key_depends_on_everything():
    inputs = law_to_dict(sl2())
    k = cache_key(inputs, "cohomology", "auto")
    assert k == cache_key(json.loads(canonical(inputs)), "cohomology", "auto")
    assert k != cache_key(inputs, "cohomology", "exact")
    assert k != cache_key(inputs, "report", "auto")
    changed = law_to_dict(sl2())
    changed["brackets"][0]["terms"][0]["c"] = "3"
    assert k != cache_key(changed, "cohomology", "auto")


def test_cache_hit_and_corruption(tmp_path):
    cache = ResultCache(str(tmp_path))
    calls = []

    def compute():
        calls.append(1)
        return {"H": [1, 2, 3]}

    first, hit = cache.get_or_compute({"a": 1}, "op", "auto", compute)
    second, hit2 = cache.get_or_compute({"a": 1}, "op", "auto", compute)
    assert (hit, hit2) == (False, True) and first == second and len(calls) == 1
    cache.get_or_compute({"a": 1}, "op", "exact", compute)
    assert len(calls) == 2
    key = cache_key({"a": 1}, "op", "auto")
    path = tmp_path / f"{key}.json"
    entry = json.loads(path.read_text())
    entry["payload"]["H"][0] = 99
    path.write_text(json.dumps(entry))
    assert cache.get(key) is None and not path.exists()
    path.write_text("{garbage")
    assert cache.get(key) is None and not path.exists()


def test_cache_disabled_and_env(tmp_path, monkeypatch):
    monkeypatch.delenv(ENV_VAR, raising=False)
    off = ResultCache()
    assert not off.enabled and off.get("x") is None
    monkeypatch.setenv(ENV_VAR, str(tmp_path / "c"))
    on = ResultCache()
    assert on.enabled and os.path.isdir(tmp_path / "c")
