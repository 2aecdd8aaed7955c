import os
import random
import subprocess
import sys

import numpy as np
import pytest

from leibcoh.linalg import PRIMES, SparseMat, dense_rank_oracle
from leibcoh.linalg import _modp_py
from leibcoh.linalg.modular import SEED, _residues

compiled = pytest.importorskip("leibcoh.linalg._modp")


def _random_sparse(rng, nr, nc, density):
    return [[rng.randint(-5, 5) if rng.random() < density else 0 for _ in range(nc)] for _ in range(nr)]


@pytest.mark.parametrize("seed", range(6))
def test_compress_agrees(seed):
    rng = random.Random(seed)
    dense = _random_sparse(rng, rng.randint(5, 60), rng.randint(3, 20), 0.3)
    m = SparseMat.from_dense(dense)
    ncols = len(dense[0])
    for p in PRIMES:
        ip, ix, dt = _residues(m, p)
        k = min(len(dense), ncols) + 2
        a = compiled.compress(ip, ix, dt, ncols, k, p, SEED)
        b = _modp_py.compress(ip, ix, dt, ncols, k, p, SEED)
        assert np.array_equal(np.asarray(a), np.asarray(b))


@pytest.mark.parametrize("seed", range(6))
def test_dense_rank_agrees(seed):
    rng = random.Random(100 + seed)
    nr, nc, r = rng.randint(1, 25), rng.randint(1, 25), rng.randint(0, 8)
    A = [[rng.randint(-3, 3) for _ in range(r)] for _ in range(nr)]
    B = [[rng.randint(-3, 3) for _ in range(nc)] for _ in range(r)]
    M = [[sum(A[i][t] * B[t][j] for t in range(r)) for j in range(nc)] for i in range(nr)]
    for p in PRIMES:
        arr = np.array([[x % p for x in row] for row in M], dtype=np.int64)
        got_c = int(compiled.dense_rank(arr.copy(), p))
        got_py = int(_modp_py.dense_rank(arr.copy(), p))
        assert got_c == got_py == dense_rank_oracle(M)


def test_env_var_selects_fallback():
    code = "from leibcoh.linalg import BACKEND; print(BACKEND)"
    env = dict(os.environ, LEIBCOH_PURE_PYTHON="1")
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "python"
    env.pop("LEIBCOH_PURE_PYTHON")
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "compiled"


def test_fallback_gives_same_cohomology():
    code = ("from leibcoh.constructors import richardson_leibniz;"
            "from leibcoh.algebra import Subspace;"
            "from leibcoh.complexes import SubRelComplex;"
            "from leibcoh.cohomology import cohomology;"
            "h = richardson_leibniz(5, 1);"
            "r = cohomology(SubRelComplex(h, Subspace.coordinate(h.dim, [0, 1, 2])), [0, 1, 2], 'modular', threshold=0);"
            "print(sorted(r.dims().items()))")
    outs = set()
    for flag in ("1", None):
        env = dict(os.environ)
        env.pop("LEIBCOH_PURE_PYTHON", None)
        if flag:
            env["LEIBCOH_PURE_PYTHON"] = flag
        outs.add(subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True,
                                check=True).stdout)
    assert len(outs) == 1
