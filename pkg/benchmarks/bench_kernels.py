"""Compare the compiled mod-p kernels with the numpy fallback.

    python benchmarks/bench_kernels.py [--sizes 200 400 800] [--repeat 3]

Reports the best wall time of each kernel on random matrices, plus one
end-to-end modular cohomology run under each backend (in a subprocess, since
the backend is chosen at import).
"""

import argparse
import os
import subprocess
import sys
import time

import numpy as np

from leibcoh.linalg import PRIMES, SparseMat
from leibcoh.linalg import _modp_py
from leibcoh.linalg.modular import SEED, _residues

try:
    from leibcoh.linalg import _modp
except ImportError:
    _modp = None

P = PRIMES[0]

END_TO_END = """
import time
from leibcoh.bimodules import adjoint_bimodule
from leibcoh.cohomology import cohomology
from leibcoh.complexes import LodayComplex
from leibcoh.constructors import richardson_leibniz
from leibcoh.linalg import BACKEND
h = richardson_leibniz({k}, {l})
t = time.perf_counter()
r = cohomology(LodayComplex(h, adjoint_bimodule(h)), [2], "modular", threshold=0)
print(BACKEND, r.dim(2), round(time.perf_counter() - t, 3))
"""


def best(fn, repeat):
    times = []
    for _ in range(repeat):
        t = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t)
    return min(times)


def bench_dense(n, repeat, rng):
    a = rng.integers(0, P, size=(n, n), dtype=np.int64)
    row = [f"dense_rank {n}x{n}"]
    for mod in (_modp, _modp_py):
        row.append(best(lambda: mod.dense_rank(a.copy(), P), repeat) if mod else None)
    return row


def bench_compress(n, repeat, rng):
    nrows, ncols = 8 * n, n
    entries = {(int(i), int(j)): int(v) for i, j, v in zip(rng.integers(0, nrows, 6 * nrows),
                                                           rng.integers(0, ncols, 6 * nrows),
                                                           rng.integers(1, 50, 6 * nrows))}
    m = SparseMat.from_entries(nrows, ncols, entries)
    ip, ix, dt = _residues(m, P)
    row = [f"compress {nrows}x{ncols}"]
    for mod in (_modp, _modp_py):
        row.append(best(lambda: mod.compress(ip, ix, dt, ncols, ncols, P, SEED), repeat) if mod else None)
    return row


def end_to_end(k, l):
    out = []
    for pure in (False, True):
        env = dict(os.environ)
        env.pop("LEIBCOH_PURE_PYTHON", None)
        if pure:
            env["LEIBCOH_PURE_PYTHON"] = "1"
        res = subprocess.run([sys.executable, "-c", END_TO_END.format(k=k, l=l)], env=env,
                             capture_output=True, text=True, check=True)
        out.append(res.stdout.strip())
    return out


def main():
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("--sizes", type=int, nargs="+", default=[100, 200, 400])
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--kl", type=int, nargs=2, default=[3, 1], help="richardson (k, l) for the end-to-end run")
    args = ap.parse_args()
    rng = np.random.default_rng(1)
    print(f"{'kernel':<24}{'compiled s':>12}{'numpy s':>12}{'speedup':>10}")
    for n in args.sizes:
        for row in (bench_dense(n, args.repeat, rng), bench_compress(n, args.repeat, rng)):
            name, c, p = row
            cs = f"{c:12.4f}" if c is not None else f"{'n/a':>12}"
            sp = f"{p / c:9.1f}x" if c else f"{'':>10}"
            print(f"{name:<24}{cs}{p:12.4f}{sp}")
    print("\nend to end, HL^2 of richardson_leibniz(%d,%d), modular ranks:" % tuple(args.kl))
    for line in end_to_end(*args.kl):
        backend, dim, secs = line.split()
        print(f"  {backend:<9} dim {dim}  {secs} s")


if __name__ == "__main__":
    main()
