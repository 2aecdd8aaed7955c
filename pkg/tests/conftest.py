"""Shared corpus and independent oracles.

The oracles rebuild the Leibniz coboundary row by row straight from the
defining formula on argument tuples (no integer encoding, no column
generation) and rank matrices with textbook elimination, so they share no
code path with the package's complexes or rank kernels.
"""

from __future__ import annotations

import itertools
import time
from fractions import Fraction

import numpy as np
import pytest

from leibcoh.bimodules import adjoint_bimodule, trivial_bimodule
from leibcoh.constructors import (abelian, hemisemidirect, heisenberg3, richardson_leibniz, richardson_lie,
                                  sl2, sl2_irreducible, sl2_plus_sl2)
from leibcoh.linalg import dense_rank_oracle

ORACLE_PRIME = 1_000_000_007


def corpus():
    """Named Leibniz laws used across the suite."""
    return {
        "abelian(1)": abelian(1),
        "abelian(2)": abelian(2),
        "abelian(3)": abelian(3),
        "heisenberg3": heisenberg3(),
        "sl2": sl2(),
        "hemisemidirect(sl2,M1)": hemisemidirect(sl2(), sl2_irreducible(1)),
        "richardson_leibniz(1,1)": richardson_leibniz(1, 1),
        "richardson_leibniz(2,1)": richardson_leibniz(2, 1),
    }


def lie_corpus():
    return {
        "abelian(1)": abelian(1),
        "abelian(3)": abelian(3),
        "heisenberg3": heisenberg3(),
        "sl2": sl2(),
        "richardson_lie(1)": richardson_lie(1),
        "sl2_plus_sl2": sl2_plus_sl2(),
    }


@pytest.fixture(scope="session")
def laws():
    return corpus()


# -- oracle: coboundary rows from the formula ----------------------------------------

def _left(M, x, s, t):
    return M.left[x][s, t]


def _right(M, x, s, t):
    return M.right[x][s, t]


def oracle_coboundary_rows(law, M, n):
    """Rows of ``d: CL^n -> CL^{n+1}``, one per output label ``(X, s)``,
    as dicts keyed by input labels ``(args, t)``.

    (d phi)(x1..x_{n+1}) = [x1, phi(x2..)] + sum_{i>=2} (-1)^i [phi(..^i..), x_i]
                           + sum_{i<j} (-1)^(j+1) phi(.., [x_i, x_j] at i, ..^j..)
    """
    N, D = law.dim, M.dim_m
    rows = {}
    for X in itertools.product(range(N), repeat=n + 1):
        for s in range(D):
            row = {}

            def add(lab, v):
                if v:
                    row[lab] = row.get(lab, 0) + v

            for t in range(D):
                add((X[1:], t), _left(M, X[0], s, t))
            for i in range(2, n + 2):
                rest = X[:i - 1] + X[i:]
                for t in range(D):
                    add((rest, t), (-1) ** i * _right(M, X[i - 1], s, t))
            for i in range(1, n + 1):
                for j in range(i + 1, n + 2):
                    for k, c in law.bracket(X[i - 1], X[j - 1]).items():
                        Y = list(X)
                        Y[i - 1] = k
                        del Y[j - 1]
                        add((tuple(Y), s), (-1) ** (j + 1) * c)
            rows[(X, s)] = {k: v for k, v in row.items() if v}
    return rows


def cochain_labels(N, D, n):
    return [(args, t) for args in itertools.product(range(N), repeat=n) for t in range(D)]


def oracle_matrix(law, M, n):
    """Dense ``d^n`` with rows/cols in lexicographic label order."""
    rows = oracle_coboundary_rows(law, M, n)
    cols = {lab: j for j, lab in enumerate(cochain_labels(law.dim, M.dim_m, n))}
    out = []
    for lab in cochain_labels(law.dim, M.dim_m, n + 1):
        r = [0] * len(cols)
        for k, v in rows[lab].items():
            r[cols[k]] = v
        out.append(r)
    return out


def modp_rank(rows, p=ORACLE_PRIME):
    """Plain Gaussian elimination over F_p (rational entries reduced mod p)."""
    if not rows or not rows[0]:
        return 0
    a = np.array([[int(Fraction(x).numerator * pow(Fraction(x).denominator, -1, p) % p) for x in r] for r in rows],
                 dtype=object)
    a = a.astype(np.int64)
    nr, nc = a.shape
    r = 0
    for c in range(nc):
        piv = next((i for i in range(r, nr) if a[i, c] % p), None)
        if piv is None:
            continue
        a[[r, piv]] = a[[piv, r]]
        inv = pow(int(a[r, c]), -1, p)
        a[r] = (a[r] * inv) % p
        col = a[:, c].copy()
        col[r] = 0
        nz = np.nonzero(col)[0]
        if len(nz):
            a[nz] = (a[nz] - (col[nz, None] * a[r]) % p) % p
        r += 1
        if r == nr:
            break
    return r


def oracle_rank(rows):
    """Exact rank for small matrices, one large prime otherwise."""
    if not rows:
        return 0
    if len(rows) * len(rows[0]) <= 20000:
        return dense_rank_oracle(rows)
    t = [list(c) for c in zip(*rows)] if len(rows) > len(rows[0]) else rows
    return modp_rank(t)


def oracle_hl(law, M, top):
    """``dim HL^n`` for n = 0..top from the formula-level coboundary."""
    ranks = [oracle_rank(oracle_matrix(law, M, n)) for n in range(top + 1)]
    out = []
    for n in range(top + 1):
        dim = law.dim ** n * M.dim_m
        out.append(dim - ranks[n] - (ranks[n - 1] if n else 0))
    return out


def antisymmetrizer(N, D, n):
    """Columns: the antisymmetric cochain attached to each increasing tuple."""
    labels = {lab: j for j, lab in enumerate(cochain_labels(N, D, n))}
    cols = []
    for args in itertools.combinations(range(N), n):
        for t in range(D):
            col = [0] * len(labels)
            for perm in itertools.permutations(range(n)):
                sign = 1
                for a in range(n):
                    for b in range(a + 1, n):
                        if perm[a] > perm[b]:
                            sign = -sign
                col[labels[(tuple(args[p] for p in perm), t)]] += sign
            cols.append(col)
    return cols


def oracle_ce(law, M, top):
    """``dim H^n`` (Chevalley-Eilenberg) via the Loday formula on antisymmetrized cochains."""
    ranks = []
    for n in range(top + 1):
        d = oracle_matrix(law, M, n)
        A = antisymmetrizer(law.dim, M.dim_m, n)
        if not A:
            ranks.append(0)
            continue
        prod = [[sum(r[k] * c[k] for k in range(len(r)) if r[k]) for c in A] for r in d]
        ranks.append(oracle_rank(prod))
    out = []
    from math import comb
    for n in range(top + 1):
        dim = comb(law.dim, n) * M.dim_m
        out.append(dim - ranks[n] - (ranks[n - 1] if n else 0))
    return out


def trivial(law):
    return trivial_bimodule(law)


def adjoint(law):
    return adjoint_bimodule(law)


# -- acceptance reporting -------------------------------------------------------------

ACCEPTANCE_LINES: list[str] = []


def record_criterion(number, title, passed, seconds, detail=""):
    line = f"criterion {number:>2}: {'PASS' if passed else 'FAIL'}  {title}  ({seconds:.2f} s){'  ' + detail if detail else ''}"
    ACCEPTANCE_LINES.append(line)
    print(line)


class Timer:
    def __enter__(self):
        self.t0 = time.perf_counter()
        return self

    def __exit__(self, *exc):
        self.seconds = time.perf_counter() - self.t0
        return False


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split(":")[0].split()[1])):
            terminalreporter.write_line(line)
