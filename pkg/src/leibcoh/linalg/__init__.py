"""Exact rational linear algebra with a modular fast path."""

from .exact import Echelon, dense_rank_oracle, ff_rank, integral_vector, kernel_basis_exact, rref, solve_exact
from .modular import BACKEND, PRIMES, rank_mod_p
from .rank import EXACT_THRESHOLD, RankResult, blocks, kernel_basis, rank, solve
from .sparse import Rational, SparseMat, as_rational, norm_scalar

__all__ = [
    "BACKEND",
    "EXACT_THRESHOLD",
    "Echelon",
    "PRIMES",
    "RankResult",
    "Rational",
    "SparseMat",
    "as_rational",
    "blocks",
    "dense_rank_oracle",
    "ff_rank",
    "integral_vector",
    "kernel_basis",
    "kernel_basis_exact",
    "norm_scalar",
    "rank",
    "rank_mod_p",
    "rref",
    "solve",
    "solve_exact",
]
