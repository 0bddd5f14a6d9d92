"""Integer cp-factorizations of 2x2 doubly nonnegative matrices."""

from intcp.factorizer import factor, factor_rank_one, find_reduction, peel_diagonal
from intcp.matrix_core import (
    Factorization,
    NegativeEntryError,
    NotDoublyNonnegativeError,
    RankOneTerm,
    SymMat2,
    det2,
    is_doubly_nonnegative,
    subtract_term,
    verify_factorization,
)
from intcp.number_kernel import FourSquare, ceil_div, four_square, gcd3, isqrt
from intcp.oracle import MinRankResult, enumerate_reductions, min_cp_rank

__all__ = [
    "Factorization",
    "FourSquare",
    "MinRankResult",
    "NegativeEntryError",
    "NotDoublyNonnegativeError",
    "RankOneTerm",
    "SymMat2",
    "ceil_div",
    "det2",
    "enumerate_reductions",
    "factor",
    "factor_rank_one",
    "find_reduction",
    "four_square",
    "gcd3",
    "is_doubly_nonnegative",
    "isqrt",
    "min_cp_rank",
    "peel_diagonal",
    "subtract_term",
    "verify_factorization",
]
