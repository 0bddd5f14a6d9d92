from collections import Counter

import pytest

from intcp.matrix_core import RankOneTerm, SymMat2

EXAMPLE = SymMat2(78, 200, 4000)

# decompositions printed for the worked example
PAPER_10_TERMS = [(0, 59), (0, 2), (0, 1), (0, 1), (2, 5), (2, 5), (2, 5), (4, 10), (5, 13), (5, 13)]
PAPER_8_TERMS = [(8, 25), (0, 58), (0, 3), (0, 1), (0, 1), (3, 0), (2, 0), (1, 0)]


def terms(pairs):
    return tuple(RankOneTerm(k, t) for k, t in pairs)


def multiset(ts):
    return Counter((r.k, r.t) for r in ts)


def all_dnn(max_c, max_a=None):
    """Every doubly nonnegative (a, b, c) with a <= c <= max_c, by plain filtering."""
    for a in range(max_c + 1):
        for c in range(a, max_c + 1):
            for b in range(max_c + 1):
                if a * c >= b * b:
                    yield SymMat2(a, b, c)


@pytest.fixture
def example():
    return EXAMPLE
