"""Brute-force minimal integer cp-rank.

Iterative deepening over the number of terms.  Along a branch the terms are
kept lexicographically nonincreasing, so each multiset of terms is visited
once; intermediate remainders are sums of rank-one nonnegative terms and
therefore stay doubly nonnegative, which is what enumerate_reductions
enforces.  Search is exponential: keep entries in the low thousands.
"""

from __future__ import annotations

from collections import OrderedDict
from dataclasses import dataclass
from functools import lru_cache
from typing import Literal

from intcp.matrix_core import Factorization, RankOneTerm, SymMat2, require_dnn
from intcp.number_kernel import is_square, isqrt

__all__ = [
    "DEFAULT_DEPTH_CAP",
    "MinRankResult",
    "MinRankSearcher",
    "enumerate_reductions",
    "min_cp_rank",
    "min_squares",
]

DEFAULT_DEPTH_CAP = 12

Key = tuple[int, int, int]
Witness = tuple[tuple[int, int], ...]


@dataclass(frozen=True)
class MinRankResult:
    min_terms: int | None
    witness: Factorization | None
    nodes_explored: int
    status: Literal["exact", "depth-capped"]


@lru_cache(maxsize=1 << 16)
def min_squares(n: int) -> int:
    """Fewest squares summing to n (0 for n == 0)."""
    if n == 0:
        return 0
    if is_square(n):
        return 1
    m = n
    while m % 4 == 0:
        m //= 4
    if m % 8 == 7:
        return 4
    x = 1
    while 2 * x * x <= n:
        if is_square(n - x * x):
            return 2
        x += 1
    return 3


@lru_cache(maxsize=1 << 16)
def _reductions(a: int, b: int, c: int) -> tuple[tuple[int, int], ...]:
    out = []
    for k in range(isqrt(a), -1, -1):
        ak = a - k * k
        for t in range(isqrt(c), -1, -1):
            bk = b - k * t
            if bk < 0 or (k == 0 and t == 0):
                continue
            if ak * (c - t * t) >= bk * bk:
                out.append((k, t))
    return tuple(out)


def enumerate_reductions(m: SymMat2) -> list[RankOneTerm]:
    """Every nonzero (k, t) with m - (k, t)(k, t)^T doubly nonnegative, descending."""
    require_dnn(m)
    return [RankOneTerm(k, t) for k, t in _reductions(m.a, m.b, m.c)]


def _lower_bound(a: int, b: int, c: int) -> int:
    if a == 0 and c == 0:
        return 0
    lb = max(min_squares(a), min_squares(c))
    if a * c > b * b:
        lb = max(lb, 2)
    return lb


class MinRankSearcher:
    """Depth-limited canonical-order search with a bounded LRU memo.

    The memo maps (a, b, c, depth, bound) to the first witness found in
    descending candidate order (or None).  That answer depends only on the
    key, so sharing one searcher across many matrices keeps results
    deterministic.
    """

    def __init__(self, memo_size: int = 2_000_000, ordered: bool = True):
        self.memo_size = memo_size
        self.ordered = ordered
        self.nodes = 0
        self._memo: OrderedDict[tuple, Witness | None] = OrderedDict()

    def _remember(self, key: tuple, value: Witness | None) -> None:
        self._memo[key] = value
        if len(self._memo) > self.memo_size:
            self._memo.popitem(last=False)

    def search(self, m: Key, depth: int, bound: tuple[int, int] | None = None) -> Witness | None:
        """Factorization of m into at most ``depth`` terms, each <= bound, or None."""
        a, b, c = m
        if a == 0 and c == 0:
            return ()
        if depth == 0 or _lower_bound(a, b, c) > depth:
            return None
        if not self.ordered:
            bound = None
        elif bound is not None and a > depth * bound[0] ** 2:
            # every remaining term has k <= bound[0]
            return None
        key = (a, b, c, depth, bound)
        if key in self._memo:
            self._memo.move_to_end(key)
            return self._memo[key]
        self.nodes += 1
        found = None
        for k, t in _reductions(a, b, c):
            if bound is not None and (k, t) > bound:
                continue
            rest = self.search((a - k * k, b - k * t, c - t * t), depth - 1, (k, t))
            if rest is not None:
                found = ((k, t),) + rest
                break
        self._remember(key, found)
        return found

    def min_cp_rank(self, m: SymMat2, depth_cap: int = DEFAULT_DEPTH_CAP) -> MinRankResult:
        require_dnn(m)
        if depth_cap < 1:
            raise ValueError("depth_cap must be positive")
        start = self.nodes
        key = (m.a, m.b, m.c)
        for depth in range(0, depth_cap + 1):
            found = self.search(key, depth)
            if found is not None:
                witness = Factorization(m, tuple(RankOneTerm(k, t) for k, t in found), "oracle")
                return MinRankResult(len(found), witness, self.nodes - start, "exact")
        return MinRankResult(None, None, self.nodes - start, "depth-capped")


def min_cp_rank(
    m: SymMat2,
    depth_cap: int = DEFAULT_DEPTH_CAP,
    searcher: MinRankSearcher | None = None,
) -> MinRankResult:
    """Fewest nonnegative integer rank-one terms summing to m, up to depth_cap."""
    if searcher is None:
        searcher = MinRankSearcher()
    return searcher.min_cp_rank(m, depth_cap)
