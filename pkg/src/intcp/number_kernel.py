"""Exact nonnegative-integer primitives.

Everything here works on Python ints, so there is no overflow to worry about.
"""

from __future__ import annotations

import math
from typing import NamedTuple

__all__ = ["FourSquare", "ceil_div", "four_square", "gcd3", "is_square", "isqrt"]


class FourSquare(NamedTuple):
    """Nonincreasing quadruple with d1^2 + d2^2 + d3^2 + d4^2 == n."""

    d1: int
    d2: int
    d3: int
    d4: int

    def total(self) -> int:
        return sum(d * d for d in self)

    def nonzero(self) -> tuple[int, ...]:
        return tuple(d for d in self if d)


def isqrt(n: int) -> int:
    if n < 0:
        raise ValueError(f"isqrt of negative number {n}")
    return math.isqrt(n)


def is_square(n: int) -> bool:
    if n < 0:
        return False
    r = math.isqrt(n)
    return r * r == n


def gcd3(a: int, b: int, c: int) -> int:
    """gcd of three integers; gcd3(0, 0, 0) == 0."""
    return math.gcd(a, b, c)


def ceil_div(num: int, den: int) -> int:
    if den <= 0:
        raise ValueError(f"ceil_div needs a positive denominator, got {den}")
    if num < 0:
        raise ValueError(f"ceil_div needs a nonnegative numerator, got {num}")
    return -(-num // den)


def _three_squares_possible(n: int) -> bool:
    # Legendre: n is a sum of three squares iff n != 4^e (8m + 7)
    if n == 0:
        return True
    while n % 4 == 0:
        n //= 4
    return n % 8 != 7


def four_square(n: int) -> FourSquare:
    """Lexicographically greatest nonincreasing four-square representation of n.

    Descends d1, then d2, then d3 from their largest admissible values and
    takes the first hit; pure greedy is not enough (23 = 9 + 9 + 4 + 1, but
    23 - 16 = 7 is not a sum of three squares).
    """
    if n < 0:
        raise ValueError(f"four_square of negative number {n}")
    for d1 in range(math.isqrt(n), -1, -1):
        r1 = n - d1 * d1
        if r1 > 3 * d1 * d1:
            # the remaining three squares cannot each stay <= d1^2
            break
        if not _three_squares_possible(r1):
            continue
        for d2 in range(min(d1, math.isqrt(r1)), -1, -1):
            r2 = r1 - d2 * d2
            if r2 > 2 * d2 * d2:
                break
            for d3 in range(min(d2, math.isqrt(r2)), -1, -1):
                r3 = r2 - d3 * d3
                if r3 > d3 * d3:
                    break
                d4 = math.isqrt(r3)
                if d4 * d4 == r3:
                    return FourSquare(d1, d2, d3, d4)
    raise AssertionError(f"no four-square representation found for {n}")
