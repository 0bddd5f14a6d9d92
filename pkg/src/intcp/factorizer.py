"""Constructive integer cp-factorization of 2x2 doubly nonnegative matrices.

The top-level loop alternates three moves until nothing is left:

* peel: lower each diagonal entry as far as the determinant allows and write
  the excess as a sum of at most four squares (axis-aligned terms);
* rank-one: once the determinant is zero, split off d (a1, c1)(a1, c1)^T with
  d written as four squares;
* reduce: otherwise find a rank-one term R with A - R still doubly
  nonnegative.  With a <= b <= c, b = q a + r and r^2 = alpha a + gamma, a
  reduction (k, t') of the smaller matrix [[a, r], [r, alpha + 1]] lifts to
  the reduction (k, q k + t') of A.  The smaller matrix has the same
  determinant, so the descent ends at a unit diagonal or a rank-one matrix.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Literal, Union

from intcp.matrix_core import (
    Factorization,
    RankOneTerm,
    SymMat2,
    det2,
    is_doubly_nonnegative,
    require_dnn,
    subtract_term,
)
from intcp.number_kernel import ceil_div, four_square, gcd3, is_square, isqrt

__all__ = [
    "PeelResult",
    "RankOneEvent",
    "ReductionStep",
    "TraceLog",
    "factor",
    "factor_rank_one",
    "find_reduction",
    "peel_diagonal",
]

StepKind = Literal["reduce", "rank-one", "unit-diagonal", "axis"]


@dataclass(frozen=True)
class PeelResult:
    input: SymMat2
    peeled_terms: tuple[RankOneTerm, ...]
    remainder: SymMat2


@dataclass(frozen=True)
class RankOneEvent:
    input: SymMat2
    terms: tuple[RankOneTerm, ...]


@dataclass(frozen=True)
class ReductionStep:
    """One level of the reduction descent.

    ``normalized`` is the input after peeling and (if ``swapped``) exchanging
    the diagonal, so that a <= c.  ``q``, ``r``, ``alpha``, ``gamma``,
    ``child`` and ``child_term`` live in that normalized frame and are only set
    for ``kind == "reduce"``; ``lifted`` is expressed in the frame of ``input``.
    """

    depth: int
    kind: StepKind
    input: SymMat2
    swapped: bool
    peel_a: int
    peel_c: int
    normalized: SymMat2
    lifted: RankOneTerm
    q: int | None = None
    r: int | None = None
    alpha: int | None = None
    gamma: int | None = None
    child: SymMat2 | None = None
    child_term: RankOneTerm | None = None

    def lifted_normalized(self) -> RankOneTerm:
        return self.lifted.swapped() if self.swapped else self.lifted

    def render(self) -> str:
        pad = "  " * self.depth
        head = f"{pad}{self.kind} {self.input}"
        if self.peel_a or self.peel_c:
            head += f" peel(a-{self.peel_a}, c-{self.peel_c})"
        if self.swapped:
            head += " swap"
        if self.kind == "reduce":
            head += (
                f" b={self.q}*{self.normalized.a}+{self.r}"
                f" r^2={self.alpha}*{self.normalized.a}+{self.gamma}"
                f" B={self.child} R'={self.child_term}"
            )
        return f"{head} -> R={self.lifted}"


TraceEvent = Union[PeelResult, ReductionStep, RankOneEvent]


@dataclass
class TraceLog:
    events: list[TraceEvent] = field(default_factory=list)

    def reduction_steps(self) -> list[ReductionStep]:
        return [e for e in self.events if isinstance(e, ReductionStep)]

    def emitted_terms(self) -> list[RankOneTerm]:
        """Replay the log: the terms the top-level loop emitted, in order."""
        out: list[RankOneTerm] = []
        for e in self.events:
            if isinstance(e, PeelResult):
                out.extend(e.peeled_terms)
            elif isinstance(e, RankOneEvent):
                out.extend(e.terms)
            elif e.depth == 0:
                out.append(e.lifted)
        return out

    def render(self) -> list[str]:
        lines = []
        for e in self.events:
            if isinstance(e, PeelResult):
                terms = " ".join(map(str, e.peeled_terms))
                lines.append(f"peel {e.input} -> {e.remainder} + {terms}")
            elif isinstance(e, RankOneEvent):
                terms = " ".join(map(str, e.terms))
                lines.append(f"rank-one {e.input} = {terms}")
            else:
                lines.append(e.render())
        return lines


def _axis_terms(n: int, axis: str) -> list[RankOneTerm]:
    ds = four_square(n).nonzero()
    if axis == "a":
        return [RankOneTerm(d, 0) for d in ds]
    return [RankOneTerm(0, d) for d in ds]


def _peeled_diagonal(m: SymMat2) -> tuple[int, int]:
    """Lowest diagonal values keeping det >= 0; the larger entry goes first, ties c first."""
    if m.b == 0:
        return 0, 0
    bb = m.b * m.b
    if m.a > m.c:
        a = ceil_div(bb, m.c)
        c = ceil_div(bb, a)
    else:
        c = ceil_div(bb, m.a)
        a = ceil_div(bb, c)
    return a, c


def peel_diagonal(m: SymMat2) -> PeelResult:
    require_dnn(m)
    a, c = _peeled_diagonal(m)
    first, second = (("a", m.a - a), ("c", m.c - c))
    if m.a <= m.c:
        first, second = second, first
    terms: list[RankOneTerm] = []
    for axis, excess in (first, second):
        if excess:
            terms.extend(_axis_terms(excess, axis))
    return PeelResult(m, tuple(terms), SymMat2(a, m.b, c))


def factor_rank_one(m: SymMat2) -> Factorization:
    """At most four terms for a doubly nonnegative matrix of determinant zero."""
    require_dnn(m)
    if det2(m) != 0:
        raise ValueError(f"{m.text()} does not have rank at most one (det = {det2(m)})")
    if m.b == 0:
        # det 0 and b 0: at most one diagonal entry is nonzero
        terms = _axis_terms(m.a, "a") + _axis_terms(m.c, "c")
        return Factorization(m, tuple(terms))
    d = gcd3(m.a, m.b, m.c)
    a0, c0 = m.a // d, m.c // d
    if not (is_square(a0) and is_square(c0)):
        raise AssertionError(f"{m.text()}: a/d and c/d must be perfect squares")
    a1, c1 = isqrt(a0), isqrt(c0)
    if a1 * c1 * d != m.b:
        raise AssertionError(f"{m.text()}: b/d must equal sqrt(a/d) sqrt(c/d)")
    ds = four_square(d).nonzero()
    return Factorization(m, tuple(RankOneTerm(x * a1, x * c1) for x in ds))


@dataclass
class _Level:
    input: SymMat2
    swapped: bool
    peel_a: int
    peel_c: int
    normalized: SymMat2
    q: int = 0
    r: int = 0
    alpha: int = 0
    gamma: int = 0
    child: SymMat2 | None = None


def _descend(m: SymMat2) -> tuple[list[_Level], StepKind, RankOneTerm]:
    """Walk down to a base case; return the levels and the base reduction (in the last input's frame)."""
    levels: list[_Level] = []
    cur = m
    while True:
        a, c = _peeled_diagonal(cur)
        norm = SymMat2(a, cur.b, c)
        swapped = norm.a > norm.c
        if swapped:
            norm = norm.transpose()
        lvl = _Level(cur, swapped, cur.a - a, cur.c - c, norm)
        levels.append(lvl)

        if norm.is_zero():
            # b == 0: take the leading term of the peel of cur itself
            return levels, "axis", peel_diagonal(cur).peeled_terms[0]
        if det2(norm) == 0:
            base = factor_rank_one(norm).terms[0]
            return levels, "rank-one", base.swapped() if swapped else base
        if norm.a == 1:
            base = RankOneTerm(1, norm.b)
            return levels, "unit-diagonal", base.swapped() if swapped else base

        a, b, c = norm.a, norm.b, norm.c
        assert 2 <= a <= b <= c, f"ordering a <= b <= c violated at {norm}"
        q, r = divmod(b, a)
        alpha, gamma = divmod(r * r, a)
        child = SymMat2(a, r, alpha + 1)
        assert c == q * q * a + 2 * q * r + alpha + 1, f"c identity failed at {norm}"
        assert det2(child) == det2(norm), f"determinant not preserved at {norm}"
        lvl.q, lvl.r, lvl.alpha, lvl.gamma, lvl.child = q, r, alpha, gamma, child
        # hand the child down in the caller's orientation
        cur = child.transpose() if swapped else child


def find_reduction(m: SymMat2, trace: TraceLog | None = None) -> RankOneTerm:
    """A nonzero term R such that m - R R^T is doubly nonnegative."""
    require_dnn(m)
    if m.is_zero():
        raise ValueError("the zero matrix has no reduction")
    levels, kind, term = _descend(m)

    steps: list[ReductionStep] = []
    last = levels[-1]
    steps.append(
        ReductionStep(len(levels) - 1, kind, last.input, last.swapped, last.peel_a,
                      last.peel_c, last.normalized, term)
    )
    for depth in range(len(levels) - 2, -1, -1):
        lvl = levels[depth]
        child_term = term.swapped() if lvl.swapped else term
        k, t = child_term
        lifted_norm = RankOneTerm(k, lvl.q * k + t)
        assert det2(subtract_term(lvl.normalized, lifted_norm)) == det2(
            subtract_term(lvl.child, child_term)
        ), f"lift determinant identity failed at {lvl.normalized}"
        term = lifted_norm.swapped() if lvl.swapped else lifted_norm
        steps.append(
            ReductionStep(depth, "reduce", lvl.input, lvl.swapped, lvl.peel_a, lvl.peel_c,
                          lvl.normalized, term, lvl.q, lvl.r, lvl.alpha, lvl.gamma,
                          lvl.child, child_term)
        )

    assert is_doubly_nonnegative(subtract_term(m, term)), f"{term} does not reduce {m}"
    if trace is not None:
        trace.events.extend(reversed(steps))
    return term


def factor(m: SymMat2, trace: bool = False) -> Factorization:
    """Integer cp-factorization of a doubly nonnegative matrix.

    With ``trace=True`` the returned factorization carries a TraceLog of every
    peel, reduction level and rank-one split in the order they happened.
    """
    require_dnn(m)
    log = TraceLog() if trace else None
    terms: list[RankOneTerm] = []
    cur = m
    while True:
        peel = peel_diagonal(cur)
        if peel.peeled_terms:
            terms.extend(peel.peeled_terms)
            if log is not None:
                log.events.append(peel)
        cur = peel.remainder
        if cur.is_zero():
            break
        if det2(cur) == 0:
            split = factor_rank_one(cur).terms
            terms.extend(split)
            if log is not None:
                log.events.append(RankOneEvent(cur, split))
            break
        r = find_reduction(cur, log)
        terms.append(r)
        cur = subtract_term(cur, r)
    return Factorization(m, tuple(terms), "paper-algorithm", log)
