import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import EXAMPLE, PAPER_10_TERMS, all_dnn, multiset
from intcp.factorizer import (
    PeelResult,
    RankOneEvent,
    ReductionStep,
    TraceLog,
    factor,
    factor_rank_one,
    find_reduction,
    peel_diagonal,
)
from intcp.matrix_core import (
    NotDoublyNonnegativeError,
    RankOneTerm,
    SymMat2,
    det2,
    is_doubly_nonnegative,
    subtract_term,
    sum_terms,
    verify_factorization,
)
from intcp.number_kernel import four_square, gcd3


def pairs(ts):
    return [(r.k, r.t) for r in ts]


def random_dnn(rng, hi):
    while True:
        a, b, c = rng.randint(0, hi), rng.randint(0, hi), rng.randint(0, hi)
        if a * c >= b * b:
            return SymMat2(a, b, c)


# --- peel_diagonal ---

@pytest.mark.parametrize(
    "m, peeled, remainder",
    [
        (EXAMPLE, [(0, 59), (0, 2), (0, 1), (0, 1)], SymMat2(78, 200, 513)),
        (SymMat2(15, 4, 2), [(2, 0), (1, 0), (1, 0), (1, 0)], SymMat2(8, 4, 2)),
        (SymMat2(1, 1, 1), [], SymMat2(1, 1, 1)),
    ],
)
def test_peel_examples(m, peeled, remainder):
    p = peel_diagonal(m)
    assert pairs(p.peeled_terms) == peeled
    assert p.remainder == remainder


def test_peel_diagonal_matrix_goes_to_zero():
    p = peel_diagonal(SymMat2(5, 0, 3))
    # larger entry first: 5 = 2^2 + 1^2 on the a axis, then 3 = 1 + 1 + 1 on c
    assert pairs(p.peeled_terms) == [(2, 0), (1, 0), (0, 1), (0, 1), (0, 1)]
    assert p.remainder.is_zero()


def test_peel_tie_processes_c_first():
    p = peel_diagonal(SymMat2(10, 7, 10))
    assert p.remainder == SymMat2(10, 7, 5)
    assert pairs(p.peeled_terms) == [(0, 2), (0, 1)]


def test_peel_invariants_exhaustive():
    for m in all_dnn(25):
        p = peel_diagonal(m)
        rem = p.remainder
        assert rem + sum_terms(p.peeled_terms) == m
        assert det2(rem) >= 0
        if rem.b:
            # no further unit decrement of either diagonal keeps det >= 0
            assert (rem.a - 1) * rem.c < rem.b ** 2
            assert rem.a * (rem.c - 1) < rem.b ** 2
        else:
            assert rem.is_zero()


def test_peel_requires_dnn():
    with pytest.raises(NotDoublyNonnegativeError):
        peel_diagonal(SymMat2(1, 2, 1))


# --- factor_rank_one ---

@pytest.mark.parametrize(
    "m, expected",
    [
        (SymMat2(8, 4, 2), [(2, 1), (2, 1)]),
        (SymMat2(28, 70, 175), [(4, 10), (2, 5), (2, 5), (2, 5)]),
        (SymMat2(0, 0, 0), []),
        (SymMat2(0, 0, 7), [(0, 2), (0, 1), (0, 1), (0, 1)]),
        (SymMat2(9, 0, 0), [(3, 0)]),
    ],
)
def test_factor_rank_one_examples(m, expected):
    f = factor_rank_one(m)
    assert pairs(f.terms) == expected
    assert verify_factorization(f)


def test_factor_rank_one_rejects_full_rank():
    with pytest.raises(ValueError):
        factor_rank_one(SymMat2(2, 1, 2))


def test_factor_rank_one_term_count_matches_gcd():
    for x in range(0, 15):
        for y in range(0, 15):
            for d in range(1, 12):
                m = SymMat2(d * x * x, d * x * y, d * y * y)
                f = factor_rank_one(m)
                assert verify_factorization(f)
                assert len(f) <= 4
                if m.b:
                    assert len(f) == len(four_square(gcd3(m.a, m.b, m.c)).nonzero())


# --- find_reduction ---

@pytest.mark.parametrize(
    "m, expected",
    [
        (SymMat2(78, 200, 513), (5, 13)),
        (SymMat2(78, 44, 25), (5, 3)),
        (SymMat2(15, 19, 25), (2, 3)),
        (SymMat2(15, 4, 2), (2, 1)),
        (SymMat2(1, 3, 10), (1, 3)),
    ],
)
def test_find_reduction_examples(m, expected):
    assert tuple(find_reduction(m)) == expected


def test_find_reduction_is_valid_everywhere():
    for m in all_dnn(30):
        if m.is_zero():
            continue
        r = find_reduction(m)
        assert not r.is_zero()
        assert is_doubly_nonnegative(subtract_term(m, r)), m


def test_find_reduction_diagonal_input():
    # b == 0 peels to zero; the leading peeled term is the reduction
    log = TraceLog()
    assert find_reduction(SymMat2(5, 0, 3), log) == RankOneTerm(2, 0)
    assert [s.kind for s in log.reduction_steps()] == ["axis"]


def test_find_reduction_rejects_zero():
    with pytest.raises(ValueError):
        find_reduction(SymMat2(0, 0, 0))


def test_reduction_trace_identities():
    for m in all_dnn(30):
        if m.is_zero():
            continue
        log = TraceLog()
        find_reduction(m, log)
        steps = log.reduction_steps()
        assert [s.depth for s in steps] == list(range(len(steps)))
        for parent, child in zip(steps, steps[1:]):
            expected_input = parent.child.transpose() if parent.swapped else parent.child
            assert child.input == expected_input
            assert parent.child_term == (child.lifted.swapped() if parent.swapped else child.lifted)
        for s in steps:
            n = s.normalized
            assert n.a <= n.c
            if s.kind != "reduce":
                continue
            assert 2 <= n.a <= n.b <= n.c
            assert n.b == s.q * n.a + s.r and 0 <= s.r < n.a
            assert s.r ** 2 == s.alpha * n.a + s.gamma and 0 <= s.gamma < n.a
            assert s.child == SymMat2(n.a, s.r, s.alpha + 1)
            assert n.c == s.q ** 2 * n.a + 2 * s.q * s.r + s.alpha + 1
            assert det2(s.child) == det2(n)
            lifted = s.lifted_normalized()
            assert lifted == RankOneTerm(s.child_term.k, s.q * s.child_term.k + s.child_term.t)
            assert det2(subtract_term(n, lifted)) == det2(subtract_term(s.child, s.child_term))
            # the descent shrinks a + b + c
            assert sum((s.child.a, s.child.b, s.child.c)) < sum((n.a, n.b, n.c))


# --- factor ---

def test_factor_example_terms():
    f = factor(EXAMPLE)
    assert multiset(f.terms) == multiset(RankOneTerm(*p) for p in PAPER_10_TERMS)
    assert len(f) == 10


@pytest.mark.parametrize(
    "m, expected",
    [(SymMat2(1, 2, 5), [(1, 2), (0, 1)]), (SymMat2(0, 0, 0), []), (SymMat2(1, 1, 1), [(1, 1)])],
)
def test_factor_small(m, expected):
    f = factor(m)
    assert sorted(pairs(f.terms)) == sorted(expected)
    assert verify_factorization(f)


def test_factor_rejects_non_dnn():
    with pytest.raises(NotDoublyNonnegativeError, match="negative determinant"):
        factor(SymMat2(1, 2, 1))
    with pytest.raises(NotDoublyNonnegativeError, match="negative entry"):
        factor(SymMat2(1, -1, 4))


def test_factor_random_soundness():
    rng = random.Random(20240601)
    for _ in range(2000):
        m = random_dnn(rng, 500)
        f = factor(m)
        assert verify_factorization(f)
        assert all(not r.is_zero() for r in f.terms)


def test_factor_is_transpose_covariant():
    for m in all_dnn(25):
        if m.a == m.c:
            continue
        f, g = factor(m), factor(m.transpose())
        assert multiset(f.terms) == multiset(r.swapped() for r in g.terms)


def test_factor_huge_entries():
    m = SymMat2(10**20 + 3, 10**20, 10**20 + 5)
    assert verify_factorization(factor(m))


def test_trace_replay_reproduces_terms():
    rng = random.Random(7)
    for _ in range(300):
        m = random_dnn(rng, 300)
        f = factor(m, trace=True)
        assert f.trace.emitted_terms() == list(f.terms)
        # every top-level event leaves a doubly nonnegative remainder
        cur = m
        for r in f.trace.emitted_terms():
            cur = subtract_term(cur, r)
            assert is_doubly_nonnegative(cur)
        assert cur.is_zero()


def test_trace_structure_on_example():
    f = factor(EXAMPLE, trace=True)
    kinds = [type(e) for e in f.trace.events]
    assert kinds[0] is PeelResult and kinds[-1] is RankOneEvent
    assert ReductionStep in kinds
    lines = f.trace.render()
    assert lines[0].startswith("peel [[78, 200], [200, 4000]] -> [[78, 200], [200, 513]]")
    assert "R=(5, 13)" in lines[1]


@given(st.lists(st.tuples(st.integers(0, 10**6), st.integers(0, 10**6)), max_size=6),
       st.integers(0, 10**9), st.integers(0, 10**9))
def test_factor_sound_on_sums_of_terms(pairs_, extra_a, extra_c):
    m = sum_terms(RankOneTerm(k, t) for k, t in pairs_) + SymMat2(extra_a, 0, extra_c)
    f = factor(m)
    assert verify_factorization(f)
    assert all(not r.is_zero() for r in f.terms)
