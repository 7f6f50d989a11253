import math

import pytest
from hypothesis import given, strategies as st

from regover.arith import (
    divisor_stats,
    divisors,
    factorize,
    index_gamma0,
    inv_mod,
    is_prime,
    is_qnr,
    is_squarefree,
    squares_mod,
    tau,
)
from regover.errors import NotInvertible


@pytest.mark.parametrize(
    "n, l, mu, expected",
    [
        (6, 2, 3, (4, 2, 2, 1, 1)),
        (1, 2, 3, (1, 0, 0, 0, 1)),
        (1, 7, 11, (1, 0, 0, 0, 1)),
        (4, 4, 3, (3, 1, 0, 0, 2)),
    ],
)
def test_divisor_stats_examples(n, l, mu, expected):
    s = divisor_stats(n, l, mu)
    assert (s.tau, s.m_ell, s.m_mu, s.m_ellmu, s.delta) == expected


def test_multiples_match_direct_count():
    for l, mu in [(2, 3), (4, 9), (3, 5), (4, 3)]:
        for n in range(1, 10_001):
            ds = [d for d in divisors(n)]
            s = divisor_stats(n, l, mu)
            assert s.tau == len(ds)
            assert s.m_ell == sum(d % l == 0 for d in ds)
            assert s.m_mu == sum(d % mu == 0 for d in ds)
            assert s.m_ellmu == sum(d % (l * mu) == 0 for d in ds)
            if n % l == 0:
                assert s.m_ell == tau(n // l)


def test_divisor_stats_rejects_common_factor():
    with pytest.raises(ValueError):
        divisor_stats(12, 2, 4)


@pytest.mark.parametrize("m, expected", [(9, {1, 4, 7}), (1, {0}), (8, {1}), (24, {1})])
def test_squares_mod(m, expected):
    assert squares_mod(m) == expected


@pytest.mark.parametrize("m", range(1, 101))
def test_squares_mod_closed_under_multiplication(m):
    sq = squares_mod(m)
    assert all(a * b % m in sq for a in sq for b in sq)


@pytest.mark.parametrize("a, m, expected", [(3, 5, 2), (1, 7, 1), (1, 13, 1), (3, 7, 5), (-1, 10, 9)])
def test_inv_mod(a, m, expected):
    assert inv_mod(a, m) == expected


def test_inv_mod_not_invertible():
    with pytest.raises(NotInvertible):
        inv_mod(6, 9)


@pytest.mark.parametrize("a, p, expected", [(2, 5, True), (3, 5, True), (4, 5, False), (1, 5, False), (0, 5, False), (10, 5, False)])
def test_is_qnr(a, p, expected):
    assert is_qnr(a, p) is expected


@pytest.mark.parametrize("p", [5, 7, 11, 13, 101])
def test_is_qnr_matches_table(p):
    squares = {x * x % p for x in range(1, p)}
    for a in range(p):
        assert is_qnr(a, p) == (a != 0 and a not in squares)


@pytest.mark.parametrize("N, expected", [(1, 1), (30, 72), (12, 24), (60, 144), (2, 3), (9, 12)])
def test_index_gamma0(N, expected):
    assert index_gamma0(N) == expected


@given(st.integers(1, 5000))
def test_factorize_roundtrip(n):
    f = factorize(n)
    assert math.prod(p**e for p, e in f.items()) == n
    assert all(is_prime(p) for p in f)


def test_squarefree():
    assert is_squarefree(30) and not is_squarefree(60) and is_squarefree(1)
    assert [p for p in range(30) if is_prime(p)] == [2, 3, 5, 7, 11, 13, 17, 19, 23, 29]
