import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from ramamoments import kernels
from ramamoments.arith import (
    build_sieves,
    divisors,
    euler_phi,
    factorize,
    lcm_tuple,
)
from ramamoments.errors import ArgumentError, ConfigurationError, RangeError


def trial_division(n):
    out, p = [], 2
    while n > 1:
        e = 0
        while n % p == 0:
            n //= p
            e += 1
        if e:
            out.append((p, e))
        p += 1
    return out


def brute_mobius(n):
    fac = trial_division(n)
    if any(e > 1 for _, e in fac):
        return 0
    return (-1) ** len(fac)


def test_limit_one():
    t = build_sieves(1)
    assert t.mobius[1] == 1
    assert t.mertens[1] == 1


def test_limit_ten():
    t = build_sieves(10)
    assert t.mertens[10] == -1
    assert t.mobius[8] == 0
    assert list(t.mobius[1:]) == [brute_mobius(n) for n in range(1, 11)]


def test_mobius_matches_brute_force(tables):
    assert [int(v) for v in tables.mobius[1:3001]] == [brute_mobius(n) for n in range(1, 3001)]


def test_mobius_divisor_sum(tables):
    for n in range(1, 2001):
        s = sum(int(tables.mobius[d]) for d in divisors(n))
        assert s == (1 if n == 1 else 0), n


def test_mertens_is_prefix_sum(tables):
    assert np.array_equal(tables.mertens, np.cumsum(tables.mobius.astype(np.int64)))


def test_smallest_prime_factor(tables):
    spf = tables.smallest_prime_factor
    for n in range(2, 5000):
        assert spf[n] == trial_division(n)[0][0]


def test_tables_are_read_only(tables):
    with pytest.raises(ValueError):
        tables.mobius[1] = 0


@pytest.mark.parametrize("limit", [0, -3])
def test_bad_limit(limit):
    with pytest.raises(ConfigurationError):
        build_sieves(limit)


def test_memory_ceiling():
    with pytest.raises(ConfigurationError):
        build_sieves(10**6, max_memory=1000)


@pytest.mark.parametrize(
    "n, expected",
    [(1, ()), (12, ((2, 2), (3, 1))), (97, ((97, 1),))],
)
def test_factorize_examples(n, expected, tables):
    assert factorize(n, tables).factors == expected
    assert factorize(n).factors == expected


def test_factorize_round_trip(tables):
    for n in range(1, 10_001):
        fac = factorize(n, tables)
        assert math.prod(p**e for p, e in fac.factors) == n
        assert list(fac.factors) == trial_division(n)


def test_factorize_range(tables):
    with pytest.raises(RangeError):
        factorize(tables.limit + 1, tables)


@pytest.mark.parametrize("n, expected", [(1, [1]), (6, [1, 2, 3, 6]), (16, [1, 2, 4, 8, 16])])
def test_divisors_examples(n, expected):
    assert divisors(n) == expected


def test_divisors_enumeration_oracle(tables):
    for n in range(1, 600):
        assert divisors(n, tables) == [d for d in range(1, n + 1) if n % d == 0]


@pytest.mark.parametrize("d, expected", [((1, 1, 1), 1), ((4, 6), 12), ((2, 3, 5), 30)])
def test_lcm_examples(d, expected):
    assert lcm_tuple(d) == expected


def test_lcm_gcd_product():
    for a in range(1, 501):
        for b in range(1, 501, 7):
            assert lcm_tuple((a, b)) * math.gcd(a, b) == a * b


def test_lcm_empty():
    with pytest.raises(ArgumentError):
        lcm_tuple(())


@given(st.lists(st.integers(1, 10**6), min_size=1, max_size=5))
def test_lcm_minimal(d):
    m = lcm_tuple(d)
    assert all(m % v == 0 for v in d)
    # any common multiple is a multiple of the lcm
    assert math.prod(d) % m == 0


def test_euler_phi(tables):
    for n in range(1, 300):
        assert euler_phi(n, tables) == sum(1 for j in range(1, n + 1) if math.gcd(j, n) == 1)


@pytest.mark.parametrize("limit", [1, 2, 3, 30, 1000, 65_537])
def test_sieve_backends_agree(limit):
    spf_a, mu_a = kernels.sieve_nb(limit)
    spf_b, mu_b = kernels.sieve_np(limit)
    assert np.array_equal(spf_a, spf_b)
    assert np.array_equal(mu_a, mu_b)
