import itertools
import math
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from ramamoments import kernels, multivar
from ramamoments.errors import ArgumentError, ResourceError
from ramamoments.multivar import (
    ExponentTuple,
    f_direct,
    f_multiplicative,
    f_prime_power,
    g_value,
    tied_max_closed_form,
)

PRIMES = (2, 3, 5, 7)


def fraction_closed_form(p, v):
    """The tied-maximum formula written out over the rationals."""
    v = sorted(v, reverse=True)
    k = len(v)
    ell = v.count(v[0])
    s_rest = sum(v[1:])
    r = 1 - Fraction(1, p)
    val = Fraction(p) ** s_rest * r**k + (-1) ** ell * r ** (k - ell) * (
        Fraction(p) ** (s_rest + 1 - ell) - Fraction(p) ** (s_rest - ell)
    )
    return val


@pytest.mark.parametrize("d, beta, expected", [((1, 1, 1), 1, 1), ((1, 1), 4, 1), ((2, 3), 1, 1), ((2, 2), 3, 8)])
def test_g_examples(d, beta, expected):
    assert g_value(d, beta) == expected


@pytest.mark.parametrize(
    "n, expected", [((1, 1, 1), 1), ((2, 2), 1), ((2, 2, 2), 0), ((4, 2), 0)]
)
def test_f_direct_examples(n, expected):
    assert f_direct(n) == expected


def test_prime_power_examples():
    for p in (2, 3, 5, 11, 101):
        assert f_prime_power((1, 1), p) == p - 1
        assert f_prime_power((2, 1), p) == 0
    assert f_prime_power((1, 1, 1), 2) == 0
    assert f_prime_power((1, 1, 1), 3) == 2


def test_prime_power_rejects_composite():
    with pytest.raises(ArgumentError):
        f_prime_power((1, 1), 4)


@pytest.mark.parametrize("n, expected", [((6, 6), 2), ((2, 3), 0), ((1, 1), 1)])
def test_f_multiplicative_examples(n, expected, tables):
    assert f_multiplicative(n, 1, tables) == expected


def test_closed_form_matches_rational_formula():
    for p in PRIMES + (11, 13):
        for k in range(1, 6):
            for v in itertools.product(range(1, 5), repeat=k):
                shape = sorted(v, reverse=True)
                ell = shape.count(shape[0])
                got = tied_max_closed_form(p, k, ell, sum(shape) - shape[0])
                assert got == fraction_closed_form(p, v), (p, v)


def test_numba_local_matches_python():
    for p in PRIMES:
        for k in range(1, 5):
            for ell in range(1, k + 1):
                for rest in range(k - 1, k + 6):
                    assert kernels.tied_max_local_nb(p, k, ell, rest) == tied_max_closed_form(p, k, ell, rest)


def test_closed_form_vs_direct_prime_powers():
    for p in PRIMES:
        for k in range(1, 5):
            for exps in itertools.product(range(5), repeat=k):
                n = tuple(p**e for e in exps)
                assert f_prime_power(exps, p) == f_direct(n), (p, exps)


@pytest.mark.parametrize("beta", [2, 3])
def test_lattice_local_vs_direct(beta):
    for p in (2, 3, 5):
        for k in range(1, 4):
            for exps in itertools.product(range(4), repeat=k):
                n = tuple(p**e for e in exps)
                assert f_prime_power(exps, p, beta) == f_direct(n, beta), (p, exps, beta)


def test_multiplicative_vs_direct_random(tables):
    rng = random.Random(7)
    for _ in range(1000):
        k = rng.randint(1, 4)
        n = tuple(rng.randint(1, 120) for _ in range(k))
        beta = rng.choice((1, 1, 2))
        assert f_multiplicative(n, beta, tables) == f_direct(n, beta, tables), n


def test_nonnegative_small_box(tables):
    for n in itertools.product(range(1, 25), repeat=3):
        assert f_multiplicative(n, 1, tables) >= 0


@settings(max_examples=200, deadline=None)
@given(st.lists(st.integers(1, 400), min_size=1, max_size=5), st.randoms(use_true_random=False))
def test_symmetry(values, rnd):
    perm = list(values)
    rnd.shuffle(perm)
    assert f_multiplicative(values) == f_multiplicative(perm)


@settings(max_examples=200, deadline=None)
@given(st.lists(st.integers(1, 10**6), min_size=1, max_size=4))
def test_nonnegative_property(values):
    assert f_multiplicative(values) >= 0


def test_dimension_reduction(tables):
    for k in range(2, 5):
        rng = range(1, 31) if k < 4 else range(1, 31, 3)
        for n in itertools.product(rng, repeat=k - 1):
            assert f_multiplicative(n + (1,), 1, tables) == f_multiplicative(n, 1, tables)
    for n in itertools.product(range(1, 13), repeat=2):
        assert f_direct(n + (1,)) == f_direct(n)


def test_k1_degeneracy(tables):
    for n in range(1, 101):
        expected = 1 if n == 1 else 0
        assert f_multiplicative((n,), 1, tables) == expected
        assert f_direct((n,)) == expected


def test_beta_scaling():
    for p in (2, 3, 5):
        for beta in (1, 2, 3):
            assert f_multiplicative((p, p), beta) == p**beta - 1
            assert f_direct((p, p), beta) == p**beta - 1


def test_direct_budget():
    with pytest.raises(ResourceError):
        f_direct((720720, 720720), budget=100)


def test_exponent_tuple_normalized():
    assert ExponentTuple((0, 2, 3, 0, 2)).normalized() == (3, 2, 2)
    assert ExponentTuple((0, 0)).normalized() == ()
    with pytest.raises(ArgumentError):
        ExponentTuple(())
    with pytest.raises(ArgumentError):
        ExponentTuple((1, -1))


def test_bad_tuples():
    with pytest.raises(ArgumentError):
        f_multiplicative((0, 2))
    with pytest.raises(ArgumentError):
        f_direct(())
    with pytest.raises(ArgumentError):
        g_value((2, 2), 0)


def test_cache_key_ignores_order():
    multivar.clear_cache()
    f_multiplicative((12, 18, 8))
    before = multivar._local_value.cache_info().currsize
    f_multiplicative((8, 12, 18))
    assert multivar._local_value.cache_info().currsize == before


def test_large_values_exact():
    # beyond 64 bits: f(p^30, p^30) = phi(p^30)
    p = 101
    assert f_prime_power((30, 30), p) == p**29 * (p - 1)
    assert f_prime_power((30, 30), p) > 2**128
