import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from ramamoments import kernels
from ramamoments.errors import ArgumentError, FitError, RangeError, ResourceError
from ramamoments.moments import (
    cauchy_schwarz_check,
    divisor_weights,
    fit_log_poly,
    moment,
    moment_direct,
    moment_via_divisor_identity,
    predicted_degree,
    t_average,
    t_average_many,
)
from ramamoments.multivar import f_direct
from ramamoments.ramanujan import cohen_sum


def brute_moment(x, y, k, beta, tables):
    return sum(sum(cohen_sum(q, n, beta, tables) for q in range(1, x + 1)) ** k for n in range(1, y + 1))


@pytest.mark.parametrize("x, y, k, expected", [(1, 57, 3, 57), (2, 10, 3, 40), (3, 5, 2, 8)])
def test_moment_examples(x, y, k, expected, tables):
    assert moment_direct(x, y, k, 1, tables).value == expected
    assert moment_via_divisor_identity(x, y, k, 1, tables).value == expected


def test_moment_examples_shared(tables):
    assert moment(2, 10, 3, 1, tables).value == 40
    assert moment(2, 10, 3, 1, tables, route="identity").value == 40


def test_moment_against_brute_force(tables):
    for beta in (1, 2):
        for k in (1, 2, 3):
            for x in range(1, 9):
                for y in (1, 7, 30):
                    want = brute_moment(x, y, k, beta, tables)
                    assert moment_direct(x, y, k, beta, tables).value == want
                    assert moment_via_divisor_identity(x, y, k, beta, tables).value == want


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 20), st.integers(1, 300), st.integers(1, 4), st.integers(1, 3))
def test_route_equivalence_property(x, y, k, beta):
    from ramamoments import build_sieves
    t = build_sieves(64)
    assert moment_direct(x, y, k, beta, t).value == moment_via_divisor_identity(x, y, k, beta, t).value


def test_moment_argument_errors(tables):
    with pytest.raises(ArgumentError):
        moment_direct(0, 5, 2, 1, tables)
    with pytest.raises(ArgumentError):
        moment(3, 5, 2, 1, tables, route="nope")
    with pytest.raises(RangeError):
        moment_direct(10**6, 5, 2, 1, tables)
    with pytest.raises(ResourceError):
        moment_direct(3, 10**8, 2, 1, tables)


def test_identity_budget(tables, monkeypatch):
    monkeypatch.setenv("RAMA_BUDGET", "100")
    with pytest.raises(ResourceError):
        moment_via_divisor_identity(20, 50, 2, 1, tables)
    monkeypatch.setenv("RAMA_BUDGET", "abc")
    with pytest.raises(ArgumentError):
        moment_via_divisor_identity(2, 5, 2, 1, tables)


def test_divisor_weights(tables):
    w = divisor_weights(10, 1, tables)
    mertens = tables.mertens
    for d in range(1, 11):
        assert w.get(d, 0) == d * int(mertens[10 // d])


def test_large_moment_exact(tables):
    # S_8 at x=60 overflows int64 per term; value must stay an exact int
    v = moment_direct(60, 2000, 12, 1, tables).value
    assert isinstance(v, int) and v > 2**63
    assert v == brute_moment(60, 2000, 12, 1, tables)


def brute_box(x, k):
    return sum(f_direct(n) for n in itertools.product(range(1, x + 1), repeat=k))


@pytest.mark.parametrize("k", [1, 2, 3])
def test_t_average_brute(k, tables):
    xs = range(1, 9)
    got = t_average_many(xs, k, tables)
    for x in xs:
        assert got[x] == brute_box(x, k)


@pytest.mark.parametrize("x, k, expected", [(1, 3, 1), (2, 2, 2), (2, 3, 4)])
def test_t_average_examples(x, k, expected, tables):
    assert t_average(x, k, 1, tables) == expected


def test_t_average_beta2(tables):
    for x in range(1, 7):
        want = sum(f_direct(n, 2) for n in itertools.product(range(1, x + 1), repeat=2))
        assert t_average(x, 2, 2, tables) == want


def test_t_average_monotone(tables):
    for k in (2, 3):
        vals = t_average_many(range(1, 61), k, tables)
        seq = [vals[x] for x in range(1, 61)]
        assert all(a <= b for a, b in zip(seq, seq[1:]))


def test_t_average_large_falls_back_exact(tables):
    # x^(2k) beyond int64 takes the exact Python path
    assert not kernels.box_fits_int64(3000, 3)
    assert kernels.box_fits_int64(600, 3)


def test_t_average_budget(tables, monkeypatch):
    monkeypatch.setenv("RAMA_BUDGET", "1000")
    with pytest.raises(ResourceError):
        t_average(50, 3, 1, tables)


def test_predicted_degree():
    assert [predicted_degree(k) for k in (3, 4, 5)] == [1, 7, 21]
    with pytest.raises(ArgumentError):
        predicted_degree(2)


def test_fit_exact_polynomial():
    xs = [2, 3, 5, 8, 13, 21]
    samples = [(x, x**2 * (1.5 + 2.0 * math.log(x) - 0.25 * math.log(x) ** 2)) for x in xs]
    rep = fit_log_poly(samples, 2, 2)
    assert np.allclose(rep.coefficients, [1.5, 2.0, -0.25], atol=1e-9)
    assert rep.r_squared == pytest.approx(1.0, abs=1e-12)
    assert max(abs(r) for r in rep.residuals) < 1e-9


def test_fit_constant_data():
    rep = fit_log_poly([(x, 4 * x) for x in (2, 4, 8, 16)], 1, 1)
    assert rep.coefficients == pytest.approx([4.0, 0.0], abs=1e-12)
    assert rep.r_squared == 1.0


def test_fit_rank_deficient():
    # x = 2 and 3 give only two distinct abscissas for a quadratic
    with pytest.raises(ArgumentError):
        fit_log_poly([(2, 1.0), (3, 2.0)], 0, 2)
    with pytest.raises(ArgumentError):
        fit_log_poly([(2, 1.0), (2, 2.0), (3, 1.0)], 0, 1)


def test_fit_numerically_rank_deficient():
    # log x barely moves across the window, so powers of it are collinear
    samples = [(x, 1.0) for x in range(10**6, 10**6 + 12)]
    with pytest.raises(FitError):
        fit_log_poly(samples, 0, 9)


def test_fit_big_integers():
    # exact division before the float conversion
    rep = fit_log_poly([(x, 10**300 * x**500) for x in (2, 3, 5)], 500, 0)
    assert rep.coefficients[0] == pytest.approx(1e300)
    with pytest.raises(FitError):
        fit_log_poly([(x, 10**400 * x) for x in (2, 3, 5)], 0, 0)


def test_fit_t3_positive_slope(tables):
    xs = [20, 30, 45, 70, 100]
    vals = t_average_many(xs, 3, tables)
    rep = fit_log_poly([(x, vals[x]) for x in xs], 3, 1)
    assert rep.coefficients[1] > 0
    d = rep.to_dict()
    assert d["model_degree"] == 1 and len(d["sample_points"]) == 5


@pytest.mark.parametrize("x, y", [(3, 5), (1, 10), (50, 10**4)])
def test_cauchy_schwarz(x, y, tables):
    assert cauchy_schwarz_check(x, y, tables)


def test_column_sum_backends(tables):
    for beta in (1, 2):
        a = kernels.column_sums_nb(40, 500, beta, tables.mertens)
        b = kernels.column_sums_np(40, 500, beta, tables.mertens)
        assert np.array_equal(a, b)


def test_box_sum_backends(tables):
    spf = tables.smallest_prime_factor
    inc = kernels.box_increments_nb(40, 3, spf, 4)
    prefix = np.cumsum(inc)
    for x in (1, 7, 25, 40):
        assert int(prefix[x]) == kernels.box_sum_np(x, 3, tables.mertens)


def test_exact_power_sum():
    vals = np.array([3, -2, 3, 0, 10**6], dtype=np.int64)
    assert kernels.exact_power_sum(vals, 5) == 2 * 3**5 + (-2) ** 5 + 10**30
