import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from numpy.testing import assert_allclose
from scipy import special

from poisson_index.special_functions import (
    ConvergenceError,
    DomainError,
    Tolerance,
    binomial_tail,
    f_cdf,
    gauss_2f1_terminating,
    log_beta,
    log_binom,
    log_gamma,
    neg_binomial_cdf,
    reg_inc_beta,
)


def brute_binomial_sum(n, lo, hi, q):
    q = Fraction(q)
    return float(sum(math.comb(n, r) * q**r * (1 - q) ** (n - r) for r in range(lo, hi + 1)))


def brute_2f1(a, b, c, z):
    a, c, z = Fraction(a), Fraction(c), Fraction(z)
    total, term = Fraction(0), Fraction(1)
    for t in range(-int(b) + 1):
        total += term
        term = term * (a + t) * (b + t) / ((c + t) * (t + 1)) * z
    return float(total)


# ---------------------------------------------------------------- log_gamma

def test_log_gamma_examples():
    assert log_gamma(1) == 0.0
    assert_allclose(log_gamma(0.5), math.log(math.sqrt(math.pi)), rtol=1e-15)
    assert_allclose(log_gamma(6), math.log(math.factorial(5)), rtol=1e-15)


@pytest.mark.parametrize("n", [3, 10, 50, 170])
def test_log_gamma_factorial_oracle(n):
    assert_allclose(log_gamma(n + 1), math.log(math.factorial(n)), rtol=1e-14)


def test_log_gamma_range_against_scipy():
    xs = np.concatenate([np.geomspace(1e-6, 0.9, 40), np.geomspace(2.5, 1e15, 60)])
    assert_allclose([log_gamma(float(x)) for x in xs], special.gammaln(xs), rtol=1e-14)


@pytest.mark.parametrize("x", [0, -1.5, math.inf, math.nan])
def test_log_gamma_domain(x):
    with pytest.raises(DomainError):
        log_gamma(x)


# ---------------------------------------------------------------- Tolerance

def test_tolerance_defaults_and_bounds():
    assert Tolerance() == Tolerance(1e-15, 500)
    with pytest.raises(DomainError):
        Tolerance(rel_eps=1e-3)
    with pytest.raises(DomainError):
        Tolerance(rel_eps=0.0)
    with pytest.raises(DomainError):
        Tolerance(max_iter=10)


# ---------------------------------------------------------------- reg_inc_beta

def test_reg_inc_beta_examples():
    assert_allclose(reg_inc_beta(0.5, 1, 1), 0.5, rtol=1e-15)
    oracle = brute_binomial_sum(4, 2, 4, 0.7)
    assert_allclose(oracle, 0.9163, rtol=1e-12)
    assert_allclose(reg_inc_beta(0.7, 2, 3), oracle, rtol=1e-14)
    assert_allclose(reg_inc_beta(0.3, 3, 2), 1 - oracle, rtol=1e-13)


def test_reg_inc_beta_endpoints_exact():
    assert reg_inc_beta(0.0, 2.5, 7) == 0.0
    assert reg_inc_beta(1.0, 2.5, 7) == 1.0


@pytest.mark.parametrize("x, a, b", [(-0.1, 1, 1), (1.1, 1, 1), (0.5, 0, 1), (0.5, 1, -2), (math.nan, 1, 1)])
def test_reg_inc_beta_domain(x, a, b):
    with pytest.raises(DomainError):
        reg_inc_beta(x, a, b)


def test_reg_inc_beta_convergence_error():
    with pytest.raises(ConvergenceError):
        reg_inc_beta(0.5, 1e6, 1e6, Tolerance(max_iter=50))


def test_reg_inc_beta_against_scipy_grid():
    rng = np.random.default_rng(3)
    a = rng.uniform(0.1, 200, 300)
    b = rng.uniform(0.1, 200, 300)
    x = rng.uniform(0, 1, 300)
    ours = [reg_inc_beta(float(xi), float(ai), float(bi)) for xi, ai, bi in zip(x, a, b)]
    assert_allclose(ours, special.betainc(a, b, x), rtol=1e-12, atol=1e-14)


unit = st.floats(0.0, 1.0)
shape = st.floats(0.1, 100.0)
# points whose complement 1 - x is exact in binary floating point
exact_unit = unit.map(lambda x: 1.0 - (1.0 - x))


@settings(max_examples=300, deadline=None)
@given(exact_unit, shape, shape)
def test_symmetry(x, a, b):
    assert abs(reg_inc_beta(x, a, b) + reg_inc_beta(1 - x, b, a) - 1) <= 1e-13


@settings(max_examples=200, deadline=None)
@given(unit, unit, shape, shape)
def test_monotone_in_x(x1, x2, a, b):
    lo, hi = sorted((x1, x2))
    assert reg_inc_beta(lo, a, b) <= reg_inc_beta(hi, a, b) + 1e-15


@pytest.mark.parametrize("a", [1, 2, 7, 25, 50])
@pytest.mark.parametrize("b", [1, 3, 19, 50])
def test_integer_reduction(a, b):
    # I_x(a, b) = P(Bin(a + b - 1, x) >= a)
    for x in np.linspace(0.1, 0.9, 9):
        assert abs(reg_inc_beta(x, a, b) - binomial_tail(a + b - 1, a, a + b - 1, x)) <= 1e-12


# ---------------------------------------------------------------- f_cdf

def test_f_cdf_examples():
    assert_allclose(f_cdf(1, 2, 2), 0.5, rtol=1e-15)
    assert_allclose(f_cdf(1, 2, 4), 5 / 9, rtol=1e-14)
    assert f_cdf(0, 3.5, 7) == 0.0


@settings(max_examples=200, deadline=None)
@given(st.floats(0.0, 1e4), st.floats(0.2, 200), st.floats(0.2, 200))
def test_f_reduction(x, d1, d2):
    den = d1 * x + d2
    direct = reg_inc_beta(d1 * x / den, d1 / 2, d2 / 2, xc=d2 / den)
    assert abs(f_cdf(x, d1, d2) - direct) <= 1e-14


def test_f_cdf_high_precision():
    mp = pytest.importorskip("mpmath")
    mp.mp.dps = 40
    for x, d1, d2 in [(34.0, 36.0, 0.21875), (0.5, 2.0, 160.0), (1.7, 82.0, 30.0)]:
        u = mp.mpf(d1) * x / (mp.mpf(d1) * x + d2)
        exact = float(mp.betainc(mp.mpf(d1) / 2, mp.mpf(d2) / 2, 0, u, regularized=True))
        assert abs(f_cdf(x, d1, d2) - exact) <= 1e-14


def test_f_cdf_against_scipy():
    from scipy.stats import f as fdist

    for x, d1, d2 in [(0.3, 3, 9), (2.0, 30, 84), (10.0, 1, 1), (0.99, 200, 3)]:
        assert_allclose(f_cdf(x, d1, d2), fdist.cdf(x, d1, d2), rtol=1e-12)


@pytest.mark.parametrize("args", [(-1, 2, 2), (1, 0, 2), (1, 2, -1)])
def test_f_cdf_domain(args):
    with pytest.raises(DomainError):
        f_cdf(*args)


# ---------------------------------------------------------------- 2F1

def test_2f1_examples():
    assert gauss_2f1_terminating(3.7, 0, 2.2, 0.4) == 1.0
    assert_allclose(gauss_2f1_terminating(1, -1, 2, 0.5), 0.75, rtol=1e-15)
    expected = brute_2f1(2, -2, 3, 0.25)
    assert_allclose(expected, 1 - 1 / 3 + 1 / 32, rtol=1e-15)
    assert_allclose(gauss_2f1_terminating(2, -2, 3, 0.25), expected, rtol=1e-14)


@pytest.mark.parametrize(
    "a, b, c, z",
    [(2.5, -7, 3.5, 0.9), (41, -14, 42, 0.6), (15.5, -40, 16.5, 0.3), (3, -49, 4, 0.999), (1.5, -20, 0.7, -0.8)],
)
def test_2f1_brute_force_oracle(a, b, c, z):
    assert_allclose(gauss_2f1_terminating(a, b, c, z), brute_2f1(a, b, c, z), rtol=1e-12)


def test_2f1_rejects_non_terminating():
    with pytest.raises(DomainError):
        gauss_2f1_terminating(1, 0.5, 2, 0.5)
    with pytest.raises(DomainError):
        gauss_2f1_terminating(1, 2, 2, 0.5)
    with pytest.raises(DomainError):
        gauss_2f1_terminating(1, -2, -3, 0.5)
    with pytest.raises(DomainError):
        gauss_2f1_terminating(1, -2, 2, 1.5)


@pytest.mark.parametrize("a1", [1, 2, 9, 30])
@pytest.mark.parametrize("a2", [1, 4, 17, 30])
@pytest.mark.parametrize("b1, b2", [(1.0, 1.0), (28010.0, 19017.0), (10.0, 1.0), (1.0, 19017.0)])
def test_2f1_reduction(a1, a2, b1, b2):
    z = b2 / (b1 + b2)
    rhs = 1 - z**a2 / (a2 * math.exp(log_beta(a1, a2))) * gauss_2f1_terminating(a2, 1 - a1, 1 + a2, z)
    assert abs(rhs - (1 - reg_inc_beta(z, a2, a1))) <= 1e-11


# ---------------------------------------------------------------- sums

def test_binomial_tail_examples():
    assert_allclose(binomial_tail(4, 2, 4, 0.7), brute_binomial_sum(4, 2, 4, 0.7), rtol=1e-14)
    assert binomial_tail(7, 0, 7, 0.3) == 1.0
    assert_allclose(binomial_tail(1, 0, 0, 0.5), 0.5, rtol=1e-15)


def test_binomial_tail_large_n():
    from scipy.stats import binom

    n = 28010
    assert_allclose(binomial_tail(n, 0, 14000, 0.5), binom.cdf(14000, n, 0.5), rtol=1e-10)
    assert_allclose(binomial_tail(3000, 100, 200, 0.05), binom.cdf(200, 3000, 0.05) - binom.cdf(99, 3000, 0.05),
                    rtol=1e-10)


def test_binomial_tail_edges():
    assert binomial_tail(5, 0, 2, 0.0) == 1.0
    assert binomial_tail(5, 1, 2, 0.0) == 0.0
    assert binomial_tail(5, 5, 5, 1.0) == 1.0
    with pytest.raises(DomainError):
        binomial_tail(5, 3, 2, 0.5)
    with pytest.raises(DomainError):
        binomial_tail(5, 0, 6, 0.5)
    with pytest.raises(DomainError):
        binomial_tail(5, 0, 2, 1.5)


def test_neg_binomial_examples():
    assert_allclose(neg_binomial_cdf(1, 0, 0.5), 0.5, rtol=1e-15)
    assert_allclose(neg_binomial_cdf(2, 1, 0.5), 0.5, rtol=1e-15)
    assert_allclose(neg_binomial_cdf(3, 4, 0.4), reg_inc_beta(0.4, 3, 5), rtol=1e-13)


def test_neg_binomial_domain():
    for p in (0.0, 1.0, -0.2):
        with pytest.raises(DomainError):
            neg_binomial_cdf(2, 3, p)
    with pytest.raises(DomainError):
        neg_binomial_cdf(0, 3, 0.5)


def test_log_binom_and_log_beta():
    assert_allclose(log_binom(2000, 700), special.gammaln(2001) - special.gammaln(701) - special.gammaln(1301),
                    rtol=1e-13)
    assert log_binom(10, 0) == 0.0
    assert_allclose(log_beta(41, 15), special.betaln(41, 15), rtol=1e-14)
    assert_allclose(log_beta(41.5, 15.5), special.betaln(41.5, 15.5), rtol=1e-14)
