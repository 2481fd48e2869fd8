import random

import pytest
import sympy
from hypothesis import given
from hypothesis import strategies as st

from minkcrem.arith import (
    INFINITY,
    FactoredNat,
    IntPolynomial,
    cyclotomic_poly,
    divisors,
    euler_phi,
    factor,
    get_budget,
    ilog,
    iroot,
    is_prime,
    iter_prime_powers,
    lcm,
    mul,
    mult_order,
    prime_power,
    primes_up_to,
    set_budget,
    valuation,
)
from minkcrem.errors import FactorizationBudgetExceeded

X = sympy.Symbol("X")


def as_sympy(poly: IntPolynomial):
    return sympy.Poly(list(reversed(poly.coeffs)), X)


@pytest.mark.parametrize("n, expected", [
    (1, {}),
    (945, {3: 3, 5: 1, 7: 1}),
    (117648, {2: 4, 3: 2, 19: 1, 43: 1}),
])
def test_factor_examples(n, expected):
    assert factor(n) == FactoredNat(expected)


@pytest.mark.parametrize("ell, n, expected", [(3, 1, 0), (2, 24, 3), (3, 7**6 - 1, 2)])
def test_valuation_examples(ell, n, expected):
    assert valuation(ell, n) == expected


@pytest.mark.parametrize("a, mod, expected", [(1, 97, 1), (2, 7, 3), (4, 17, 4)])
def test_mult_order_examples(a, mod, expected):
    assert mult_order(a, mod) == expected


@pytest.mark.parametrize("d, expected", [(1, 1), (6, 2), (12, 4)])
def test_euler_phi_examples(d, expected):
    assert euler_phi(d) == expected


@pytest.mark.parametrize("d, coeffs", [(1, [-1, 1]), (6, [1, -1, 1]), (12, [1, 0, -1, 0, 1])])
def test_cyclotomic_examples(d, coeffs):
    assert cyclotomic_poly(d) == IntPolynomial(coeffs)


def test_mul_and_lcm_examples():
    assert mul(FactoredNat({}), FactoredNat({2: 1})) == FactoredNat({2: 1})
    assert lcm(FactoredNat({2: 3}), FactoredNat({2: 1, 3: 1})) == FactoredNat({2: 3, 3: 1})
    assert mul(FactoredNat({3: 3, 5: 1, 7: 1}), FactoredNat({3: 1})) == FactoredNat({3: 4, 5: 1, 7: 1})


def test_factored_rendering():
    assert str(FactoredNat({7: 1, 2: 7, 5: 1, 3: 3})) == "2^7*3^3*5*7"
    assert str(FactoredNat({})) == "1"
    assert FactoredNat({2: 7, 3: 3, 5: 1, 7: 1}).value() == 120960


def test_factored_rejects_bad_exponents():
    with pytest.raises(ValueError):
        FactoredNat({2: 0})


@given(st.integers(min_value=1, max_value=2**64 - 1))
def test_factor_round_trip(n):
    f = factor(n)
    assert f.value() == n
    assert f.certified
    assert dict(f.items()) == sympy.factorint(n)


@given(st.integers(min_value=1, max_value=10**12), st.integers(min_value=1, max_value=10**12))
def test_factor_is_multiplicative(a, b):
    assert factor(a) * factor(b) == factor(a * b)
    assert lcm(factor(a), factor(b)).value() == sympy.ilcm(a, b)
    assert factor(a).gcd(factor(b)).value() == sympy.igcd(a, b)


def test_factor_large_semiprime():
    p, q = 1000000007, 998244353
    assert factor(p * q) == FactoredNat({p: 1, q: 1})


def test_factor_above_64_bits_is_flagged():
    p = 2**89 - 1  # Mersenne prime
    f = factor(p * 3)
    assert f == FactoredNat({3: 1, p: 1})
    assert not f.certified


def test_budget_is_explicit_error():
    old = get_budget()
    try:
        set_budget(10)
        with pytest.raises(FactorizationBudgetExceeded):
            factor(1000000007 * 998244353)
    finally:
        set_budget(old)


@given(st.integers(min_value=0, max_value=2**70))
def test_is_prime_matches_sympy(n):
    assert is_prime(n) == sympy.isprime(n)


def test_is_prime_on_strong_pseudoprimes():
    # strong pseudoprimes to several small bases
    for n in (3215031751, 2152302898747, 3474749660383, 341550071728321, 3825123056546413051):
        assert not is_prime(n)


@given(st.sampled_from(primes_up_to(200)), st.integers(min_value=1, max_value=10**12),
       st.integers(min_value=0, max_value=30))
def test_valuation_shift(ell, n, k):
    while n % ell == 0:
        n //= ell
    assert valuation(ell, n * ell**k) == valuation(ell, n) + k


@given(st.integers(min_value=2, max_value=10**6), st.integers(min_value=1, max_value=10**6))
def test_mult_order_matches_sympy(mod, a):
    a %= mod
    if sympy.igcd(a, mod) != 1:
        return
    k = mult_order(a, mod)
    assert k == sympy.n_order(a, mod)
    assert euler_phi(mod) % k == 0


@given(st.integers(min_value=1, max_value=10**6))
def test_euler_phi_and_divisors_match_sympy(n):
    assert euler_phi(n) == sympy.totient(n)
    assert divisors(n) == sympy.divisors(n)


@pytest.mark.parametrize("n", range(1, 61))
def test_cyclotomic_product_identity(n):
    prod = IntPolynomial([1])
    for d in divisors(n):
        prod = prod * cyclotomic_poly(d)
    assert prod == IntPolynomial.x_pow_minus_one(n)


@pytest.mark.parametrize("d", range(1, 106))
def test_cyclotomic_matches_sympy(d):
    assert as_sympy(cyclotomic_poly(d)) == sympy.Poly(sympy.cyclotomic_poly(d, X), X)


def test_polynomial_arithmetic():
    f = IntPolynomial([1, 2, 3])
    g = IntPolynomial([-1, 1])
    assert as_sympy(f * g) == as_sympy(f) * as_sympy(g)
    assert as_sympy(f + g) == as_sympy(f) + as_sympy(g)
    assert as_sympy(f - g) == as_sympy(f) - as_sympy(g)
    assert f ** 3 == f * f * f
    assert f(10) == 321
    assert (f * g).exact_div(g) == f
    with pytest.raises(ArithmeticError):
        f.exact_div(g)
    assert str(cyclotomic_poly(12)) == "X^4 - X^2 + 1"


def test_prime_power_helpers():
    assert prime_power(9) == (3, 2)
    assert prime_power(6) is None
    assert prime_power(2**61 - 1) == (2**61 - 1, 1)
    assert list(iter_prime_powers(20)) == [2, 3, 4, 5, 7, 8, 9, 11, 13, 16, 17, 19]
    rng = random.Random(1)
    for _ in range(200):
        n, k = rng.randrange(1, 10**40), rng.randrange(1, 7)
        r = iroot(n, k)
        assert r**k <= n < (r + 1) ** k
    assert ilog(9, 3) == 2 and ilog(8, 3) == 1 and ilog(2, 7) == 0


def test_infinity():
    assert INFINITY > 10**100
    assert INFINITY + 3 is INFINITY
    assert 2 * INFINITY is INFINITY
    assert str(INFINITY) == "inf"
