import math

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from alq.arith import (divisors, euler_phi, factorize, hall_divisors,
                       is_prime, is_prime_power, kronecker,
                       least_good_prime, omega, psi, tau)

ints = st.integers(min_value=1, max_value=3000)


def coprime_pairs():
    return st.tuples(ints, ints).filter(lambda ab: math.gcd(*ab) == 1)


def test_factorize_roundtrip():
    for n in (1, 2, 12, 360, 2**10, 9699690, 10**6 + 3):
        f = factorize(n)
        prod = 1
        for p, e in f:
            assert is_prime(p) and e >= 1
            prod *= p**e
        assert prod == n
        assert [p for p, _ in f] == sorted(p for p, _ in f)


@given(st.integers(min_value=1, max_value=10**7))
def test_factorize_matches_sympy(n):
    assert dict(factorize(n)) == sympy.factorint(n)


@settings(max_examples=200)
@given(coprime_pairs())
def test_multiplicativity(ab):
    a, b = ab
    assert psi(a * b) == psi(a) * psi(b)
    assert tau(a * b) == tau(a) * tau(b)
    assert omega(a * b) == omega(a) + omega(b)
    assert euler_phi(a * b) == euler_phi(a) * euler_phi(b)


def test_psi_values():
    # psi(N) = N * prod (1 + 1/p)
    assert psi(1) == 1
    assert psi(2) == 3
    assert psi(6) == 12
    assert psi(360) == 864
    assert psi(12906) == psi(2) * psi(3**3) * psi(239)


@given(ints)
def test_divisors_complete(n):
    ds = divisors(n)
    assert ds == sorted(ds)
    if n <= 2000:
        assert set(ds) == {d for d in range(1, n + 1) if n % d == 0}
    else:
        assert all(n % d == 0 for d in ds)
    assert len(ds) == tau(n)


@given(ints)
def test_hall_divisors(n):
    hs = hall_divisors(n)
    assert set(hs) <= set(divisors(n))
    for d in hs:
        assert math.gcd(d, n // d) == 1
    assert len(hs) == 2 ** omega(n)


def test_least_good_prime():
    assert least_good_prime(360) == 7
    assert least_good_prime(6) == 5
    assert least_good_prime(35) == 2


def test_is_prime_power():
    assert is_prime_power(243) and is_prime_power(2) and is_prime_power(1024)
    assert not is_prime_power(1) and not is_prime_power(360)


@given(st.integers(min_value=-50, max_value=50),
       st.integers(min_value=1, max_value=1000))
def test_kronecker_matches_sympy(a, n):
    if n % 2 == 1:
        assert kronecker(a, n) == sympy.jacobi_symbol(a, n)
