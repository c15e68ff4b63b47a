"""Exact integer arithmetic on levels.

Everything here is pure and exact: factorizations, the index function
psi, divisor counts, Hall divisors, and the least prime not dividing a
given level.  No floating point is used anywhere in this module.
"""

from __future__ import annotations

import math
from functools import lru_cache

__all__ = [
    "factorize",
    "psi",
    "omega",
    "tau",
    "euler_phi",
    "divisors",
    "hall_divisors",
    "least_good_prime",
    "is_prime",
    "is_prime_power",
]

# Trial division is plenty for the range in scope (levels up to ~1.3e4
# in the sieve, point counting up to 4290).  Cap kept generous.
_RANGE_CAP = 10**7

_WHEEL = (4, 2, 4, 2, 4, 6, 2, 6)


@lru_cache(maxsize=None)
def factorize(n: int) -> tuple[tuple[int, int], ...]:
    """Prime factorization of n as ((p1, e1), (p2, e2), ...), primes ascending.

    factorize(1) is the empty tuple.
    """
    if not isinstance(n, int) or n < 1:
        raise ValueError("factorize requires a positive integer, got %r" % (n,))
    if n > _RANGE_CAP:
        raise ValueError("level %d exceeds the supported range %d" % (n, _RANGE_CAP))
    out = []
    for p in (2, 3, 5):
        if n % p == 0:
            e = 0
            while n % p == 0:
                n //= p
                e += 1
            out.append((p, e))
    p, i = 7, 0
    while p * p <= n:
        if n % p == 0:
            e = 0
            while n % p == 0:
                n //= p
                e += 1
            out.append((p, e))
        p += _WHEEL[i]
        i = (i + 1) & 7
    if n > 1:
        out.append((n, 1))
    return tuple(out)


def psi(n: int) -> int:
    """The index [SL2(Z) : Gamma_0(n)] = n * prod_{p|n} (1 + 1/p), exact."""
    r = n
    for p, _ in factorize(n):
        r = r // p * (p + 1)
    return r


def omega(n: int) -> int:
    """Number of distinct prime divisors."""
    return len(factorize(n))


def tau(n: int) -> int:
    """Number of divisors."""
    r = 1
    for _, e in factorize(n):
        r *= e + 1
    return r


def euler_phi(n: int) -> int:
    r = n
    for p, _ in factorize(n):
        r = r // p * (p - 1)
    return r


def divisors(n: int) -> list[int]:
    """All divisors of n, ascending."""
    out = [1]
    for p, e in factorize(n):
        out = [d * p**k for d in out for k in range(e + 1)]
    return sorted(out)


def hall_divisors(n: int) -> list[int]:
    """All d | n with gcd(d, n/d) = 1, ascending.  Exactly 2^omega(n) values."""
    out = [1]
    for p, e in factorize(n):
        out = [d * q for d in out for q in (1, p**e)]
    return sorted(out)


def least_good_prime(n: int) -> int:
    """Smallest prime not dividing n."""
    p = 2
    while n % p == 0:
        p = _next_prime(p)
    return p


def is_prime(n: int) -> bool:
    return n >= 2 and factorize(n) == ((n, 1),)


def is_prime_power(n: int) -> bool:
    """True iff n = p^e with e >= 1."""
    return len(factorize(n)) == 1


def _next_prime(p: int) -> int:
    q = p + 1
    while not is_prime(q):
        q += 1
    return q


def kronecker(a: int, n: int) -> int:
    """Kronecker symbol (a | n) for n >= 1."""
    if n < 1:
        raise ValueError("n must be positive")
    if n == 1:
        return 1
    result = 1
    # factor out 2
    while n % 2 == 0:
        n //= 2
        if a % 2 == 0:
            return 0
        if a % 8 in (3, 5):
            result = -result
    a %= n
    # Jacobi symbol via reciprocity
    while a != 0:
        while a % 2 == 0:
            a //= 2
            if n % 8 in (3, 5):
                result = -result
        a, n = n, a
        if a % 4 == 3 and n % 4 == 3:
            result = -result
        a %= n
    return result if n == 1 else 0
