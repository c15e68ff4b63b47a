"""Phase 1b: from cached Atkin-Lehner traces to sign-block data.

For each level M the weight-2 new space splits into blocks indexed by a
sign vector eps in {+-1}^omega(M) (the Atkin-Lehner signs at the primes
dividing M).  Block dimensions follow from new-space traces by Fourier
inversion over the group of sign characters; new-space traces follow from
the cached full-space traces by unfolding the old/new decomposition.

Two independent routes to the star-quotient genus are checked against
each other at every level:

  (a) fixed-space average  g* = 2^-omega * sum over Hall Q of Tr(w_Q|S_2(N))
  (b) block recursion      g* = sum over M|N, eps of dim_eps(M) * prod d+()

Route (b) is the one the shipped package uses (it only needs per-orbit
sign data), route (a) is the oracle.
"""

import json
import math
import os
from functools import lru_cache

from msgen import divisors
from msgen import factorize as _factorize


def factorize(n):
    return dict(_factorize(n))

CACHE = os.path.join(os.path.dirname(__file__), "cache", "al")

_al = {}


def load(N):
    if N not in _al:
        with open(os.path.join(CACHE, "%d.json" % N)) as fh:
            _al[N] = json.load(fh)
    return _al[N]


def cached_levels():
    return sorted(int(f[:-5]) for f in os.listdir(CACHE) if f.endswith(".json"))


def full_trace(N, Q):
    """Tr(w_Q | S_2(Gamma_0(N))), Q a Hall divisor (Q = 1 gives the genus)."""
    rec = load(N)
    if Q == 1:
        return rec["genus_x0"]
    return rec["al_traces_s2"][str(Q)]


def hall_divisors(n):
    return [q for q in divisors(n) if math.gcd(q, n // q) == 1]


@lru_cache(maxsize=None)
def new_trace(M, Q):
    """Tr(w_Q | S_2^new(Gamma_0(M))) by unfolding the old/new decomposition."""
    if M == 1:
        return 0
    assert M % Q == 0 and math.gcd(Q, M // Q) == 1
    total = full_trace(M, Q)
    for L in divisors(M):
        if L == M:
            continue
        c, QS = _old_block(M, L, Q)
        if c:
            total -= c * new_trace(L, QS)
    return total


def _old_block(N, L, Q):
    """(coefficient, inner Hall divisor) for level-L newforms inside
    S_2(Gamma_0(N)) under w_Q: the trace contribution of that old block
    is coefficient * Tr(w | S_2^new(L)) with w at the inner divisor."""
    coeff = 1
    QS = 1
    for p, a in factorize(N).items():
        b = a - factorize(L).get(p, 0)
        if Q % p:
            coeff *= b + 1
        else:
            if b % 2:
                return 0, 1
            if L % p == 0:
                QS *= p ** factorize(L)[p]
    return coeff, QS


def sign_vectors(M):
    ps = sorted(factorize(M))
    out = [{}]
    for p in ps:
        out = [{**e, p: s} for e in out for s in (1, -1)]
    return out


@lru_cache(maxsize=None)
def block_dims(M):
    """dict mapping eps (tuple of (p, sign)) -> dim of that new-space block."""
    ps = sorted(factorize(M))
    w = len(ps)
    out = {}
    for eps in sign_vectors(M):
        tot = 0
        for Q in hall_divisors(M):
            chi = 1
            for p in ps:
                if Q % p == 0:
                    chi *= eps[p]
            tot += chi * new_trace(M, Q)
        assert tot % (1 << w) == 0, (M, eps, tot)
        d = tot >> w
        assert d >= 0, (M, eps, d)
        if d:
            out[tuple(sorted(eps.items()))] = d
    assert sum(out.values()) == load(M)["dim_new"], M
    return out


def dplus(beta, lam):
    """Dimension of the +1 eigenspace of the Atkin-Lehner lift action on
    the (beta+1)-dimensional oldform tower at one prime."""
    if beta % 2:
        return (beta + 1) // 2
    return beta // 2 + (1 if lam == 1 else 0)


def genus_star(N):
    """Genus of X_0(N) / (full Atkin-Lehner group), from block data."""
    fac = factorize(N)
    g = 0
    for M in divisors(N):
        if M == 1:
            continue
        for eps, d in block_dims(M).items():
            e = dict(eps)
            m = 1
            for p, a in fac.items():
                b = a - factorize(M).get(p, 0)
                m *= dplus(b, e.get(p, 1))
            g += d * m
    return g


def genus_star_oracle(N):
    """Independent route: dimension of the w-invariant subspace of S_2."""
    tot = sum(full_trace(N, Q) for Q in hall_divisors(N))
    w = len(factorize(N))
    assert tot % (1 << w) == 0, N
    return tot >> w


def orbit_multiplicity(N, M, eps):
    """Multiplicity of a level-M block with signs eps inside S_2^*(N)."""
    e = dict(eps)
    m = 1
    for p, a in factorize(N).items():
        b = a - factorize(M).get(p, 0)
        m *= dplus(b, e.get(p, 1))
    return m


def check_all(levels=None):
    levels = levels or cached_levels()
    bad = []
    for N in levels:
        if any(not os.path.exists(os.path.join(CACHE, "%d.json" % d))
               for d in divisors(N) if d > 1):
            continue
        a = genus_star_oracle(N)
        b = genus_star(N)
        if a != b:
            bad.append((N, a, b))
    return bad


if __name__ == "__main__":
    levels = cached_levels()
    print("cached levels:", len(levels))
    bad = check_all(levels)
    print("genus cross-check failures:", bad if bad else "none")
    for N in (360, 414, 243, 560, 990):
        if N in levels:
            print(N, "->", genus_star(N))
