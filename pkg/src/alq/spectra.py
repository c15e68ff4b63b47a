"""Genera and Jacobian decompositions of the star quotients X0*(N).

The genus of X0*(N) is the dimension of the subspace of S2(Gamma_0(N))
fixed by every Atkin-Lehner involution.  That space has a basis indexed
by "atoms": a newform orbit of some level M | N together with, at each
prime p | N, a label describing which +1-eigencombination of oldform
lifts is taken.  With beta_p = v_p(N) - v_p(M) the labels at p are

    Pair(gamma)   for 0 <= gamma < beta_p/2   (always eigenvalue +1), and
    Middle(beta_p/2), beta_p even,  admitted only when the orbit's
                  Atkin-Lehner sign at p is +1 (+1 by convention when
                  p does not divide M).

The number of admitted atoms for one orbit is the product over p | N of
d+(beta_p, lambda_p); see dplus.  The extra involutions V2 (when 8 | N)
and V3 (when 9 exactly divides N) act diagonally on atoms, which gives
the genera of the corresponding quotient curves.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from . import arith
from .arith import factorize, kronecker
from .errors import DataIntegrityError, UsageError
from .newforms import NewformDatabase, NewformOrbit, orbits_dividing

__all__ = [
    "dplus",
    "genus_x0",
    "dim_new",
    "BasisAtom",
    "JacobianStarDecomposition",
    "decompose_jacobian_star",
    "genus_x0star",
    "v2_quotient_genus",
    "v3_quotient_genus",
]


def dplus(beta: int, lam: int) -> int:
    """Dimension of the +1-eigenspace among the beta+1 lifts at one prime."""
    if lam not in (1, -1):
        raise ValueError("lambda must be +1 or -1")
    if beta % 2 == 1:
        return (beta + 1) // 2
    return beta // 2 + (1 if lam == 1 else 0)


def genus_x0(n: int) -> int:
    """Genus of X0(n) by the classical formula."""
    fac = factorize(n)
    if n % 4 == 0:
        nu2 = 0
    else:
        nu2 = 1
        for p, _ in fac:
            nu2 *= 1 + kronecker(-4, p)
    if n % 9 == 0:
        nu3 = 0
    else:
        nu3 = 1
        for p, _ in fac:
            nu3 *= 1 + kronecker(-3, p)
    nu_inf = sum(arith.euler_phi(_gcd(d, n // d)) for d in arith.divisors(n))
    val = 12 + arith.psi(n) - 3 * nu2 - 4 * nu3 - 6 * nu_inf
    assert val % 12 == 0
    return val // 12


def _gcd(a, b):
    while b:
        a, b = b, a % b
    return a


@lru_cache(maxsize=None)
def dim_new(n: int) -> int:
    """Dimension of the new subspace of S2(Gamma_0(n)), by Moebius-style
    inversion of genus_x0(n) = sum over M | n of tau(n/M) * dim_new(M)."""
    total = genus_x0(n)
    for m in arith.divisors(n):
        if m != n:
            total -= arith.tau(n // m) * dim_new(m)
    return total


@dataclass(frozen=True)
class BasisAtom:
    """One basis vector of S2*(N): an orbit plus per-prime lift labels.

    local_labels maps p | N to ("pair", gamma) or ("middle", beta_p // 2).
    """

    orbit: NewformOrbit
    local_labels: tuple[tuple[int, tuple[str, int]], ...]

    def label_at(self, p: int) -> tuple[str, int]:
        for q, lab in self.local_labels:
            if q == p:
                return lab
        raise KeyError(p)


def _beta(N: int, M: int, p: int) -> int:
    b = 0
    n, m = N, M
    while n % p == 0:
        n //= p
        b += 1
    while m % p == 0:
        m //= p
        b -= 1
    return b


def _local_labels(beta: int, lam: int) -> list[tuple[str, int]]:
    labels: list[tuple[str, int]] = [("pair", g) for g in range(beta // 2)]
    if beta % 2 == 1:
        labels.append(("pair", beta // 2))
    elif lam == 1:
        labels.append(("middle", beta // 2))
    return labels


def atoms_for_orbit(N: int, orbit: NewformOrbit) -> list[BasisAtom]:
    """All admitted atoms lifting `orbit` into S2*(N)."""
    primes = [p for p, _ in factorize(N)]
    per_prime = []
    for p in primes:
        beta = _beta(N, orbit.level, p)
        labels = _local_labels(beta, orbit.sign(p))
        if not labels:
            return []
        per_prime.append([(p, lab) for lab in labels])
    atoms = [()]
    for choices in per_prime:
        atoms = [a + (c,) for a in atoms for c in choices]
    return [BasisAtom(orbit, a) for a in atoms]


@dataclass(frozen=True)
class JacobianStarDecomposition:
    level: int
    constituents: tuple[tuple[NewformOrbit, int], ...]  # (orbit, multiplicity)
    genus: int


def decompose_jacobian_star(N: int, db: NewformDatabase) -> JacobianStarDecomposition:
    """J0*(N) up to isogeny: orbits with their lift multiplicities."""
    parts = []
    genus = 0
    for _, orbit in orbits_dividing(N, db):
        mult = 1
        for p, _ in factorize(N):
            mult *= dplus(_beta(N, orbit.level, p), orbit.sign(p))
        if mult:
            parts.append((orbit, mult))
            genus += orbit.dim * mult
    return JacobianStarDecomposition(N, tuple(parts), genus)


def genus_x0star(N: int, db: NewformDatabase) -> int:
    g = decompose_jacobian_star(N, db).genus
    if not 0 <= g <= genus_x0(N):
        raise DataIntegrityError("genus of X0*(%d) out of range" % N)
    return g


def _admitted_atoms(N: int, db: NewformDatabase) -> list[BasisAtom]:
    out = []
    for _, orbit in orbits_dividing(N, db):
        out.extend(atoms_for_orbit(N, orbit))
    return out


def v2_quotient_genus(N: int, db: NewformDatabase) -> int:
    """Genus of X0*(N)/<V2>.  Requires 8 | N.

    V2 eigenvalue of an atom is read off its label at 2:
    Pair(0) -> -1, Pair(gamma > 0) -> +1, Middle -> the orbit's sign at 2.
    """
    if N % 8 != 0:
        raise UsageError("V2 requires 8 | N")
    g = 0
    for atom in _admitted_atoms(N, db):
        kind, gamma = atom.label_at(2)
        if kind == "middle":
            eig = atom.orbit.sign(2)
        else:
            eig = -1 if gamma == 0 else 1
        if eig == 1:
            g += atom.orbit.dim
    return g


def v3_quotient_genus(N: int, db: NewformDatabase) -> int:
    """Genus of X0*(N)/<V3>.  Requires 9 || N.

    Atoms from orbits with 9 | level have V3 eigenvalue equal to the
    orbit's sign at 3 (necessarily +1 for admitted atoms); orbits with
    3 || level contribute eigenvalue -1.  The action on lifts of orbits
    with level coprime to 3 is not covered by the lifting rules, so
    their presence is a hard error rather than a guess.
    """
    if N % 9 != 0 or N % 27 == 0:
        raise UsageError("V3 requires 9 || N")
    g = 0
    for atom in _admitted_atoms(N, db):
        v3 = _val3(atom.orbit.level)
        if v3 == 0:
            raise DataIntegrityError(
                "indeterminate V3 action on lifts of %s (level coprime to 3)"
                % atom.orbit.label)
        if v3 >= 2:
            if atom.orbit.sign(3) == 1:
                g += atom.orbit.dim
        # 3 || level: eigenvalue -1, contributes nothing
    return g


def _val3(m: int) -> int:
    v = 0
    while m % 3 == 0:
        m //= 3
        v += 1
    return v
