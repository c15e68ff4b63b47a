"""Point counts #X0*(N)(F_{p^n}) from Frobenius characteristic polynomials.

For good reduction p the Frobenius charpoly of X0*(N) is the product,
over constituents (f, m) of the Jacobian decomposition, of
Res_y(m_p(y), x^2 - y x + p) raised to the multiplicity m, where m_p is
the integer characteristic polynomial of a_p(f).  Point counts follow
from Newton's identities: #X(F_{p^n}) = p^n + 1 - S_n.  Everything is
exact integer arithmetic.
"""

from __future__ import annotations

from dataclasses import dataclass

from sympy import Poly, Symbol, resultant

from .errors import BadReductionError, DataIntegrityError
from .newforms import NewformDatabase, NewformOrbit
from .spectra import decompose_jacobian_star

_x = Symbol("x")
_y = Symbol("y")


def orbit_frobenius(orbit: NewformOrbit, p: int) -> tuple[int, ...]:
    """prod over conjugates a of a_p of (x^2 - a x + p), little-endian monic."""
    if orbit.level % p == 0:
        raise BadReductionError("%s has bad reduction at %d" % (orbit.label, p))
    coeffs = orbit.charpoly(p)
    mp = Poly(list(reversed(coeffs)), _y)
    res = Poly(resultant(mp, Poly(_x**2 - _y * _x + p, _y, _x), _y), _x)
    out = tuple(int(c) for c in reversed(res.all_coeffs()))
    assert len(out) == 2 * orbit.dim + 1 and out[-1] == 1
    return out


def power_sums(poly: tuple[int, ...], n_max: int) -> list[int]:
    """S_1..S_{n_max}, S_k = sum of k-th powers of the roots, by Newton's
    identities.  `poly` is little-endian monic."""
    d = len(poly) - 1
    assert poly[-1] == 1
    # e_i = (-1)^i * coefficient of x^(d-i)
    e = [(-1) ** i * poly[d - i] for i in range(d + 1)]
    s = [0] * (n_max + 1)
    for k in range(1, n_max + 1):
        acc = 0
        for i in range(1, min(k, d) + 1):
            acc += (-1) ** (i - 1) * e[i] * s[k - i]
        if k <= d:
            acc += (-1) ** (k - 1) * k * e[k]
        s[k] = acc
    return s[1:]


def _poly_mul(a, b):
    out = [0] * (len(a) + len(b) - 1)
    for i, ca in enumerate(a):
        for j, cb in enumerate(b):
            out[i + j] += ca * cb
    return out


@dataclass(frozen=True)
class FrobeniusCharpoly:
    level: int
    p: int
    coeffs: tuple[int, ...]  # little-endian monic, degree 2g
    constituents: tuple[tuple[str, int], ...]  # (orbit label, multiplicity)

    @property
    def genus(self) -> int:
        return (len(self.coeffs) - 1) // 2


def frobenius_charpoly(N: int, p: int, db: NewformDatabase) -> FrobeniusCharpoly:
    if N % p == 0:
        raise BadReductionError("p = %d divides the level %d" % (p, N))
    dec = decompose_jacobian_star(N, db)
    poly = [1]
    names = []
    for orbit, mult in dec.constituents:
        block = orbit_frobenius(orbit, p)
        for _ in range(mult):
            poly = _poly_mul(poly, block)
        names.append((orbit.label, mult))
    g = dec.genus
    if len(poly) - 1 != 2 * g:
        raise DataIntegrityError("Frobenius charpoly degree %d != 2g = %d"
                                 % (len(poly) - 1, 2 * g))
    # functional equation c_i = p^(g-i) c_(2g-i)
    for i in range(2 * g + 1):
        lhs = poly[i] * p ** max(0, i - g)
        rhs = poly[2 * g - i] * p ** max(0, g - i)
        if lhs != rhs:
            raise DataIntegrityError(
                "functional equation fails for N=%d p=%d at i=%d" % (N, p, i))
    return FrobeniusCharpoly(N, p, tuple(poly), tuple(names))


def count_points(N: int, p: int, n: int, db: NewformDatabase) -> int:
    """#X0*(N)(F_{p^n}), exact, for p not dividing N."""
    fc = frobenius_charpoly(N, p, db)
    if fc.genus == 0:
        count = p**n + 1
    else:
        count = p**n + 1 - power_sums(fc.coeffs, n)[n - 1]
    if count < 0:
        raise DataIntegrityError("negative point count for N=%d q=%d^%d" % (N, p, n))
    return count
