"""Gonality bound rules.

Each rule returns its conclusion together with the numeric witnesses
needed to replay the underlying inequality in exact arithmetic.  All
comparisons are cross-multiplied integers; nothing is evaluated in
floating point.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .arith import factorize, least_good_prime, omega, psi
from .errors import DataIntegrityError, UsageError

__all__ = [
    "BoundRuleResult",
    "abramovich_allows",
    "c_tetragonal_cutoff",
    "ogg_lower_bound",
    "ogg_sieve_excludes",
    "point_count_excludes",
    "poonen_upper_bounds",
    "tower_rule",
    "quotient_upper_rule",
    "quotient_lower_rule",
    "betti_rules",
]


@dataclass(frozen=True)
class BoundRuleResult:
    rule: str
    level: int
    conclusion: str
    witnesses: dict


def abramovich_allows(N: int, d: int) -> tuple[bool, BoundRuleResult]:
    """True iff the gonality lower bound permits a d-gonal map over C:
    325 * psi(N) <= 2^15 * d * 2^omega(N)."""
    lhs = 325 * psi(N)
    rhs = 2**15 * d * 2 ** omega(N)
    ok = lhs <= rhs
    return ok, BoundRuleResult(
        "abramovich", N,
        "gon_C may be <= %d" % d if ok else "gon_C > %d" % d,
        {"psi": psi(N), "omega": omega(N), "lhs": lhs, "rhs": rhs})


def c_tetragonal_cutoff() -> int:
    """Largest level that could carry a degree-4 complex map: 12906.

    Replays the two branches of the argument.  For omega >= 6 the index
    psi(N) grows at least like 3*4*6*8*12*14*18^(omega-6), which beats
    2^15/325 * 4 * 2^omega for every omega up to a generous cap.  For
    omega <= 5 the bound N <= psi(N) <= 2^15/325 * 4 * 2^5 < 12906.
    """
    prod = 3 * 4 * 6 * 8 * 12 * 14
    for w in range(6, 16):
        # exact comparison: 325 * prod > 2^17 * 2^w
        if not 325 * prod > 2**17 * 2**w:
            raise DataIntegrityError("large-omega branch fails at omega=%d" % w)
        prod *= 18
    if not 2**22 < 12906 * 325:  # 2^15/325 * 4 * 2^5 < 12906
        raise DataIntegrityError("small-omega branch fails")
    return 12906


def ogg_lower_bound(N: int, p: int) -> Fraction:
    """L_p(N) = (p-1)/12 * psi(N) + 2^omega(N), a lower bound for
    #X0(N)(F_{p^2}) at a good prime p."""
    if N % p == 0:
        raise UsageError("p = %d divides N = %d" % (p, N))
    return Fraction(p - 1, 12) * psi(N) + 2 ** omega(N)


def ogg_sieve_excludes(N: int, d: int = 4) -> tuple[bool, BoundRuleResult]:
    """True iff, with p the least good prime, the degree-2^omega quotient
    map forces #X0*(N)(F_{p^2}) > d(p^2+1), excluding Q-gonality <= d."""
    p = least_good_prime(N)
    lp = ogg_lower_bound(N, p)
    lhs = lp / 2 ** omega(N)
    excl = lhs > d * (p**2 + 1)
    return excl, BoundRuleResult(
        "ogg-sieve", N,
        "gon_Q > %d" % d if excl else "no conclusion",
        {"p": p, "L_p": str(lp), "omega": omega(N),
         "threshold": d * (p**2 + 1)})


def point_count_excludes(N: int, d: int, q: int, count: int
                         ) -> tuple[bool, BoundRuleResult]:
    """count = #X0*(N)(F_q) > d(q+1) rules out gon_Q <= d."""
    excl = count > d * (q + 1)
    return excl, BoundRuleResult(
        "point-count", N,
        "gon_Q > %d" % d if excl else "no conclusion",
        {"q": q, "count": count, "threshold": d * (q + 1)})


def poonen_upper_bounds(genus: int, has_rational_point: bool
                        ) -> list[BoundRuleResult]:
    """Generic upper bounds: gon_Q <= 2g-2 (g >= 2), gon_Q <= g with a
    rational point (g >= 2), gon_C <= floor((g+3)/2)."""
    out = []
    if genus >= 2:
        out.append(BoundRuleResult("poonen-2g-2", 0, "gon_Q <= %d" % (2 * genus - 2),
                                   {"genus": genus}))
        if has_rational_point:
            out.append(BoundRuleResult("poonen-g", 0, "gon_Q <= %d" % genus,
                                       {"genus": genus}))
        out.append(BoundRuleResult("poonen-(g+3)/2", 0,
                                   "gon_C <= %d" % ((genus + 3) // 2),
                                   {"genus": genus}))
    return out


def tower_rule(genus: int, gon_c_is_4: bool = False,
               gon_q_exceeds_4: bool = False) -> list[BoundRuleResult]:
    """For g >= 10 (with a rational point): gon_C = 4 implies gon_Q = 4,
    and contrapositively gon_Q > 4 implies gon_C > 4."""
    if genus < 10:
        return []
    out = []
    if gon_c_is_4:
        out.append(BoundRuleResult("tower", 0, "gon_Q = 4", {"genus": genus}))
    if gon_q_exceeds_4:
        out.append(BoundRuleResult("tower-contrapositive", 0, "gon_C > 4",
                                   {"genus": genus}))
    return out


def _applies_4n(N: int) -> bool:
    fac = dict(factorize(N))
    return fac.get(2, 0) == 2


def quotient_upper_rule(N: int, genus_half: int) -> list[BoundRuleResult]:
    """When 4 || N there is a degree-2 map X0*(N) -> X0*(N/2), so
    gon_Q(X0*(N)) <= 2 * gon_Q(X0*(N/2)); in particular genus 2
    downstairs gives gon_Q <= 4 upstairs."""
    if not _applies_4n(N):
        return []
    out = [BoundRuleResult("quotient-map", N,
                           "gon_Q <= 2 * gon_Q(X0*(%d))" % (N // 2),
                           {"half_level": N // 2})]
    if genus_half == 2:
        out.append(BoundRuleResult("quotient-map-genus2", N, "gon_Q <= 4",
                                   {"half_level": N // 2, "half_genus": 2}))
    return out


def quotient_lower_rule(N: int, half_gon_q_lower: int) -> list[BoundRuleResult]:
    """When 4 || N, gon_Q(X0*(N)) >= gon_Q(X0*(N/2)) (maps push down)."""
    if not _applies_4n(N) or half_gon_q_lower <= 1:
        return []
    return [BoundRuleResult("quotient-map-lower", N,
                            "gon_Q >= %d" % half_gon_q_lower,
                            {"half_level": N // 2,
                             "half_lower": half_gon_q_lower})]


def _schreyer_admissible(genus: int) -> set[int]:
    # the four admissible beta_{2,2} values for a canonical genus-g curve
    g = genus
    return {0, g - 4, (g - 2) * (g - 3) // 2 - 1, (g - 2) * (g - 4)}


def betti_rules(genus: int, beta22: int, is_hyperelliptic: bool,
                is_trigonal: bool, has_rational_point: bool
                ) -> list[BoundRuleResult]:
    """Graded-Betti rules: beta_{2,2} = 0 forces gon_C >= 5 (for a
    non-hyperelliptic, non-trigonal curve of genus >= 5); beta_{2,2} =
    genus - 4 gives a unique degree-4 pencil, rational thanks to a
    rational point, so gon_Q = gon_C = 4."""
    if genus >= 7 and beta22 not in _schreyer_admissible(genus):
        raise DataIntegrityError("beta22 = %d inadmissible for genus %d"
                                 % (beta22, genus))
    out = []
    if beta22 == 0 and genus >= 5 and not is_hyperelliptic and not is_trigonal:
        out.append(BoundRuleResult("betti-zero", 0, "gon_C >= 5",
                                   {"genus": genus, "beta22": 0}))
    if (beta22 == genus - 4 and genus >= 7 and has_rational_point
            and not is_trigonal and not is_hyperelliptic):
        out.append(BoundRuleResult("betti-unique-pencil", 0,
                                   "gon_Q = gon_C = 4",
                                   {"genus": genus, "beta22": beta22}))
    return out
