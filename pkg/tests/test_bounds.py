from fractions import Fraction

import pytest

from alq.bounds import (abramovich_allows, betti_rules, c_tetragonal_cutoff,
                        ogg_lower_bound, ogg_sieve_excludes,
                        point_count_excludes, poonen_upper_bounds,
                        quotient_lower_rule, quotient_upper_rule, tower_rule)
from alq.errors import DataIntegrityError, UsageError


def test_tetragonal_cutoff():
    assert c_tetragonal_cutoff() == 12906


def test_abramovich_monotone():
    ok_small, _ = abramovich_allows(390, 4)
    ok_huge, res = abramovich_allows(100000, 4)
    assert ok_small and not ok_huge
    assert res.witnesses["lhs"] > res.witnesses["rhs"]


def test_ogg_lower_bound_exact_fraction():
    # (p-1)/12 * psi + 2^omega with p = 7, N = 360: 1/2 * 864 + 8 = 440
    assert ogg_lower_bound(360, 7) == Fraction(440)
    with pytest.raises(UsageError):
        ogg_lower_bound(360, 5)


def test_ogg_sieve_on_large_level():
    excl, res = ogg_sieve_excludes(12882, 4)  # large level, small good prime
    assert isinstance(excl, bool)
    assert res.rule == "ogg-sieve"
    # a tiny level can never be excluded
    assert not ogg_sieve_excludes(210, 4)[0]


def test_point_count_exclusion_threshold():
    assert point_count_excludes(448, 4, 9, 42)[0]      # 42 > 40
    assert not point_count_excludes(448, 4, 9, 40)[0]  # boundary stays


def test_poonen_bounds():
    rules = {r.rule: r for r in poonen_upper_bounds(5, True)}
    assert rules["poonen-2g-2"].conclusion == "gon_Q <= 8"
    assert rules["poonen-g"].conclusion == "gon_Q <= 5"
    assert rules["poonen-(g+3)/2"].conclusion == "gon_C <= 4"
    assert poonen_upper_bounds(1, True) == []
    assert all(r.rule != "poonen-g" for r in poonen_upper_bounds(5, False))


def test_tower_rule_needs_genus_10():
    assert tower_rule(9, gon_c_is_4=True) == []
    assert [r.conclusion for r in tower_rule(12, gon_c_is_4=True)] == ["gon_Q = 4"]
    assert [r.conclusion for r in tower_rule(12, gon_q_exceeds_4=True)] \
        == ["gon_C > 4"]


def test_quotient_rules_require_4_exactly():
    assert quotient_upper_rule(360, 2) == []   # 8 | 360
    assert quotient_upper_rule(690, 2) == []   # 2 || 690
    rules = quotient_upper_rule(620, 2)        # 4 || 620
    assert any(r.conclusion == "gon_Q <= 4" for r in rules)
    assert quotient_lower_rule(620, 3)[0].conclusion == "gon_Q >= 3"
    assert quotient_lower_rule(620, 1) == []


def test_betti_rules():
    # beta22 = 0 on a genus >= 5 curve that is neither hyperelliptic nor
    # trigonal forces gon_C >= 5
    out = betti_rules(8, 0, False, False, True)
    assert any(r.conclusion == "gon_C >= 5" for r in out)
    # beta22 = g - 4 detects a unique rational degree-4 pencil
    out = betti_rules(7, 3, False, False, True)
    assert any("4" in r.conclusion for r in out)
    # inadmissible value is a hard error for genus >= 7
    with pytest.raises(DataIntegrityError):
        betti_rules(8, 17, False, False, True)
    # genus 7 admissible set is {0, 3, 9, 15}
    from alq.bounds import _schreyer_admissible
    assert _schreyer_admissible(7) == {0, 3, 9, 15}
