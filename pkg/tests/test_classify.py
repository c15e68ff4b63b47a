import json

import pytest

from alq.classify import (GonalityFact, classify_level, classify_levels,
                          load_facts, sieve, verify_tables)
from alq.config import Config
from alq.errors import DataIntegrityError


@pytest.fixture(scope="module")
def facts(cfg):
    return load_facts(cfg.facts_path)


def test_low_genus_rules(db, facts, cfg):
    # genus 0 -> gonality 1; genus 1 and 2 -> gonality 2 over both fields
    for level, gon in ((66, 1), (100, 2), (165, 2)):
        v = classify_level(level, db, facts, schedule=cfg.schedule)
        assert v.gon_q == (gon, gon) and v.gon_c == (gon, gon)
        assert v.resolved


def test_trigonal_fact_resolves_c(db, facts, cfg):
    # 253 is recorded trigonal: gon_C = 3 exactly
    v = classify_level(253, db, facts, schedule=cfg.schedule)
    assert v.gon_c == (3, 3)


def test_hyperelliptic_fact(db, facts, cfg):
    v = classify_level(176, db, facts, schedule=cfg.schedule)
    assert v.gon_q == (2, 2) and v.gon_c == (2, 2)


def test_tetragonal_resolution(db, facts, cfg):
    # 360 sits in the printed Q-tetragonal table
    v = classify_level(360, db, facts, schedule=cfg.schedule)
    assert v.gon_q == (4, 4) and v.gon_c == (4, 4)


def test_quotient_recursion_44N(db, facts, cfg):
    # 4 || 620 and X0*(310) has gonality bounds that propagate up
    memo = {}
    v = classify_level(620, db, facts, schedule=cfg.schedule, _memo=memo)
    assert 310 in memo
    lo_half = memo[310].gon_q[0]
    assert v.gon_q[0] >= lo_half


def test_classify_levels_sorted_and_memoized(db, facts, cfg):
    out = classify_levels([448, 360, 448], db, facts, cfg.schedule, workers=2)
    assert [v.level for v in out] == [360, 448]


def test_contradictory_facts_rejected(db, facts, cfg, tmp_path):
    doc = {"facts": [
        {"level": 360, "claim": {"field": "Q", "kind": "lower", "value": 7},
         "source": "test:bogus"},
    ]}
    path = tmp_path / "facts.json"
    path.write_text(json.dumps(doc))
    bad_facts = load_facts(path)
    with pytest.raises(DataIntegrityError):
        # printed tetragonality (upper 4) collides with the bogus lower 7
        classify_level(360, db, bad_facts, schedule=cfg.schedule)


def test_fact_without_source_rejected(tmp_path):
    doc = {"facts": [{"level": 5, "claim": {"field": "Q", "kind": "lower",
                                            "value": 3}, "source": ""}]}
    path = tmp_path / "facts.json"
    path.write_text(json.dumps(doc))
    with pytest.raises(DataIntegrityError):
        load_facts(path)


def test_sieve_structure(cfg):
    report = sieve(cfg, max_level=700)
    assert report.complete
    joined = (set(report.genus_le3) | set(report.genus4)
              | set(report.ht_dropped) | set(report.survivors))
    # the four buckets partition the composite non-prime-power levels
    assert len(joined) == (len(report.genus_le3) + len(report.genus4)
                           + len(report.ht_dropped) + len(report.survivors))
    assert set(report.final_survivors) <= set(report.survivors)
    assert set(report.abramovich_eliminated) == \
        set(report.survivors) - set(report.final_survivors)


def test_verify_tables_flags_uncovered_diff(db, facts, cfg, golden, tmp_path):
    # verdicts that miss a printed trigonal level must fail verification
    levels = golden("thm_trigonal.json")["levels"]
    verdicts = classify_levels(levels[1:], db, facts, cfg.schedule)
    report = verify_tables(verdicts, cfg.golden_dir,
                           cfg.golden_dir / "errata.json")
    assert not report["ok"]
