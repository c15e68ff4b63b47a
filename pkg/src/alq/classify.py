"""Gonality decision engine.

Three layers:

- ``sieve``: the level sieve that narrows "every composite non-prime-power
  level up to the complex-tetragonality cutoff" down to the finite survivor
  set that still needs individual attention;
- ``classify_level`` / ``classify_levels``: per-level verdicts obtained by
  combining computed rules (genus, index bounds, point counts, quotient
  maps, extra involutions, graded Betti numbers) with ingested facts from
  the facts file, every step recorded as a replayable certificate;
- ``verify_tables``: exact set comparison of the computed verdicts against
  the golden tables, with a documented-errata overlay.

Ingested knowledge always carries a citation key; computed knowledge always
carries a rule id plus the numeric witnesses needed to replay it.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

from .arith import is_prime_power
from .bounds import (
    abramovich_allows,
    betti_rules,
    c_tetragonal_cutoff,
    ogg_sieve_excludes,
    point_count_excludes,
    poonen_upper_bounds,
)
from .config import Config
from .errors import DataIntegrityError, MissingDataError
from .newforms import NewformDatabase, fetch_level
from .pointcount import count_points
from .spectra import genus_x0star, v2_quotient_genus, v3_quotient_genus

__all__ = [
    "GonalityFact",
    "Verdict",
    "FactsFile",
    "SieveReport",
    "load_facts",
    "sieve",
    "classify_level",
    "classify_levels",
    "verify_tables",
]

# Levels of genus >= 5 eliminated up front as hyperelliptic or trigonal by
# the cited classification of such quotient curves.  327 is carried here
# exactly as printed even though the ingested genus-6 facts treat it as
# having C-gonality 4; the conflict is documented in the errata overlay.
HT_HIGH_GENUS = (253, 302, 323, 327, 351, 555)

_INF = None  # open upper bound


@dataclass(frozen=True)
class GonalityFact:
    """One certificate step: a bound on gon_Q or gon_C of one level."""
    level: int
    field: str            # "Q" | "C"
    kind: str             # "lower" | "upper" | "exact"
    value: int
    provenance: str

    def __post_init__(self):
        if self.field not in ("Q", "C"):
            raise ValueError("field must be Q or C")
        if self.kind not in ("lower", "upper", "exact"):
            raise ValueError("bad bound kind %r" % self.kind)
        if self.value < 1:
            raise ValueError("gonality bounds are positive")
        if not self.provenance:
            raise ValueError("provenance required")


@dataclass
class Verdict:
    level: int
    genus: int
    gon_q: tuple[int, int | None]     # (lower, upper or None)
    gon_c: tuple[int, int | None]
    chain: list[GonalityFact]
    resolved: bool

    def to_json(self) -> dict:
        def status(pair):
            lo, hi = pair
            if hi is not None and lo == hi:
                return {"kind": "exact", "value": lo}
            return {"kind": "interval", "min": lo, "max": hi}
        return {
            "level": self.level,
            "genus": self.genus,
            "gon_q": status(self.gon_q),
            "gon_c": status(self.gon_c),
            "resolved": self.resolved,
            "chain": [{"level": f.level, "field": f.field, "kind": f.kind,
                       "value": f.value, "provenance": f.provenance}
                      for f in self.chain],
        }


class _State:
    """Interval tracker for (gon_Q, gon_C) with certificate recording.

    Keeps gon_C <= gon_Q coherent: an upper bound on gon_Q propagates to
    gon_C, a lower bound on gon_C propagates to gon_Q.
    """

    def __init__(self, level: int):
        self.level = level
        self.lo = {"Q": 1, "C": 1}
        self.hi = {"Q": _INF, "C": _INF}
        self.prov_lo = {"Q": "trivial", "C": "trivial"}
        self.prov_hi = {"Q": "", "C": ""}
        self.chain: list[GonalityFact] = []

    def apply(self, fld: str, kind: str, value: int, provenance: str) -> None:
        if kind == "exact":
            self.apply(fld, "lower", value, provenance)
            self.apply(fld, "upper", value, provenance)
            return
        if kind == "lower":
            if self.hi[fld] is not None and value > self.hi[fld]:
                raise DataIntegrityError(
                    "level %d: gon_%s lower bound %d [%s] contradicts upper "
                    "bound %d [%s]" % (self.level, fld, value, provenance,
                                       self.hi[fld], self.prov_hi[fld]))
            if value > self.lo[fld]:
                self.lo[fld] = value
                self.prov_lo[fld] = provenance
                self.chain.append(GonalityFact(self.level, fld, "lower",
                                               value, provenance))
                if fld == "C":
                    self.apply("Q", "lower", value,
                               provenance + " + gon_C <= gon_Q")
        else:
            if value < self.lo[fld]:
                raise DataIntegrityError(
                    "level %d: gon_%s upper bound %d [%s] contradicts lower "
                    "bound %d [%s]" % (self.level, fld, value, provenance,
                                       self.lo[fld], self.prov_lo[fld]))
            if self.hi[fld] is None or value < self.hi[fld]:
                self.hi[fld] = value
                self.prov_hi[fld] = provenance
                self.chain.append(GonalityFact(self.level, fld, "upper",
                                               value, provenance))
                if fld == "Q":
                    self.apply("C", "upper", value,
                               provenance + " + gon_C <= gon_Q")

    def verdict(self, genus: int) -> Verdict:
        resolved = (self.hi["Q"] is not None and self.lo["Q"] == self.hi["Q"]
                    and self.hi["C"] is not None
                    and self.lo["C"] == self.hi["C"])
        return Verdict(self.level, genus, (self.lo["Q"], self.hi["Q"]),
                       (self.lo["C"], self.hi["C"]), list(self.chain),
                       resolved)


# --------------------------------------------------------------------------
# Facts file


@dataclass
class LevelFacts:
    gonality: list[GonalityFact] = field(default_factory=list)
    beta22: int | None = None
    beta22_genus: int | None = None
    beta22_source: str = ""
    statuses: dict[str, str] = field(default_factory=dict)  # status -> source


@dataclass
class FactsFile:
    by_level: dict[int, LevelFacts] = field(default_factory=dict)

    def level(self, n: int) -> LevelFacts:
        return self.by_level.get(n, _EMPTY_FACTS)


_EMPTY_FACTS = LevelFacts()


def load_facts(path) -> FactsFile:
    with open(path) as fh:
        doc = json.load(fh)
    out = FactsFile()
    for rec in doc["facts"]:
        n = rec["level"]
        claim = rec["claim"]
        source = rec["source"]
        if not source:
            raise DataIntegrityError("fact for level %d lacks a citation" % n)
        lf = out.by_level.setdefault(n, LevelFacts())
        if "field" in claim:
            lf.gonality.append(GonalityFact(n, claim["field"], claim["kind"],
                                            claim["value"], source))
        elif "beta22" in claim:
            if lf.beta22 is not None and lf.beta22 != claim["beta22"]:
                raise DataIntegrityError(
                    "conflicting beta22 records for level %d" % n)
            lf.beta22 = claim["beta22"]
            lf.beta22_genus = claim["genus"]
            lf.beta22_source = source
        elif "status" in claim:
            if claim["status"] not in ("hyperelliptic", "trigonal"):
                raise DataIntegrityError("unknown status %r for level %d"
                                         % (claim["status"], n))
            lf.statuses[claim["status"]] = source
        else:
            raise DataIntegrityError("unrecognized claim shape for level %d"
                                     % n)
    return out


# --------------------------------------------------------------------------
# Database plumbing


def _extend_database(db: NewformDatabase, N: int, config: Config) -> None:
    """Add all divisor levels of N to db (raises MissingDataError offline
    when a fixture is absent)."""
    from .arith import divisors
    for m in divisors(N):
        if m in db:
            continue
        if m == 1:
            db.levels[1] = []
            db.provenance[1] = "trivial"
            continue
        db.levels[m] = fetch_level(m, config)
        db.provenance[m] = "store"


# --------------------------------------------------------------------------
# Sieve


@dataclass
class SieveReport:
    max_level: int
    genus_le3: list[int]
    genus4: list[int]
    ht_dropped: list[int]
    survivors: list[int]               # after all drops and the index sieve
    abramovich_eliminated: list[int]
    final_survivors: list[int]
    missing_data: list[int]
    complete: bool

    def to_json(self) -> dict:
        return {
            "max_level": self.max_level,
            "counts": {
                "genus_le3": len(self.genus_le3),
                "genus4": len(self.genus4),
                "hyperelliptic_trigonal_dropped": len(self.ht_dropped),
                "survivors": len(self.survivors),
                "abramovich_eliminated": len(self.abramovich_eliminated),
                "final_survivors": len(self.final_survivors),
            },
            "genus4": self.genus4,
            "ht_dropped": self.ht_dropped,
            "survivors": self.survivors,
            "abramovich_eliminated": self.abramovich_eliminated,
            "final_survivors": self.final_survivors,
            "missing_data": self.missing_data,
            "complete": self.complete,
        }


def sieve(config: Config | None = None, max_level: int | None = None,
          db: NewformDatabase | None = None) -> SieveReport:
    """Narrow all candidate levels <= max_level to the survivor set.

    Pipeline per level: skip prime powers (covered by prior work on the
    plus quotient); skip levels the index bound already excludes from
    degree-4 maps; compute the genus and drop genus <= 3 (gonality <= 3),
    genus 4 (handled by the ingested genus-4 classification) and the known
    hyperelliptic/trigonal levels of genus >= 5; finally apply the
    degree-4 index bound to the survivors.
    """
    config = config or Config()
    if max_level is None:
        max_level = c_tetragonal_cutoff()
    if db is None:
        db = NewformDatabase(p_max=config.p_max)

    genus_le3, genus4, ht_dropped, survivors, missing = [], [], [], [], []
    for N in range(2, max_level + 1):
        if is_prime_power(N):
            continue
        excluded, _ = ogg_sieve_excludes(N, 4)
        if excluded:
            continue
        try:
            _extend_database(db, N, config)
        except MissingDataError:
            missing.append(N)
            continue
        g = genus_x0star(N, db)
        if g <= 3:
            genus_le3.append(N)
        elif g == 4:
            genus4.append(N)
        elif N in HT_HIGH_GENUS:
            ht_dropped.append(N)
        else:
            survivors.append(N)

    eliminated = [N for N in survivors if not abramovich_allows(N, 4)[0]]
    final = [N for N in survivors if N not in set(eliminated)]
    return SieveReport(max_level, genus_le3, genus4, ht_dropped, survivors,
                       eliminated, final, missing, not missing)


# --------------------------------------------------------------------------
# Per-level classification


def _apply_rule_results(state: _State, results) -> None:
    for res in results:
        text = res.conclusion
        if text == "no conclusion":
            continue
        prov = "rule:%s %s" % (res.rule, json.dumps(res.witnesses,
                                                    sort_keys=True))
        if text.startswith("gon_Q = gon_C ="):
            val = int(text.rsplit(" ", 1)[1])
            state.apply("Q", "exact", val, prov)
            state.apply("C", "exact", val, prov)
        elif "=" in text and "<" not in text and ">" not in text:
            fld = text.split()[0].split("_")[1]
            state.apply(fld, "exact", int(text.rsplit(" ", 1)[1]), prov)
        elif "<=" in text:
            fld = text.split()[0].split("_")[1]
            state.apply(fld, "upper", int(text.rsplit(" ", 1)[1]), prov)
        elif ">=" in text:
            fld = text.split()[0].split("_")[1]
            state.apply(fld, "lower", int(text.rsplit(" ", 1)[1]), prov)
        elif ">" in text:
            fld = text.split()[0].split("_")[1]
            state.apply(fld, "lower", int(text.rsplit(" ", 1)[1]) + 1, prov)
        else:
            raise DataIntegrityError("unparseable rule conclusion %r" % text)


def classify_level(N: int, db: NewformDatabase, facts: FactsFile,
                   schedule=None, _memo: dict | None = None) -> Verdict:
    """Tightest provable (gon_Q, gon_C) intervals for X0*(N), with the
    certificate chain that produced them."""
    if schedule is None:
        schedule = Config.schedule
    if _memo is None:
        _memo = {}
    if N in _memo:
        return _memo[N]

    genus = genus_x0star(N, db)
    lf = facts.level(N)
    state = _State(N)

    # genus rules: genus 0 with a rational cusp is a projective line;
    # genus 1 with a rational point and genus 2 both have gonality 2.
    if genus == 0:
        state.apply("Q", "exact", 1, "rule:genus-zero")
        state.apply("C", "exact", 1, "rule:genus-zero")
    elif genus <= 2:
        state.apply("Q", "exact", 2, "rule:genus-le-2 genus=%d" % genus)
        state.apply("C", "exact", 2, "rule:genus-le-2 genus=%d" % genus)
    else:
        state.apply("C", "lower", 2, "rule:positive-genus genus=%d" % genus)

    # ingested hyperelliptic/trigonal statuses
    if "hyperelliptic" in lf.statuses:
        src = "fact:%s" % lf.statuses["hyperelliptic"]
        state.apply("Q", "exact", 2, src)
        state.apply("C", "exact", 2, src)
    if "trigonal" in lf.statuses:
        src = "fact:%s" % lf.statuses["trigonal"]
        state.apply("C", "exact", 3, src)

    is_hyp = "hyperelliptic" in lf.statuses
    is_trig = "trigonal" in lf.statuses

    if is_prime_power(N):
        # covered by the cited prior work on the plus quotient: ingest,
        # do not compute.
        for f in lf.gonality:
            state.apply(f.field, f.kind, f.value, "fact:%s" % f.provenance)
        verdict = state.verdict(genus)
        _memo[N] = verdict
        return verdict

    # complete hyperelliptic/trigonal classification of these quotients:
    # every composite non-prime-power level of genus >= 5 outside the
    # known list has C-gonality at least 4.
    if genus >= 5 and N not in HT_HIGH_GENUS and not is_hyp and not is_trig:
        state.apply("C", "lower", 4,
                    "fact:prior:hyperelliptic-trigonal-classification")

    # ingested gonality facts.  Applied before the computed rules purely
    # as a short-circuit: interval merging is monotone and commutative,
    # so the final interval is order-independent; doing facts first lets
    # the point-count stage skip levels whose bounds are already tight.
    for f in lf.gonality:
        state.apply(f.field, f.kind, f.value, "fact:%s" % f.provenance)

    # generic upper bounds (every such quotient has a rational cusp)
    _apply_rule_results(state, poonen_upper_bounds(genus, True))

    # degree-2 quotient map when 4 || N: bounds transfer from level N/2
    if N % 4 == 0 and (N // 2) % 4 != 0 and N % 8 != 0:
        half = classify_level(N // 2, db, facts, schedule, _memo)
        h_lo, h_hi = half.gon_q
        if h_hi is not None:
            state.apply("Q", "upper", 2 * h_hi,
                        "rule:quotient-map-upper half=%d half_upper=%d"
                        % (N // 2, h_hi))
        if h_lo > 1:
            state.apply("Q", "lower", h_lo,
                        "rule:quotient-map-lower half=%d half_lower=%d"
                        % (N // 2, h_lo))

    # extra involutions: a quotient of genus <= 2 (with a rational point
    # below the rational cusp) has gonality <= 2, so the degree-2 map
    # gives gon_Q <= 4.
    # A computed quotient genus of 0 would force the curve itself to be
    # hyperelliptic, contradicting the ingested classification; it signals
    # an orbit configuration outside the lifting rules, so only genus 1
    # and 2 quotients are acted on.
    if N % 8 == 0:
        gq = v2_quotient_genus(N, db)
        if gq in (1, 2):
            state.apply("Q", "upper", 4,
                        "rule:v2-quotient quotient_genus=%d" % gq)
    if N % 9 == 0 and N % 27 != 0:
        try:
            gq = v3_quotient_genus(N, db)
        except DataIntegrityError:
            pass  # involution action not determined; rule not applicable
        else:
            if gq in (1, 2):
                state.apply("Q", "upper", 4,
                            "rule:v3-quotient quotient_genus=%d" % gq)

    # point-count exclusions over the (p, n) schedule.  Skipped when the
    # gon_Q interval is already a point or the lower bound is already
    # past everything a degree-4 exclusion can prove.
    if state.lo["Q"] < 5 and state.lo["Q"] != state.hi["Q"]:
        for p, n in schedule:
            if N % p == 0:
                continue
            try:
                count = count_points(N, p, n, db)
            except MissingDataError:
                # eigenvalue data at p not stored for some constituent;
                # the rule is best-effort and other rules or ingested
                # facts must cover the level
                continue
            for d in (2, 3, 4):
                excluded, res = point_count_excludes(N, d, p**n, count)
                if excluded:
                    _apply_rule_results(state, [res])
            if state.lo["Q"] >= 5:
                break

    # graded Betti number rules
    if lf.beta22 is not None:
        if lf.beta22_genus != genus:
            raise DataIntegrityError(
                "level %d: ingested beta22 record claims genus %d, computed "
                "genus is %d" % (N, lf.beta22_genus, genus))
        _apply_rule_results(
            state, betti_rules(genus, lf.beta22, is_hyp, is_trig, True))

    # tower rule (genus >= 10, rational cusp)
    if genus >= 10:
        if state.hi["C"] == 4 and state.lo["C"] == 4:
            state.apply("Q", "exact", 4, "rule:tower genus=%d" % genus)
        if state.lo["Q"] >= 5:
            state.apply("C", "lower", 5,
                        "rule:tower-contrapositive genus=%d" % genus)

    verdict = state.verdict(genus)
    _memo[N] = verdict
    return verdict


def classify_levels(levels, db: NewformDatabase, facts: FactsFile,
                    schedule=None, workers: int = 1) -> list[Verdict]:
    """Verdicts for every level, sorted by level (deterministic)."""
    levels = sorted(set(levels))
    memo: dict[int, Verdict] = {}
    if workers > 1:
        from concurrent.futures import ThreadPoolExecutor
        with ThreadPoolExecutor(max_workers=workers) as pool:
            list(pool.map(
                lambda n: classify_level(n, db, facts, schedule, memo),
                levels))
    else:
        for n in levels:
            classify_level(n, db, facts, schedule, memo)
    return [memo[n] for n in levels]


# --------------------------------------------------------------------------
# Golden-table verification


def _exact(verdict: Verdict, fld: str, value: int) -> bool:
    lo, hi = verdict.gon_q if fld == "Q" else verdict.gon_c
    return hi is not None and lo == hi == value


# (table, direction, level) -> errata id that must be present to excuse
# the diff.  direction "golden_only" = printed but not computed,
# "computed_only" = computed but not printed.
_ALLOWED_DIFFS = {
    ("tetragonal_q", "golden_only", 555): "555-double-listing",
    ("tetragonal_q", "golden_only", 356): "356-genus",
    ("tetragonal_q", "golden_only", 344): "344-v2-quotient",
    ("tetragonal_q", "computed_only", 316): "dup-216-g5-row",
}

# Levels the printed tables leave genuinely unresolved; they must come out
# of the classifier as open (not exact) and are excluded from set equality.
_EXPECTED_OPEN = {
    378: {"gon_c": 4, "errata": None},      # stated open in the source
    2040: {"gon_c": None, "errata": "count-2040-f49-proof-gap"},
    366: {"gon_c": None, "errata": "366-omitted"},
    344: {"gon_c": None, "errata": "344-v2-quotient"},
    279: {"gon_c": 4, "errata": "279-omitted"},
}


def verify_tables(verdicts, golden_dir, errata_path) -> dict:
    """Compare computed verdicts with the golden tables.

    Returns a report dict with per-table diffs; report["ok"] is True iff
    every diff is excused by a documented errata entry and the expected
    open levels are indeed open.
    """
    golden_dir = str(golden_dir)
    with open(errata_path) as fh:
        errata_ids = {e["id"] for e in json.load(fh)["errata"]}

    def load(name):
        with open("%s/%s" % (golden_dir, name)) as fh:
            return json.load(fh)

    trig_golden = set(load("thm_trigonal.json")["levels"])
    q_golden = set()
    for row in load("thm_tetragonal_q.json")["rows"].values():
        q_golden.update(row)
    c_golden = set()
    for row in load("thm_tetragonal_c_only.json")["rows"].values():
        c_golden.update(row)

    by_level = {v.level: v for v in verdicts}
    trig_computed = {n for n, v in by_level.items() if _exact(v, "Q", 3)}
    q_computed = {n for n, v in by_level.items() if _exact(v, "Q", 4)}
    c_computed = {n for n, v in by_level.items()
                  if _exact(v, "C", 4) and v.gon_q[0] >= 5}

    report = {"ok": True, "tables": {}, "open_levels": {}}

    def compare(name, golden, computed):
        diffs = []
        for n in sorted(golden - computed):
            need = _ALLOWED_DIFFS.get((name, "golden_only", n))
            covered = need is not None and need in errata_ids
            diffs.append({"level": n, "direction": "golden_only",
                          "covered_by": need if covered else None})
            if not covered:
                report["ok"] = False
        for n in sorted(computed - golden):
            need = _ALLOWED_DIFFS.get((name, "computed_only", n))
            covered = need is not None and need in errata_ids
            diffs.append({"level": n, "direction": "computed_only",
                          "covered_by": need if covered else None})
            if not covered:
                report["ok"] = False
        report["tables"][name] = {
            "golden_size": len(golden), "computed_size": len(computed),
            "diffs": diffs}

    compare("trigonal", trig_golden, trig_computed)
    compare("tetragonal_q", q_golden, q_computed)
    compare("tetragonal_c_only", c_golden, c_computed)

    for n, want in _EXPECTED_OPEN.items():
        v = by_level.get(n)
        entry = {"present": v is not None}
        if v is None:
            # not in classification scope; acceptable only with errata cover
            ok = want["errata"] in errata_ids if want["errata"] else False
            entry["covered_by"] = want["errata"] if ok else None
        else:
            open_q = not (v.gon_q[1] is not None
                          and v.gon_q[0] == v.gon_q[1])
            entry["gon_q"] = list(v.gon_q)
            entry["gon_c"] = list(v.gon_c)
            ok = open_q
            if want["gon_c"] is not None:
                ok = ok and _exact(v, "C", want["gon_c"])
            if not ok and want["errata"] in errata_ids:
                ok = True
                entry["covered_by"] = want["errata"]
        if not ok:
            report["ok"] = False
        report["open_levels"][str(n)] = entry
    return report
