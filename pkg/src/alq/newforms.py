"""Weight-2 trivial-character newform orbit store.

Orbits are acquired from the LMFDB web service (online mode) or from
fixtures shipped in-repo (offline mode), validated, and cached one JSON
file per level.  All a_p data is normalized to monic integer
characteristic polynomials at ingest time, so nothing downstream ever
touches algebraic numbers.

Cache layout: ``cache/newforms/<M>.json`` with
``{"level": M, "source": "...", "orbits": [{"label", "dim",
"al_signs": [[p, s], ...], "ap_charpoly": {"<p>": [c0, ..., 1]}}]}``,
polynomial coefficients little-endian, leading coefficient 1.
"""

from __future__ import annotations

import json
import os
import re
import tempfile
import time
from dataclasses import dataclass, field
from fractions import Fraction
from math import isqrt
from pathlib import Path

from . import arith
from .config import Config
from .errors import DataIntegrityError, MissingDataError, NetworkError

_LABEL_RE = re.compile(r"^(\d+)\.(\d+)\.([a-z]+)\.([a-z]+)$")


@dataclass(frozen=True)
class NewformOrbit:
    """One Galois orbit of weight-2 newforms of exact level `level`."""

    label: str
    level: int
    dim: int
    al_signs: tuple[tuple[int, int], ...]  # (prime, sign), primes ascending
    ap_charpoly: dict[int, tuple[int, ...]]  # p -> little-endian monic coeffs

    def sign(self, p: int) -> int:
        """Atkin-Lehner sign at p; +1 when p does not divide the level."""
        for q, s in self.al_signs:
            if q == p:
                return s
        if self.level % p == 0:
            raise DataIntegrityError("%s: no AL sign stored at %d" % (self.label, p))
        return 1

    def charpoly(self, p: int) -> tuple[int, ...]:
        try:
            return self.ap_charpoly[p]
        except KeyError:
            raise MissingDataError(
                "%s: a_%d characteristic polynomial not stored" % (self.label, p))


@dataclass
class NewformDatabase:
    levels: dict[int, list[NewformOrbit]] = field(default_factory=dict)
    provenance: dict[int, str] = field(default_factory=dict)
    p_max: int = 100

    def __contains__(self, level: int) -> bool:
        return level in self.levels

    def orbits(self, level: int) -> list[NewformOrbit]:
        try:
            return self.levels[level]
        except KeyError:
            raise MissingDataError("level %d not loaded" % level)


def _eval_at(coeffs, x: Fraction) -> Fraction:
    acc = Fraction(0)
    for c in reversed(coeffs):
        acc = acc * x + c
    return acc


def _hasse_ok(coeffs, p: int) -> bool:
    """No real root of the monic polynomial exceeds 2*sqrt(p) in magnitude.

    Checked at a rational r slightly above 2*sqrt(p): a monic polynomial
    with a real root > r would be <= 0 somewhere past it, so P(r) and the
    leading behaviour must agree in sign; same at -r with alternating sign.
    """
    k = 10**6
    r = Fraction(isqrt(4 * p * k * k) + 1, k)
    d = len(coeffs) - 1
    if _eval_at(coeffs, r) <= 0:
        return False
    left = _eval_at(coeffs, -r)
    return (left > 0) if d % 2 == 0 else (left < 0)


def validate_orbit(orbit: NewformOrbit) -> None:
    m = _LABEL_RE.match(orbit.label)
    if not m:
        raise DataIntegrityError("bad label %r" % orbit.label)
    if int(m.group(1)) != orbit.level or int(m.group(2)) != 2:
        raise DataIntegrityError("label %s inconsistent with level/weight" % orbit.label)
    if orbit.dim < 1:
        raise DataIntegrityError("%s: nonpositive dimension" % orbit.label)
    fac = dict(arith.factorize(orbit.level))
    sign_ps = [p for p, _ in orbit.al_signs]
    if sorted(sign_ps) != sorted(fac):
        raise DataIntegrityError("%s: AL signs must cover exactly the primes "
                                 "dividing the level" % orbit.label)
    if any(s not in (1, -1) for _, s in orbit.al_signs):
        raise DataIntegrityError("%s: AL sign outside {+1,-1}" % orbit.label)
    for p, coeffs in orbit.ap_charpoly.items():
        if len(coeffs) != orbit.dim + 1 or coeffs[-1] != 1:
            raise DataIntegrityError("%s: a_%d charpoly not monic of degree %d"
                                     % (orbit.label, p, orbit.dim))
        if any(not isinstance(c, int) for c in coeffs):
            raise DataIntegrityError("%s: non-integer coefficient at p=%d"
                                     % (orbit.label, p))
        if p not in fac:
            if not _hasse_ok(coeffs, p):
                raise DataIntegrityError("%s: a_%d violates the Hasse bound"
                                         % (orbit.label, p))
        elif fac[p] == 1 and orbit.dim == 1:
            lam = orbit.sign(p)
            if tuple(coeffs) != (lam, 1):
                raise DataIntegrityError("%s: a_%d must equal -lambda_%d"
                                         % (orbit.label, p, p))
        elif fac[p] >= 2:
            if any(c != 0 for c in coeffs[:-1]):
                raise DataIntegrityError("%s: a_%d must vanish (p^2 | level)"
                                         % (orbit.label, p))


def _orbit_from_json(rec) -> NewformOrbit:
    orbit = NewformOrbit(
        label=rec["label"],
        level=int(rec["label"].split(".")[0]),
        dim=int(rec["dim"]),
        al_signs=tuple(sorted((int(p), int(s)) for p, s in rec["al_signs"])),
        ap_charpoly={int(p): tuple(int(c) for c in cs)
                     for p, cs in rec["ap_charpoly"].items()},
    )
    validate_orbit(orbit)
    return orbit


def _orbit_to_json(orbit: NewformOrbit) -> dict:
    return {
        "label": orbit.label,
        "dim": orbit.dim,
        "al_signs": [[p, s] for p, s in orbit.al_signs],
        "ap_charpoly": {str(p): list(cs)
                        for p, cs in sorted(orbit.ap_charpoly.items())},
    }


def _load_level_file(path: Path, level: int) -> tuple[list[NewformOrbit], str]:
    with open(path, encoding="utf-8") as fh:
        doc = json.load(fh)
    if doc.get("level") != level:
        raise DataIntegrityError("%s: declared level %r != %d"
                                 % (path, doc.get("level"), level))
    orbits = [_orbit_from_json(rec) for rec in doc["orbits"]]
    for orb in orbits:
        if orb.level != level:
            raise DataIntegrityError("%s: orbit %s at wrong level" % (path, orb.label))
    return orbits, str(doc.get("source", "unknown"))


def _atomic_write(path: Path, doc: dict) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            json.dump(doc, fh, indent=1)
            fh.write("\n")
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


_last_request = [0.0]


def _fetch_remote(level: int, config: Config) -> list[NewformOrbit]:
    """Fetch one level from the LMFDB API and normalize to orbit records."""
    import httpx  # imported lazily so offline use never needs it

    def get(url, params):
        # polite client: >= 500 ms between requests, exponential backoff
        for attempt in range(5):
            wait = _last_request[0] + 0.5 - time.monotonic()
            if wait > 0:
                time.sleep(wait)
            _last_request[0] = time.monotonic()
            try:
                resp = httpx.get(url, params=params, timeout=30.0)
                resp.raise_for_status()
                return resp.json()
            except Exception:
                if attempt == 4:
                    raise
                time.sleep(2.0**attempt)
        raise AssertionError("unreachable")

    try:
        doc = get(config.lmfdb_url.rstrip("/") + "/mf_newforms/", {
            "level": "i%d" % level,
            "weight": "i2",
            "char_order": "i1",
            "_fields": "label,dim,atkin_lehner_eigenvals,traces",
            "_format": "json",
        })
        rows = doc.get("data", [])
        orbits = []
        for row in rows:
            cps = get(config.lmfdb_url.rstrip("/") + "/mf_hecke_charpolys/", {
                "label": row["label"],
                "_fields": "p,charpoly_factorization",
                "_format": "json",
            }).get("data", [])
            ap = {}
            for rec in cps:
                p = int(rec["p"])
                if p > config.p_max:
                    continue
                # expand the stored factorization into one monic polynomial
                coeffs = [1]
                for factor, mult in rec["charpoly_factorization"]:
                    for _ in range(int(mult)):
                        coeffs = _poly_mul(coeffs, [int(c) for c in factor])
                ap[p] = tuple(coeffs)
            orbits.append(NewformOrbit(
                label=row["label"],
                level=level,
                dim=int(row["dim"]),
                al_signs=tuple(sorted((int(p), int(s))
                               for p, s in row["atkin_lehner_eigenvals"])),
                ap_charpoly=ap,
            ))
    except Exception as exc:
        raise NetworkError("LMFDB fetch for level %d failed: %s" % (level, exc))
    for orb in orbits:
        validate_orbit(orb)
    return orbits


def _poly_mul(a, b):
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] += x * y
    return out


def fetch_level(level: int, config: Config | None = None) -> list[NewformOrbit]:
    """Validated orbits for exact level `level`, cached before return."""
    if level < 1:
        raise ValueError("level must be positive")
    config = config or Config()
    if level == 1:
        return []
    cache_path = config.cache_dir / "newforms" / ("%d.json" % level)
    if cache_path.exists():
        return _load_level_file(cache_path, level)[0]
    fixture = config.fixture_dir / ("%d.json" % level)
    if fixture.exists():
        orbits, source = _load_level_file(fixture, level)
        _atomic_write(cache_path, {"level": level, "source": source,
                                   "orbits": [_orbit_to_json(o) for o in orbits]})
        return orbits
    if config.offline:
        raise MissingDataError("offline and no fixture for level %d" % level)
    orbits = _fetch_remote(level, config)
    _atomic_write(cache_path, {"level": level, "source": "network",
                               "orbits": [_orbit_to_json(o) for o in orbits]})
    return orbits


def load_database(levels, config: Config | None = None) -> NewformDatabase:
    """Database holding every requested level and all of their divisors."""
    config = config or Config()
    db = NewformDatabase(p_max=config.p_max)
    want = set()
    for n in levels:
        want.update(arith.divisors(n))
    for m in sorted(want):
        if m == 1:
            db.levels[1] = []
            db.provenance[1] = "trivial"
            continue
        db.levels[m] = fetch_level(m, config)
        db.provenance[m] = "fixture" if (config.fixture_dir / ("%d.json" % m)).exists() \
            else "network"
    return db


def orbits_dividing(N: int, db: NewformDatabase) -> list[tuple[int, NewformOrbit]]:
    """All orbits whose level divides N, as (level, orbit) pairs."""
    missing = [m for m in arith.divisors(N) if m not in db]
    if missing:
        raise MissingDataError("levels absent from database: %s" % missing)
    out = []
    for m in arith.divisors(N):
        for orb in db.orbits(m):
            out.append((m, orb))
    return out
