import pytest

from alq.arith import divisors, tau
from alq.errors import DataIntegrityError, MissingDataError
from alq.newforms import fetch_level, load_database, orbits_dividing, validate_orbit
from alq.spectra import genus_x0


def test_fixture_orbits_validate(db):
    for level in (360, 414, 448, 990, 1200):
        for orbit in db.orbits(level):
            validate_orbit(orbit)
            assert orbit.level == level


def test_completeness_all_fixture_levels(db):
    """Sum of tau(N/M) * dim over orbits of levels M | N equals the genus
    of X0(N), whenever every divisor level is itself available."""
    checked = 0
    for n in db.levels:
        if any(d not in db for d in divisors(n)):
            continue
        total = sum(tau(n // m) * orbit.dim for m, orbit in orbits_dividing(n, db))
        assert total == genus_x0(n), "level %d" % n
        checked += 1
    assert checked > 500


def test_offline_missing_level_raises(cfg):
    with pytest.raises(MissingDataError):
        fetch_level(9973, cfg)


def test_load_database_divisor_closure(cfg):
    db = load_database([360], cfg)
    for d in divisors(360):
        assert d in db


def test_al_sign_defaults(db):
    orbit = db.orbits(360)[0]
    # sign at a good prime is +1 by convention
    assert orbit.sign(7) == 1
    # sign at a bad prime must be stored
    for p in (2, 3, 5):
        if orbit.level % p == 0:
            assert orbit.sign(p) in (-1, 1)


def test_missing_charpoly_is_missing_data(db):
    # some fixtures carry AL signs but no Hecke charpolys; asking for one
    # must be a MissingDataError, never a silent guess
    orbit = db.orbits(602)[0]
    assert orbit.ap_charpoly == {}
    with pytest.raises(MissingDataError):
        orbit.charpoly(3)
