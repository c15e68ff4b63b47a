import json
from pathlib import Path

import pytest

from alq.config import Config
from alq.newforms import load_database

REPO = Path(__file__).resolve().parents[1]


@pytest.fixture(scope="session")
def cfg() -> Config:
    c = Config()
    c.offline = True
    return c


@pytest.fixture(scope="session")
def golden():
    def load(name):
        with open(REPO / "golden" / name) as fh:
            return json.load(fh)
    return load


@pytest.fixture(scope="session")
def db(cfg):
    """Database over every shipped fixture level (loads lazily per test
    would be slower; a single shared load is cheap)."""
    levels = sorted(int(p.stem) for p in (REPO / "data" / "newforms").glob("*.json"))
    return load_database(levels, cfg)
