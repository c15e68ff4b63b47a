"""Runtime configuration shared by the store, the classifier and the CLI."""

from __future__ import annotations

import os
from dataclasses import dataclass, field
from pathlib import Path


def _repo_root() -> Path:
    # src/alq/config.py -> repo root two levels up from the package dir
    return Path(__file__).resolve().parents[2]


@dataclass
class Config:
    cache_dir: Path = field(default_factory=lambda: Path(
        os.environ.get("ALQ_CACHE_DIR", str(_repo_root() / "cache"))))
    lmfdb_url: str = field(default_factory=lambda: os.environ.get(
        "ALQ_LMFDB_URL", "https://www.lmfdb.org/api"))
    offline: bool = field(default_factory=lambda: os.environ.get(
        "ALQ_OFFLINE", "") not in ("", "0", "false"))
    workers: int = 1
    # (p, n) schedule for point-count exclusion rules
    schedule: tuple[tuple[int, int], ...] = tuple(
        (p, n) for p in (2, 3, 5, 7, 11, 13) for n in (1, 2))
    fixture_dir: Path = field(default_factory=lambda: _repo_root() / "data" / "newforms")
    facts_path: Path = field(default_factory=lambda: _repo_root() / "facts" / "paper_facts.json")
    golden_dir: Path = field(default_factory=lambda: _repo_root() / "golden")
    models_dir: Path = field(default_factory=lambda: _repo_root() / "models")
    p_max: int = 100
