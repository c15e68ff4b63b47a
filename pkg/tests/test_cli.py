import json

import pytest

from alq.cli import main


@pytest.fixture(autouse=True)
def offline_env(monkeypatch):
    monkeypatch.setenv("ALQ_OFFLINE", "1")


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_genus(capsys):
    code, out, _ = run(capsys, "genus", "360")
    assert code == 0 and "genus of X0*(360) = 7" in out


def test_count_by_q(capsys):
    code, out, _ = run(capsys, "count", "448", "--q", "9")
    assert code == 0 and "42" in out


def test_count_json(capsys):
    code, out, _ = run(capsys, "--json", "count", "448", "--p", "3", "--n", "2")
    assert code == 0
    doc = json.loads(out)
    assert doc == {"level": 448, "p": 3, "n": 2, "q": 9, "count": 42}


def test_enum_matches_count(capsys, cfg):
    model = str(cfg.models_dir / "x0star_378.model")
    code, out, _ = run(capsys, "--json", "enum", model, "--q", "5")
    assert code == 0
    enum_count = json.loads(out)["count"]
    code, out, _ = run(capsys, "--json", "count", "378", "--q", "5")
    assert code == 0
    assert json.loads(out)["count"] == enum_count


def test_quotient_genus(capsys):
    code, out, _ = run(capsys, "quotient-genus", "504", "--kind", "v3")
    assert code == 0 and "= 2" in out


def test_classify_table(capsys):
    code, out, _ = run(capsys, "classify", "360", "990")
    assert code == 0
    assert "resolved" in out


def test_usage_error_exit_2(capsys):
    code, _, err = run(capsys, "count", "448", "--q", "10")
    assert code == 2 and "prime power" in err


def test_bad_reduction_exit_2(capsys):
    code, _, err = run(capsys, "count", "360", "--q", "9")
    assert code == 2  # p divides the level: a usage error


def test_missing_fixture_exit_4(capsys):
    code, _, err = run(capsys, "fetch", "9973")
    assert code == 4 and "offline" in err


def test_argparse_usage_exit_2(capsys):
    assert main(["count"]) == 2  # missing required level argument


def test_out_file(tmp_path, capsys):
    dest = tmp_path / "genus.json"
    code, out, _ = run(capsys, "--out", str(dest), "genus", "448")
    assert code == 0
    assert json.loads(dest.read_text())["genus"] == 12
