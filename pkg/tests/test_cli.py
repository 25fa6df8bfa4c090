import json

import pytest
from click.testing import CliRunner

from qmpg.cli import CACHE_VERSION, main
from qmpg.suites import Check

A1 = {"cartan": {"series": "A", "rank": 1}, "lattice": "weight", "u": [["0"]]}
A2 = {"cartan": {"series": "A", "rank": 2}, "lattice": "weight", "u": [["0", "1/2"], ["-1/2", "0"]]}
SL3 = {"cartan": {"series": "A", "rank": 2}, "symbols": ["alpha"], "u": [["0", "alpha"], ["-alpha", "0"]]}


@pytest.fixture
def cfg(tmp_path):
    def write(data, name="cfg.json"):
        p = tmp_path / name
        p.write_text(json.dumps(data))
        return str(p)
    return write


def run(*args, env=None):
    r = CliRunner().invoke(main, list(args), env=env or {"QMPG_CACHE": ""})
    return r


def recursions(result):
    line = [l for l in result.stderr.splitlines() if l.startswith("pairing recursions:")][-1]
    return int(line.split(":")[1])


def test_leaves_rank_one(cfg):
    r = run("leaves", "--config", cfg(A1), "--format", "json")
    assert r.exit_code == 0
    (table,) = json.loads(r.stdout)
    rows = {(x[0], x[1]): (int(x[4]), int(x[5])) for x in table["rows"]}
    assert rows == {("e", "e"): (0, 1), ("e", "s1"): (2, 0), ("s1", "e"): (2, 0), ("s1", "s1"): (2, 1)}
    assert table["meta"]["algebraicity"] == "algebraic, m = 1"


def test_leaves_non_algebraic(cfg):
    r = run("leaves", "--config", cfg(SL3))
    assert r.exit_code == 0
    assert "non-algebraic" in r.stdout
    assert "zw_dim" not in r.stdout


def test_formats_agree(cfg):
    path = cfg(A2)
    j = json.loads(run("leaves", "--config", path, "--format", "json").stdout)
    csv_out = run("leaves", "--config", path, "--format", "csv").stdout
    text = run("leaves", "--config", path).stdout
    assert len(j[0]["rows"]) == 36
    assert csv_out.count("\n") == 36 + 1 + 1 + len(j[0]["meta"])
    assert text.startswith("== symplectic leaves ==")


def test_json_round_trip(cfg):
    r = run("pairing", "2,1", "--config", cfg(A2), "--format", "json")
    data = json.loads(r.stdout)
    assert json.dumps(data, indent=2, sort_keys=True) + "\n" == r.stdout
    assert data[0]["meta"]["rank"] == "2"
    assert len(data[1]["rows"]) == 1  # one Serre relation


def test_module_and_ideals(cfg):
    r = run("module", "1,1", "--config", cfg(A2), "--format", "json")
    assert json.loads(r.stdout)[0]["meta"]["dimension"] == "8"
    r = run("ideals", "s1|e", "1", "--config", cfg(A1), "--format", "json")
    meta = json.loads(r.stdout)[0]["meta"]
    assert (meta["I+ generators"], meta["I- generators"]) == ("0", "1")


def test_user_errors(cfg):
    assert run("module", "--config", cfg(A2), "--", "-1,0").exit_code == 1
    assert run("module", "1", "--config", cfg(A2)).exit_code != 0
    assert run("ideals", "s7|e", "1,0", "--config", cfg(A2)).exit_code == 1
    r = run("pairing", "4,4", "--config", cfg(A2))
    assert r.exit_code == 1 and "cap" in r.stderr
    assert run("verify", "--suite", "nope", "--config", cfg(A2)).exit_code == 1
    bad = cfg({"cartan": {"series": "A", "rank": 2}, "u": [["0", "1"], ["1", "0"]]}, "bad.json")
    r = run("leaves", "--config", bad)
    assert r.exit_code == 1 and "invalid config" in r.stderr


def test_verify_exit_status(cfg, monkeypatch):
    path = cfg(A1)
    assert run("verify", "--suite", "pairing,double", "--config", path).exit_code == 0
    import qmpg.suites as suites
    monkeypatch.setitem(suites.SUITE_FUNCS, "norms", lambda ctx: [Check("norms", "forced", False)])
    r = run("verify", "--suite", "norms", "--config", path, "--format", "csv")
    assert r.exit_code == 1
    assert "norms,forced,FAIL" in r.stdout


def test_crashing_suite_is_a_failure(cfg, monkeypatch):
    import qmpg.suites as suites

    def boom(ctx):
        raise RuntimeError("boom")
    monkeypatch.setitem(suites.SUITE_FUNCS, "norms", boom)
    r = run("verify", "--suite", "norms", "--config", cfg(A1))
    assert r.exit_code == 1 and "RuntimeError: boom" in r.stdout


def test_cache_warm_run_and_determinism(cfg, tmp_path):
    path = cfg(A2)
    cache = str(tmp_path / "pairs.jsonl")
    cold = run("verify", "--suite", "serre,kprop", "--config", path, "--cache", cache)
    assert cold.exit_code == 0 and recursions(cold) > 0
    with open(cache) as fh:
        assert json.loads(fh.readline()) == {"version": CACHE_VERSION}
    warm = run("verify", "--suite", "serre,kprop", "--config", path, "--cache", cache)
    assert recursions(warm) == 0
    assert warm.stdout == cold.stdout
    par = run("verify", "--suite", "serre,kprop", "--config", path, "--jobs", "3")
    assert par.stdout == cold.stdout


def test_cache_from_environment(cfg, tmp_path):
    path = cfg(A2)
    cache = str(tmp_path / "env.jsonl")
    run("pairing", "2,2", "--config", path, env={"QMPG_CACHE": cache})
    r = run("pairing", "2,2", "--config", path, env={"QMPG_CACHE": cache})
    assert recursions(r) == 0


def test_cache_version_mismatch_and_corruption(cfg, tmp_path):
    path = cfg(A2)
    cache = tmp_path / "c.jsonl"
    cache.write_text(json.dumps({"version": CACHE_VERSION + 1}) + "\n")
    r = run("pairing", "2,1", "--config", path, "--cache", str(cache))
    assert r.exit_code == 0 and "version" in r.stderr and recursions(r) > 0
    cache.write_text("{not json\n")
    r = run("pairing", "2,1", "--config", path, "--cache", str(cache))
    assert r.exit_code == 0 and "corrupt" in r.stderr
    # the run rewrote a valid cache
    r = run("pairing", "2,1", "--config", path, "--cache", str(cache))
    assert recursions(r) == 0 and r.stderr.count("warning") == 0


def test_cache_shared_between_types(cfg, tmp_path):
    cache = str(tmp_path / "shared.jsonl")
    run("pairing", "2,1", "--config", cfg(A2), "--cache", cache)
    run("pairing", "3", "--config", cfg(A1, "a1.json"), "--cache", cache)
    assert recursions(run("pairing", "2,1", "--config", cfg(A2), "--cache", cache)) == 0
    assert recursions(run("pairing", "3", "--config", cfg(A1, "a1.json"), "--cache", cache)) == 0
