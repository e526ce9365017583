import csv
import io
import json

import pytest

from specflow import cli
from specflow.errors import ConfigError


@pytest.fixture(autouse=True)
def no_cache(monkeypatch):
    # every run recomputes unless a test opts into the cache
    monkeypatch.delenv("SPECFLOW_CACHE_DIR", raising=False)


def _run(capsys, *argv):
    code = cli.main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def _table(text):
    lines = text.splitlines()
    assert lines[0].startswith("# ")
    meta = json.loads(lines[0][2:])
    rows = list(csv.reader(io.StringIO("\n".join(lines[1:]))))
    return meta, rows[0], rows[1:]


def test_zeros_first_five(capsys):
    code, out, _ = _run(capsys, "zeros", "--family", "zeta", "--n", "1..5", "--sigma", "0.5", "--delta", "1e-6")
    assert code == 0
    meta, header, rows = _table(out)
    assert header == list(cli.SCHEMAS["zeros"])
    refs = [14.134724, 21.022039, 25.010857, 30.424875, 32.935061]
    assert [int(r[0]) for r in rows] == [1, 2, 3, 4, 5]
    assert all(abs(float(r[3]) - ref) < 1e-5 for r, ref in zip(rows, refs))
    assert all(r[5] == "converged" for r in rows)
    assert meta["config"]["n"] == "1..5" and meta["config"]["command"] == "zeros"


def test_empty_range(capsys):
    code, out, _ = _run(capsys, "zeros", "--n", "1..0")
    _, header, rows = _table(out)
    assert code == 0 and rows == [] and header == list(cli.SCHEMAS["zeros"])


def test_config_errors_exit_1(capsys, tmp_path):
    assert _run(capsys, "zeros", "--n", "1..3", "--sigma", "0.3")[0] == 1
    assert _run(capsys, "zeros", "--bogus")[0] == 1
    assert _run(capsys, "nosuch")[0] == 1
    assert _run(capsys, "zeros", "--n", "x..y")[0] == 1
    bad = tmp_path / "c.json"
    bad.write_text(json.dumps({"unknown_key": 1}))
    assert _run(capsys, "zeros", "--config", str(bad))[0] == 1
    bad.write_text("[1, 2]")
    assert _run(capsys, "zeros", "--config", str(bad))[0] == 1


def test_numerical_failure_exit_2(capsys):
    # the tau table is limited; an oversize request is a numerical failure, not a config error
    assert _run(capsys, "tau", "--n-max", str(10**9))[0] == 2


def test_precedence(tmp_path):
    cfg = tmp_path / "c.json"
    cfg.write_text(json.dumps({"n": "3..4", "delta": 1e-7, "sigma": 0.7}))
    merged = cli.resolve(["zeros", "--config", str(cfg), "--sigma", "0.6"])
    assert merged["n"] == "3..4" and merged["delta"] == 1e-7 and merged["sigma"] == 0.6
    assert merged["family"] == "zeta" and merged["workers"] == 1
    with pytest.raises(ConfigError):
        cli.resolve(["zeros", "--workers", "0"])


def test_json_format(capsys, tmp_path):
    path = tmp_path / "out.json"
    assert _run(capsys, "zeros", "--n", "1..2", "--format", "json", "--output", str(path))[0] == 0
    doc = json.loads(path.read_text())
    assert doc["columns"] == list(cli.SCHEMAS["zeros"]) and len(doc["rows"]) == 2
    assert doc["metadata"]["config"]["format"] == "json"


def test_tau_table(capsys):
    code, out, _ = _run(capsys, "tau", "--n-max", "5")
    _, header, rows = _table(out)
    assert code == 0 and header == ["n", "tau"]
    assert [int(r[1]) for r in rows] == [1, -24, 252, -1472, 4830]


def test_dh_scan_report(capsys):
    code, out, _ = _run(capsys, "dh-scan", "--n", "40..50")
    assert code == 0
    meta, header, rows = _table(out)
    rep = meta["result"]
    assert rep["missing"] == [44, 45]
    assert abs(rep["zero"]["re"] - 0.8085171825) < 1e-6 and abs(rep["zero"]["im"] - 85.6993484854) < 1e-6
    assert round(rep["counts"]["86.0"] - rep["counts"]["85.0"]) == 2
    assert {r[5] for r in rows if int(r[0]) in (44, 45)} == {"no_solution"}


@pytest.mark.parametrize("argv", [
    ["zeros", "--n", "1..40"],
    ["criterion", "--sigma", "0.75", "--t", "10.5..20", "--step", "0.1"],
    ["flow", "--n", "1..2", "--step", "0.05"],
])
def test_byte_identical_across_workers(capsys, argv):
    bodies = []
    for w in ("1", "2"):
        code, out, _ = _run(capsys, *argv, "--workers", w)
        assert code == 0
        bodies.append(out.split("\n", 1)[1])
    assert bodies[0] == bodies[1]
    # a repeat with the same config reproduces the whole file
    again = _run(capsys, *argv, "--workers", "2")[1]
    assert again.split("\n", 1)[1] == bodies[1]


def test_schemas_for_every_command(capsys):
    code, out, _ = _run(capsys, "criterion", "--sigma", "0.75", "--t", "1000..1001", "--step", "0.5")
    _, header, rows = _table(out)
    assert code == 0 and header == ["t", "lhs", "rhs", "margin", "near_pole"] and len(rows) == 3
    code, out, _ = _run(capsys, "flow", "--n", "1..1", "--sigma-start", "1.2", "--step", "0.05")
    _, header, rows = _table(out)
    assert header == ["n", "sigma", "energy", "dE_dsigma", "status"]
    assert rows[-1][4] == "reached_line"


def test_cached_rerun_identical(capsys, tmp_path, monkeypatch):
    fresh = _run(capsys, "zeros", "--n", "1..30")[1]
    monkeypatch.setenv("SPECFLOW_CACHE_DIR", str(tmp_path))
    first = _run(capsys, "zeros", "--n", "1..30")[1]
    assert list(tmp_path.iterdir())
    cached = _run(capsys, "zeros", "--n", "1..30")[1]
    assert fresh == first == cached
