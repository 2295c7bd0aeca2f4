from __future__ import annotations

import json
import subprocess
import sys
from pathlib import Path

import pytest

from walgebra.cli import RunReport, UsageError, main, parse_level, run
from walgebra.scalar_core import K, Q

FIXTURES = Path(__file__).parent / "fixtures"


def golden(name: str) -> dict:
    return json.loads((FIXTURES / name).read_text())


def strip_time(report: RunReport) -> dict:
    obj = report.to_obj()
    obj.pop("wall_time")
    return obj


def test_miura_symbolic_central_charge():
    rep = run(["miura", "--n", "2", "--symbolic"])
    assert rep.passed
    assert rep.payload["central_charge"] == "(-6*k^2-11*k-4)/(k+2)"
    assert strip_time(rep) == golden("miura_n2_symbolic.json")


def test_characters_golden():
    rep = run(["characters", "--p", "3", "--q", "4", "--order", "8", "--list-classes"])
    assert strip_time(rep) == golden("characters_ising.json")
    assert rep.payload["classes"]["count"] == 3


def test_report_round_trip():
    rep = run(["finite-brst", "--n", "2", "--max-degree", "4"])
    text = rep.to_json()
    again = RunReport.from_json(text)
    assert again == rep
    assert again.to_json() == text


def test_report_schema_is_checked():
    obj = run(["lie", "--n", "2"]).to_obj()
    obj["schema_version"] = 99
    with pytest.raises(ValueError):
        RunReport.from_obj(obj)


def test_seed_makes_runs_reproducible():
    a = run(["--seed", "7", "vertex", "--preset", "affine-sl2", "--trials", "3"])
    b = run(["--seed", "7", "vertex", "--preset", "affine-sl2", "--trials", "3"])
    assert strip_time(a) == strip_time(b)


def test_parse_level():
    assert parse_level("k") == K
    assert parse_level("-1/2") == Q(-1, 2)
    with pytest.raises(UsageError):
        parse_level("one half")


@pytest.mark.parametrize("argv", [["--bogus"], ["miura", "--frobnicate"], ["characters", "--p", "2", "--q", "1"],
                                  ["jets"], []])
def test_usage_errors_exit_2(argv, capsys):
    assert main(argv) == 2


def test_certificate_failure_exits_1(monkeypatch, capsys):
    import walgebra.cli as cli

    failing = RunReport("lie", {}, 0.0, {"broken": False, "fine": True}, {}, 0)
    monkeypatch.setattr(cli, "_execute", lambda args: failing)
    assert main(["lie"]) == 1
    assert "broken" in capsys.readouterr().err


def test_out_file(tmp_path):
    out = tmp_path / "r.json"
    assert main(["--out", str(out), "jets", "--f", "x*y", "--order", "2"]) == 0
    rep = RunReport.from_json(out.read_text())
    assert rep.payload["generators"][1]["generator"] == "x_(-1)*y_(-2) + x_(-2)*y_(-1)"


def test_verify_all_quick_subprocess():
    proc = subprocess.run([sys.executable, "-m", "walgebra", "verify-all", "--profile", "quick"],
                          capture_output=True, text=True, timeout=300)
    assert proc.returncode == 0, proc.stderr
    rep = RunReport.from_json(proc.stdout)
    assert rep.passed and len(rep.certificates) >= 10
