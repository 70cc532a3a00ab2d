from __future__ import annotations

import json

import pytest

from vertexdescent import suites
from vertexdescent.arcjet import Membership
from vertexdescent.cli import EXIT_FAIL, EXIT_INPUT, EXIT_PASS, EXIT_RESOURCE, main
from vertexdescent.suites import InputError, SuiteConfig


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_arc_collapse_example(capsys):
    code, out, _ = run(capsys, "arc", "--jet", "collapse.jet", "--order", "1")
    assert code == EXIT_PASS
    assert "collapses: 1 ∈ I" in out
    assert "integral: True" in out


def test_adjunction_violation_fails(capsys):
    code, out, _ = run(capsys, "arc", "--jet", "collapse.jet", "--base-map", "0")
    assert code == EXIT_FAIL
    assert "D_1(t) = 1" in out


def test_descent_and_records(capsys, tmp_path):
    report = tmp_path / "r.jsonl"
    code, out, _ = run(capsys, "descent", "--lie", "heis1.lie", "--cocycle", "heis_shift.coc",
                       "--format", "records", "--report", str(report))
    assert code == EXIT_PASS
    lines = out.strip().splitlines()
    assert all(json.loads(x)["passed"] for x in lines)
    assert report.read_text().strip().splitlines() == lines
    code, out, _ = run(capsys, "report", str(report))
    assert code == EXIT_PASS and out.strip().endswith(f"{len(lines)}/{len(lines)} checks passed")


def test_failed_cocycle_exit_one(capsys, tmp_path):
    bad = tmp_path / "bad.coc"
    bad.write_text('m: 2\ncase: heisenberg\nmatrix: [[-1]]\ntranslation: ["t^(1/2)"]\n')
    code, out, _ = run(capsys, "descent", "--lie", "heis1.lie", "--cocycle", str(bad))
    assert code == EXIT_FAIL
    assert "[FAIL]" in out and "norm:" in out


def test_report_of_failures(capsys, tmp_path):
    path = tmp_path / "r.jsonl"
    rec = {"algebra": "A", "check": "c", "inputs": {}, "passed": False, "mismatch": {"lhs": "1", "rhs": "0"}}
    path.write_text(json.dumps(rec) + "\n")
    code, out, _ = run(capsys, "report", str(path))
    assert code == EXIT_FAIL and "lhs: 1" in out
    path.write_text("not json\n")
    assert run(capsys, "report", str(path))[0] == EXIT_INPUT


@pytest.mark.parametrize("argv", [
    ["verify", "affine", "--lie", "nosuch.lie"],
    ["verify", "loop", "--lie", "sl2.lie", "--aut", "neg.aut"],
    ["descent", "--lie", "heis1.lie"],
    ["arc"],
    ["verify", "axioms", "--ring", "T3"],
    ["verify", "affine", "--lie", "sl2.lie", "--level", "-2"],
])
def test_input_errors(capsys, argv):
    code, _, err = run(capsys, *argv)
    assert code == EXIT_INPUT
    assert err.startswith("input error")


def test_bad_window_is_rejected_by_parser(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["verify", "axioms", "--window", "3:1"])
    assert exc.value.code == 2


def test_resource_limit_keeps_partial_report(capsys, tmp_path, monkeypatch):
    monkeypatch.setattr(suites.arcjet, "collapses", lambda ideal: Membership("inconclusive", reason="budget"))
    report = tmp_path / "r.jsonl"
    code, out, err = run(capsys, "arc", "--jet", "sqrt1.jet", "--report", str(report))
    assert code == EXIT_RESOURCE
    assert "resource limit" in err and "(stopped)" in out
    assert len(report.read_text().splitlines()) == 2


def test_suite_config_validation():
    with pytest.raises(InputError):
        SuiteConfig(suite="axioms", degree=-1)
    with pytest.raises(InputError):
        SuiteConfig(suite="nosuch")
    assert list(SuiteConfig(suite="axioms", window=(-1, 1)).modes) == [-1, 0, 1]


def test_reports_are_deterministic(capsys):
    first = run(capsys, "verify", "diffaut", "--format", "records")[1]
    second = run(capsys, "verify", "diffaut", "--format", "records")[1]
    assert first == second and first
