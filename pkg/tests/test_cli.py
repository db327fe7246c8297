"""CLI: exit codes, report files, determinism, subcommand contracts."""

import json
import os
import subprocess
import sys

import pytest

from clpoisson.cli import main

DATA = os.path.join(os.path.dirname(__file__), "data")


def run_cli(args):
    return main(args)


def test_verify_appendix_passes(tmp_path, capsys):
    out = tmp_path / "report.jsonl"
    code = run_cli(["verify", "appendix", "--seed", "3", "--out", str(out)])
    assert code == 0
    lines = out.read_text().splitlines()
    assert len(lines) >= 5
    records = [json.loads(l) for l in lines]
    assert all(r["status"] == "pass" for r in records)
    assert {"check", "status", "residual_terms", "scalars", "kernel_dims", "millis"} <= set(
        records[0]
    )


def test_verify_unknown_target_is_config_error(capsys):
    with pytest.raises(SystemExit) as exc:
        run_cli(["verify", "nonsense"])
    assert exc.value.code == 2


def test_verify_bad_b_is_config_error(capsys):
    code = run_cli(["verify", "identity", "--b", "1,2"])
    assert code == 2


def test_verify_budget_exceeded_exit_code(tmp_path, capsys):
    out = tmp_path / "r.jsonl"
    code = run_cli(
        ["verify", "schouten", "--budget-seconds", "0", "--out", str(out)]
    )
    assert code == 3
    records = [json.loads(l) for l in out.read_text().splitlines()]
    assert all(r["status"] == "budget_exceeded" for r in records)


def test_verify_reports_deterministic_modulo_timing(tmp_path, capsys):
    out1, out2 = tmp_path / "a.jsonl", tmp_path / "b.jsonl"
    assert run_cli(["verify", "appendix", "--seed", "11", "--out", str(out1)]) == 0
    assert run_cli(["verify", "appendix", "--seed", "11", "--out", str(out2)]) == 0

    def normalize(path):
        records = [json.loads(l) for l in path.read_text().splitlines()]
        for r in records:
            r.pop("millis")
        return records

    assert normalize(out1) == normalize(out2)


def test_report_file_is_append_only(tmp_path, capsys):
    out = tmp_path / "r.jsonl"
    run_cli(["verify", "appendix", "--seed", "1", "--out", str(out)])
    n1 = len(out.read_text().splitlines())
    run_cli(["verify", "appendix", "--seed", "1", "--out", str(out)])
    assert len(out.read_text().splitlines()) == 2 * n1


def test_chain_subcommand_examples(capsys):
    code = run_cli(["chain", "--seed", "x0", "--steps", "2",
                    "--b", "1,0,0,0,0,0,0,0,0,0"])
    assert code == 0
    captured = capsys.readouterr()
    assert "f1 =" in captured.out and "f2 =" in captured.out
    assert "kernel dims per step: [2, 3]" in captured.out


def test_chain_seed_C3_gives_zero_continuation(capsys):
    code = run_cli(["chain", "--seed", "C3", "--steps", "1",
                    "--b", "1,0,0,0,0,0,0,0,0,0"])
    assert code == 0
    captured = capsys.readouterr()
    assert "f1 = 0" in captured.out


def test_chain_rejects_non_casimir_seed(capsys):
    code = run_cli(["chain", "--seed", "x12", "--steps", "1",
                    "--b", "1,0,0,0,0,0,0,0,0,0"])
    assert code == 2
    captured = capsys.readouterr()
    assert "not a Casimir" in captured.err
    assert "d/d" in captured.err  # the residual field is shown


def test_chain_requires_numeric_b(capsys):
    code = run_cli(["chain", "--seed", "x0", "--steps", "1", "--b", "symbolic"])
    assert code == 2


def test_verify_identity_single_point(tmp_path, capsys):
    out = tmp_path / "r.jsonl"
    code = run_cli(["verify", "identity", "--b", "1,0,0,0,0,0,0,0,0,0",
                    "--out", str(out)])
    assert code == 0
    records = [json.loads(l) for l in out.read_text().splitlines()]
    sampled = [r for r in records if r["check"] == "identity_sampled"]
    assert sampled and sampled[0]["details"]["points"] == 1
    assert "not acceptance-grade" in sampled[0]["details"]["grade"]


def test_algebra_info(capsys):
    assert run_cli(["algebra", "info", "sl3"]) == 0
    out = capsys.readouterr().out
    assert "dimension: 8" in out
    assert "x12, x13, x21, x23, x31, x32, y13, y23" in out
    assert "corank: 2" in out


def test_algebra_load_so3(capsys):
    assert run_cli(["algebra", "load", os.path.join(DATA, "so3.json")]) == 0
    out = capsys.readouterr().out
    assert "jacobi: pass" in out
    assert "corank: 1" in out


def test_algebra_load_broken_names_entry(capsys):
    assert run_cli(["algebra", "load", os.path.join(DATA, "broken.json")]) == 2
    err = capsys.readouterr().err
    assert "antisymmetry" in err


def test_algebra_load_jacobi_violation(capsys):
    assert run_cli(["algebra", "load", os.path.join(DATA, "jacobi_bad.json")]) == 2
    err = capsys.readouterr().err
    assert "Jacobi" in err


def test_algebra_missing_file(capsys):
    assert run_cli(["algebra", "load", "/nonexistent.json"]) == 2


def test_cli_entry_point_installed():
    proc = subprocess.run(
        [sys.executable, "-m", "clpoisson.cli", "algebra", "info", "so3"],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0
    assert "dimension: 3" in proc.stdout


def test_verify_workers_parallel(tmp_path):
    out = tmp_path / "r.jsonl"
    proc = subprocess.run(
        [
            sys.executable, "-m", "clpoisson.cli",
            "verify", "appendix", "--seed", "2", "--workers", "2",
            "--out", str(out),
        ],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0, proc.stderr
    records = [json.loads(l) for l in out.read_text().splitlines()]
    assert all(r["status"] == "pass" for r in records)
