"""CLI contract: subcommands, config merging, and exit codes."""

import io
import json

import pytest

from majprop.cli import (
    EXIT_BOUND,
    EXIT_CONFIG,
    EXIT_OK,
    EXIT_TERM_CAP,
    main,
)
from majprop.hamiltonian import build_hubbard_1d, write_hamiltonian
from majprop.strings import read_polynomial


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_validate_subcommand(capsys):
    code, out, _ = run(capsys, "validate", "--model", "hubbard1d", "--L", "3")
    assert code == EXIT_OK
    rep = json.loads(out)
    assert rep["n_modes"] == 12
    assert rep["n_terms"] == 17


def test_color_subcommand(capsys):
    code, out, _ = run(capsys, "color", "--model", "hubbard1d", "--L", "2", "--U", "1")
    assert code == EXIT_OK
    lines = out.strip().split("\n")
    assert lines[0].startswith("# 3 groups")
    assert len(lines) == 4


def test_unknown_config_key_rejected(tmp_path, capsys):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"L": 3, "bogus": 1}))
    code, _, err = run(capsys, "fig1", "--config", str(cfg))
    assert code == EXIT_CONFIG
    assert "bogus" in err


def test_malformed_config_rejected(tmp_path, capsys):
    cfg = tmp_path / "cfg.json"
    cfg.write_text("{not json")
    code, _, err = run(capsys, "validate", "--config", str(cfg))
    assert code == EXIT_CONFIG


def test_config_file_with_cli_override(tmp_path, capsys):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"model": "hubbard1d", "L": 2}))
    code, out, _ = run(capsys, "validate", "--config", str(cfg), "--L", "3")
    assert code == EXIT_OK
    assert json.loads(out)["n_modes"] == 12  # CLI flag wins


def test_validate_from_hamiltonian_file(tmp_path, capsys):
    h = build_hubbard_1d(2, 0.7)
    path = tmp_path / "h.json"
    with open(path, "w") as f:
        write_hamiltonian(h, f)
    code, out, _ = run(capsys, "validate", "--model", "file", "--hamiltonian", str(path))
    assert code == EXIT_OK
    assert json.loads(out)["n_terms"] == h.n_terms


def test_file_model_without_path_is_config_error(capsys):
    code, _, err = run(capsys, "validate", "--model", "file")
    assert code == EXIT_CONFIG


def test_propagate_roundtrip(tmp_path, capsys):
    out_path = tmp_path / "out.majpoly"
    trace_path = tmp_path / "trace.csv"
    code, _, _ = run(
        capsys, "propagate", "--model", "hubbard1d", "--L", "2", "--t", "0.1",
        "--ell", "4", "--out", str(out_path), "--trace", str(trace_path),
    )
    assert code == EXIT_OK
    with open(out_path) as f:
        p = read_polynomial(f)
    assert p.n_modes == 8
    assert p.degree <= 4
    lines = trace_path.read_text().strip().split("\n")
    assert lines[0].startswith("step,time,n_terms")
    assert len(lines) == 12  # header + t=0 row + 10 steps


def test_propagate_term_cap_exit(capsys):
    code, _, err = run(
        capsys, "propagate", "--model", "hubbard1d", "--L", "3", "--t", "1.0",
        "--ell", "12", "--term_cap", "10", "--out", "-",
    )
    assert code == EXIT_TERM_CAP
    assert "term cap" in err


def test_fig1_small_run_and_determinism(tmp_path, capsys):
    args = [
        "fig1", "--L", "2", "--times", "0.05", "--ells", "2,4,8",
        "--delta_t", "0.01",
    ]
    code1, out1, _ = run(capsys, *args)
    code2, out2, _ = run(capsys, *args)
    assert code1 == code2 == EXIT_OK
    assert out1 == out2  # byte-identical
    lines = out1.strip().split("\n")
    assert lines[0].startswith("# majprop")
    assert lines[1].startswith("# config")
    assert lines[2] == "deg,t0.05"
    rows = {int(l.split(",")[0]): float(l.split(",")[1]) for l in lines[3:]}
    assert rows[8] <= 1e-9  # ell = N: no truncation at all
    assert rows[2] >= rows[4] >= rows[8]


def test_fig2_small_run(capsys):
    code, out, _ = run(
        capsys, "fig2", "--L", "3", "--U_values", "0.0", "--ells", "2",
        "--t_max", "0.04", "--delta_t", "0.02",
    )
    assert code == EXIT_OK
    lines = out.strip().split("\n")
    assert lines[2] == "time,U0.0ell2"
    first = lines[3].split(",")
    assert float(first[0]) == 0.0
    assert float(first[1]) == pytest.approx(1.0)


def test_verify_exit_codes(monkeypatch, capsys):
    # force-fail one check to exercise the bound-violation exit path
    import majprop.cli as cli

    code, out, _ = run(capsys, "verify", "--n_commutator_samples", "4")
    assert code == EXIT_OK
    assert json.loads(out)["passed"] is True

    monkeypatch.setattr(
        cli, "run_all_checks", lambda **kw: {"checks": [], "passed": False}
    )
    code, _, _ = run(capsys, "verify")
    assert code == EXIT_BOUND
