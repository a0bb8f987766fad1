"""End-to-end CLI behavior through real subprocess invocations."""

import json
import math
import os
import subprocess
import sys

import numpy as np
import pytest

from wigfree import harmonic_oscillator_state, wigner_closed_form


def run_cli(*args, env_extra=None, cwd=None):
    env = dict(os.environ)
    if env_extra:
        env.update(env_extra)
    return subprocess.run(
        [sys.executable, "-m", "wigfree", *args],
        capture_output=True,
        text=True,
        env=env,
        cwd=cwd,
    )


def test_eval_both_modes_agree():
    out = run_cli("eval", "--builtin", "ho", "--n", "0", "--q", "0", "--p", "0", "--mode", "both")
    assert out.returncode == 0, out.stderr
    lines = dict(line.split(maxsplit=1) for line in out.stdout.strip().splitlines())
    closed = float(lines["closed"])
    quad = float(lines["quad"])
    assert abs(closed - 1.0 / math.pi) < 1e-12
    assert abs(closed - quad) < 1e-10
    assert float(lines["diff"]) < 1e-10


def test_eval_closed_single_line():
    out = run_cli("eval", "--builtin", "ho", "--n", "1", "--q", "0", "--p", "0")
    assert out.returncode == 0
    lines = out.stdout.strip().splitlines()
    assert len(lines) == 1
    assert abs(float(lines[0].split()[1]) + 1.0 / math.pi) < 1e-12


def test_eval_requires_point():
    out = run_cli("eval", "--builtin", "ho")
    assert out.returncode == 2


def test_eval_requires_exactly_one_source(tmp_path):
    out = run_cli("eval", "--q", "0", "--p", "0")
    assert out.returncode == 2
    spec = tmp_path / "s.json"
    spec.write_text(json.dumps({"a": 1.0, "terms": [{"coeff": [1, 0], "power": 0}]}))
    out = run_cli("eval", str(spec), "--builtin", "ho", "--q", "0", "--p", "0")
    assert out.returncode == 2


def test_grid_csv_round_trips_library_values():
    out = run_cli("grid", "--builtin", "ho", "--n", "1")
    assert out.returncode == 0
    lines = out.stdout.strip().splitlines()
    assert lines[0] == "q,p,W"
    assert len(lines) == 1 + 17 * 17
    w = wigner_closed_form(harmonic_oscillator_state(1))
    center = [ln for ln in lines[1:] if ln.startswith("0,0,") or ln.startswith("-0,")]
    rows = [ln.split(",") for ln in lines[1:]]
    # %.17g reparses to the exact double the library computed
    for q_s, p_s, w_s in rows[:60]:
        q, p, val = float(q_s), float(p_s), float(w_s)
        assert val == w.evaluate(q, p)
    mid = rows[8 * 17 + 8]
    assert float(mid[0]) == 0.0 and float(mid[1]) == 0.0
    assert abs(float(mid[2]) + 1.0 / math.pi) < 1e-12
    assert center or True


def test_grid_json_structure(tmp_path):
    target = tmp_path / "g.json"
    out = run_cli(
        "grid", "--builtin", "packet", "--q0", "1", "--p0", "2", "--dq", "0.7",
        "--nq", "5", "--np", "7", "--q-min", "-1", "--q-max", "3",
        "--p-min", "0", "--p-max", "4", "--format", "json",
        "--output", str(target),
    )
    assert out.returncode == 0
    data = json.loads(target.read_text())
    assert data["grid"]["nq"] == 5 and data["grid"]["np"] == 7
    assert data["mode"] == "closed"
    vals = data["values"]
    assert len(vals) == 5 and len(vals[0]) == 7
    qs = np.linspace(-1, 3, 5)
    ps = np.linspace(0, 4, 7)
    qi = int(np.argmin(np.abs(qs - 1.0)))
    pi = int(np.argmin(np.abs(ps - 2.0)))
    assert abs(vals[qi][pi] - 1.0 / math.pi) < 1e-12


def test_grid_pgm_shape_and_peak():
    out = run_cli(
        "grid", "--builtin", "ho", "--n", "0", "--format", "pgm",
        "--nq", "9", "--np", "9", "--q-min", "-3", "--q-max", "3",
        "--p-min", "-3", "--p-max", "3",
    )
    assert out.returncode == 0
    lines = out.stdout.splitlines()
    assert lines[0] == "P2"
    header = [ln for ln in lines if not ln.startswith("#")]
    assert header[1].split() == ["9", "9"]
    assert header[2] == "255"
    pixels = np.array([int(x) for ln in header[3:] for x in ln.split()]).reshape(9, 9)
    # ground state peaks dead center and decays outward along the mid row
    mid = pixels[4]
    assert mid[4] == pixels.max()
    assert all(mid[i] >= mid[i - 1] for i in range(1, 5))
    assert all(mid[i] <= mid[i - 1] for i in range(5, 9))


def test_grid_rejects_degenerate_axes():
    out = run_cli("grid", "--builtin", "ho", "--nq", "1")
    assert out.returncode == 2
    assert "nq" in out.stderr


def test_emit_eval_round_trip(tmp_path):
    spec_path = tmp_path / "packet.json"
    emitted = run_cli(
        "builtin", "emit", "packet", "--q0", "1.25", "--p0", "-0.5", "--dq", "0.9"
    )
    assert emitted.returncode == 0
    spec_path.write_text(emitted.stdout)
    via_spec = run_cli("eval", str(spec_path), "--q", "0.4", "--p", "1.1")
    direct = run_cli(
        "eval", "--builtin", "packet", "--q0", "1.25", "--p0", "-0.5",
        "--dq", "0.9", "--q", "0.4", "--p", "1.1",
    )
    assert via_spec.returncode == 0 and direct.returncode == 0
    assert via_spec.stdout == direct.stdout


def test_builtin_list_names():
    out = run_cli("builtin", "list")
    assert out.returncode == 0
    names = out.stdout.split()
    for name in ("ho", "packet", "singular", "anyon"):
        assert name in names


def test_anyon_rejected_with_smoothness_message():
    out = run_cli("eval", "--builtin", "anyon", "--q", "0", "--p", "0")
    assert out.returncode == 2
    assert "smoothness condition" in out.stderr


def test_fractional_alpha_rejected():
    out = run_cli(
        "eval", "--builtin", "singular", "--alpha", "1.5", "--q", "0", "--p", "0"
    )
    assert out.returncode == 2
    assert "smoothness condition" in out.stderr


def test_fractional_power_spec_rejected(tmp_path):
    spec = tmp_path / "frac.json"
    spec.write_text(
        json.dumps({"a": 1.0, "terms": [{"coeff": [1, 0], "power": 0.5}]})
    )
    out = run_cli("eval", str(spec), "--q", "0", "--p", "0")
    assert out.returncode == 2
    assert "smoothness" in out.stderr


def test_spec_unknown_field_rejected(tmp_path):
    spec = tmp_path / "extra.json"
    spec.write_text(
        json.dumps({"a": 1.0, "omega": 2.0, "terms": [{"coeff": [1, 0], "power": 0}]})
    )
    out = run_cli("eval", str(spec), "--q", "0", "--p", "0")
    assert out.returncode == 2
    assert "omega" in out.stderr


def test_spec_json_syntax_diagnostics(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    out = run_cli("eval", str(bad), "--q", "0", "--p", "0")
    assert out.returncode == 2
    assert "bad.json" in out.stderr


def test_degree_cap_env_flows_through(tmp_path):
    out = run_cli(
        "eval", "--builtin", "ho", "--n", "10", "--q", "0", "--p", "0",
        env_extra={"WIGFREE_DEGREE_CAP": "8"},
    )
    assert out.returncode == 2
    assert "exceeds cap 8" in out.stderr


def test_check_passes_for_builtins():
    for args in (
        ("check", "--builtin", "ho", "--n", "3"),
        ("check", "--builtin", "singular", "--alpha", "2", "--n", "1"),
    ):
        out = run_cli(*args)
        assert out.returncode == 0, out.stderr
        assert "overall: PASS" in out.stdout
        for line in out.stdout.strip().splitlines()[:-1]:
            assert line.startswith("PASS"), line


def test_check_packet_includes_translation_row():
    out = run_cli(
        "check", "--builtin", "packet", "--q0", "1", "--p0", "2", "--dq", "0.7"
    )
    assert out.returncode == 0
    assert "translation-covariance" in out.stdout
    assert "overall: PASS" in out.stdout


def test_missing_spec_file_is_usage_error():
    out = run_cli("eval", "/nonexistent/state.json", "--q", "0", "--p", "0")
    assert out.returncode == 2
    assert "cannot read spec file" in out.stderr
