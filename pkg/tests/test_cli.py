"""End-to-end command-line battery run through subprocesses.

Exercises exit codes, input diagnostics with line numbers, report formats,
and the byte-determinism of emitted JSON.
"""

from __future__ import annotations

import json
import subprocess
import sys

import numpy as np
import pytest

from bohrkit.cli import read_set_file
from bohrkit.patterns import behrend_set, count_configurations, random_set

# ---------------------------------------------------------------------------
# helpers
# ---------------------------------------------------------------------------


def run_cli(*argv: str, env: dict | None = None):
    return subprocess.run(
        [sys.executable, "-m", "bohrkit.cli", *argv],
        capture_output=True,
        text=True,
        env=env,
        timeout=120,
    )


def write_set(path, values) -> str:
    path.write_text("".join(f"{int(v)}\n" for v in values))
    return str(path)


def write_spec(path, theta, eps, m) -> str:
    payload = {"theta": [[t[0], t[1]] for t in theta], "eps": list(eps), "M": list(m)}
    path.write_text(json.dumps(payload))
    return str(path)


# ---------------------------------------------------------------------------
# usage and input errors
# ---------------------------------------------------------------------------


def test_help_exits_zero():
    assert run_cli("--help").returncode == 0
    assert run_cli("bohr", "--help").returncode == 0
    assert run_cli("patterns", "find", "--help").returncode == 0


def test_bogus_subcommand_exits_two():
    assert run_cli("bogus").returncode == 2
    assert run_cli("bohr", "bogus").returncode == 2


def test_unknown_flag_exits_two(tmp_path):
    spec = write_spec(tmp_path / "s.json", [(1, 1)], (1, 2), (10, 1))
    proc = run_cli("bohr", "enum", "--spec", spec, "--frobnicate")
    assert proc.returncode == 2


def test_missing_file_exits_two():
    proc = run_cli("patterns", "find", "--set", "/nonexistent.txt", "--s", "2")
    assert proc.returncode == 2
    assert "cannot read" in proc.stderr


def test_duplicate_set_value_reports_line(tmp_path):
    path = tmp_path / "dup.txt"
    path.write_text("1\n2\n1\n")
    proc = run_cli("patterns", "find", "--set", str(path), "--s", "2")
    assert proc.returncode == 2
    assert ":3:" in proc.stderr and "duplicate value 1" in proc.stderr
    assert "line 1" in proc.stderr


def test_non_integer_set_value_reports_line(tmp_path):
    path = tmp_path / "bad.txt"
    path.write_text("1\ntwo\n")
    proc = run_cli("patterns", "find", "--set", str(path), "--s", "2")
    assert proc.returncode == 2
    assert ":2:" in proc.stderr


# ---------------------------------------------------------------------------
# bohr group
# ---------------------------------------------------------------------------


def test_bohr_enum_frozen_example(tmp_path):
    spec = write_spec(tmp_path / "s.json", [(1, 1)], (1, 2), (100, 1))
    proc = run_cli("bohr", "enum", "--spec", spec)
    assert proc.returncode == 0
    report = json.loads(proc.stdout)
    assert report["size"] == 201
    assert report["elements"][0] == -100 and report["elements"][-1] == 100


def test_bohr_regular_verdicts(tmp_path):
    good = write_spec(tmp_path / "good.json", [(1, 1)], (1, 2), (100, 1))
    assert run_cli("bohr", "regular", "--spec", good).returncode == 0
    bad = write_spec(tmp_path / "bad.json", [(1, 2)], (499, 1000), (50, 1))
    proc = run_cli("bohr", "regular", "--spec", bad)
    assert proc.returncode == 1
    report = json.loads(proc.stdout)
    assert report["witness_c"] == [1, 499]


def test_bohr_find_alpha(tmp_path):
    spec = write_spec(tmp_path / "s.json", [(1, 2)], (499, 1000), (50, 1))
    proc = run_cli("bohr", "find-alpha", "--spec", spec)
    assert proc.returncode == 0
    report = json.loads(proc.stdout)
    assert report["found"] is True
    num, den = report["c"]
    assert den <= 2 * num <= 2 * den  # multiplier in [1/2, 1]


# ---------------------------------------------------------------------------
# patterns group
# ---------------------------------------------------------------------------


def test_patterns_find_found(tmp_path):
    path = write_set(tmp_path / "z.txt", range(1, 21))
    proc = run_cli("patterns", "find", "--set", path, "--s", "2")
    assert proc.returncode == 0
    report = json.loads(proc.stdout)
    assert report["case"] == "found"
    members = set(range(1, 21))
    a, ns = report["a"], report["ns"]
    assert all(n1 + n2 + a in members for n1 in ns for n2 in ns)


def test_patterns_find_none(tmp_path):
    path = write_set(tmp_path / "b.txt", behrend_set(500))
    proc = run_cli("patterns", "find", "--set", path, "--s", "2")
    assert proc.returncode == 1
    assert json.loads(proc.stdout)["case"] == "none"


def test_patterns_find_budget(tmp_path):
    path = write_set(tmp_path / "b.txt", behrend_set(500))
    proc = run_cli("patterns", "find", "--set", path, "--s", "2", "--budget", "3")
    assert proc.returncode == 3
    assert json.loads(proc.stdout)["case"] == "inconclusive"


def test_patterns_count_matches_library(tmp_path):
    values = sorted({1, 2, 3, 5, 8, 13})
    path = write_set(tmp_path / "z.txt", values)
    proc = run_cli("patterns", "count", "--set", path, "--s", "2")
    expected = count_configurations(np.array(values), 2)
    assert proc.returncode == (0 if expected > 0 else 1)
    assert json.loads(proc.stdout)["count"] == expected


def test_patterns_dichotomy_csv_header(tmp_path):
    path = write_set(tmp_path / "z.txt", range(1, 41))
    proc = run_cli("patterns", "dichotomy", "--set", path, "--format", "csv")
    assert proc.returncode == 0
    header = proc.stdout.split("\n", 1)[0]
    assert "outcome.kind" in header and "set" in header and "delta" in header


# ---------------------------------------------------------------------------
# gen group
# ---------------------------------------------------------------------------


def test_gen_behrend_round_trip(tmp_path):
    out = tmp_path / "b.txt"
    proc = run_cli("gen", "behrend", "200", "--out", str(out))
    assert proc.returncode == 0
    assert np.array_equal(read_set_file(str(out)), behrend_set(200))


def test_gen_random_deterministic(tmp_path):
    first = run_cli("gen", "random", "300", "3/10", "--seed", "5")
    second = run_cli("gen", "random", "300", "3/10", "--seed", "5")
    other = run_cli("gen", "random", "300", "3/10", "--seed", "6")
    assert first.returncode == 0
    assert first.stdout == second.stdout
    assert first.stdout != other.stdout


def test_gen_random_round_trip(tmp_path):
    out = tmp_path / "r.txt"
    proc = run_cli("gen", "random", "300", "3/10", "--seed", "5", "--out", str(out))
    assert proc.returncode == 0
    assert np.array_equal(read_set_file(str(out)), random_set(300, 0.3, 5))


def test_gen_rejects_bad_density():
    assert run_cli("gen", "random", "100", "7/5").returncode == 2  # above 1
    assert run_cli("gen", "random", "100", "abc").returncode == 2


# ---------------------------------------------------------------------------
# u2 and sumfree groups
# ---------------------------------------------------------------------------


def test_u2_compute_routes_agree(tmp_path):
    path = write_set(tmp_path / "e.txt", range(-20, 21, 2))
    spec = write_spec(tmp_path / "s.json", [(1, 1)], (1, 2), (20, 1))
    proc = run_cli("u2", "compute", "--set", path, "--spec", spec)
    assert proc.returncode == 0
    report = json.loads(proc.stdout)
    assert report["agreement"] <= report["tolerance"]
    assert abs(report["fourth_direct"] - report["norm"] ** 4) < 1e-9


def test_sumfree_check_exit_codes(tmp_path):
    z = write_set(tmp_path / "z.txt", [1, 2])
    w3 = write_set(tmp_path / "w3.txt", [3])
    w4 = write_set(tmp_path / "w4.txt", [4])
    assert run_cli("sumfree", "check", "--set", z, "--set", w4).returncode == 0
    assert run_cli("sumfree", "check", "--set", z, "--set", w3).returncode == 1


def test_sumfree_embed(tmp_path):
    path = write_set(tmp_path / "a.txt", range(1, 21))
    proc = run_cli("sumfree", "embed", "--set", path)
    assert proc.returncode == 0
    report = json.loads(proc.stdout)
    assert report["status"] == "ok"
    assert report["kept_size"] * 2 >= 20


def test_sumfree_find_config(tmp_path):
    path = write_set(tmp_path / "a.txt", range(1, 51))
    proc = run_cli("sumfree", "find-config", "--set", path, "--s", "2")
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["status"] == "found"


# ---------------------------------------------------------------------------
# increment group and emission contracts
# ---------------------------------------------------------------------------


def test_increment_run_trace_matches_steps(tmp_path):
    path = write_set(tmp_path / "r.txt", random_set(400, 0.4, 2))
    trace = tmp_path / "trace.jsonl"
    proc = run_cli("increment", "run", "--set", path, "--out", str(trace))
    assert proc.returncode == 0
    report = json.loads(proc.stdout)
    assert report["status"] == "found"
    lines = trace.read_text().strip().split("\n")
    assert len(lines) == len(report["steps"])
    for line in lines:
        json.loads(line)  # each line is standalone JSON


def test_out_file_matches_stdout(tmp_path):
    spec = write_spec(tmp_path / "s.json", [(1, 1)], (1, 2), (30, 1))
    out = tmp_path / "report.json"
    proc = run_cli("bohr", "enum", "--spec", spec, "--out", str(out))
    assert proc.returncode == 0
    assert out.read_text() == proc.stdout


def test_json_reports_byte_deterministic(tmp_path):
    path = write_set(tmp_path / "z.txt", range(1, 31))
    first = run_cli("patterns", "find", "--set", path, "--s", "2")
    second = run_cli("patterns", "find", "--set", path, "--s", "2")
    assert first.stdout == second.stdout
