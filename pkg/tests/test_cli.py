import json
import os
import subprocess
import sys

import pytest

CLI = [sys.executable, "-m", "isogeny_forge.cli"]


def run_cli(*args, **kw):
    return subprocess.run(
        CLI + list(args), capture_output=True, text=True, **kw
    )


def records_of(stdout: str):
    return [json.loads(line) for line in stdout.splitlines() if line.strip()]


def strip_timing(recs):
    out = []
    for r in recs:
        r = dict(r)
        r.pop("timing_ms", None)
        out.append(r)
    return out


def test_usage_error_missing_flag():
    res = run_cli("analyze-curve", "--a", "1")
    assert res.returncode == 2


def test_usage_error_unknown_flag():
    res = run_cli("analyze-curve", "--a", "1", "--b", "-1", "--primes", "10", "--bogus")
    assert res.returncode == 2


def test_usage_error_no_command():
    assert run_cli().returncode == 2


def test_analyze_curve_records():
    res = run_cli("analyze-curve", "--a", "1", "--b", "-1", "--primes", "3..20")
    assert res.returncode == 0
    recs = records_of(res.stdout)
    assert recs[0]["kind"] == "conductor"
    assert recs[0]["outputs"]["conductor"] == 32
    reports = [r for r in recs if r["kind"] == "reduction-report"]
    assert [r["inputs"]["p"] for r in reports] == [3, 5, 7, 11, 13, 17, 19]
    for r in reports:
        assert r["outputs"]["kodaira"] == "I0"
        assert r["outputs"]["conductor_exponent"] == 0
        assert r["tool_version"]


def test_scholten_verify_pass_and_fail():
    res = run_cli("scholten", "verify", "--params", "1,2,3,4", "--primes", "50")
    assert res.returncode == 0
    (rec,) = records_of(res.stdout)
    assert rec["kind"] == "split-jacobian"
    assert rec["outputs"]["verdict"] == "pass"

    bad = run_cli(
        "scholten", "verify", "--params", "1,2,3,4", "--primes", "50", "--e1", "1,3"
    )
    assert bad.returncode == 1
    (rec,) = records_of(bad.stdout)
    assert rec["outputs"]["verdict"] == "fail"


def test_scholten_build_and_family():
    res = run_cli("scholten", "build", "--params", "1,2,3,4")
    assert res.returncode == 0
    (rec,) = records_of(res.stdout)
    assert rec["outputs"]["lam"] == -2
    res = run_cli("scholten", "family", "--params", "1,2,3,4")
    assert res.returncode == 0
    (rec,) = records_of(res.stdout)
    assert 1 <= rec["outputs"]["class_count"] <= 6


def test_search_empty_csv(tmp_path):
    f = tmp_path / "grid.csv"
    f.write_text("a,b,c,d\n")
    res = run_cli("--jobs", "1", "scholten", "search", "--csv", str(f))
    assert res.returncode == 0
    assert records_of(res.stdout) == []


def test_search_box_with_predicate(tmp_path):
    res = run_cli(
        "--jobs", "1", "scholten", "search", "--box", "2",
        "--predicate", "max-one-supersingular:7",
        "--limit", "5",
    )
    assert res.returncode == 0
    recs = records_of(res.stdout)
    assert 0 < len(recs) <= 5
    for r in recs:
        assert r["kind"] == "scholten-search"


def test_check_main1_exit_codes():
    ok = run_cli("check", "main1", "--curves", "1,-1;1,3", "--p", "7")
    assert ok.returncode == 0
    bad = run_cli("check", "main1", "--curves", "1,-1;1,-1", "--p", "7")
    assert bad.returncode == 1


def test_check_main2():
    res = run_cli(
        "check", "main2", "--product", "1,-1@1", "--product", "1,3@2",
        "--p", "5", "--unramified", "--all-good",
    )
    assert res.returncode == 0
    (rec,) = records_of(res.stdout)
    assert "p-divisible" in rec["outputs"]["conclusion"]


def test_check_global2_pinned():
    res = run_cli("check", "global2", "--a", "1", "--b", "-1", "--deg-phi", "2", "--bound", "20")
    assert res.returncode == 0
    (rec,) = records_of(res.stdout)
    assert rec["outputs"]["primes"] == [5, 7, 11, 13, 17, 19]


def test_scan_supersingular_pinned():
    res = run_cli("scan", "supersingular", "--a", "1", "--b", "-1", "--bound", "50")
    assert res.returncode == 0
    (rec,) = records_of(res.stdout)
    assert rec["outputs"]["primes"] == [3, 7, 11, 19, 23, 31, 43, 47]


def test_kgroup_prove_skew():
    res = run_cli("kgroup", "prove-skew", "--q", "5", "--r", "2", "--convention", "both")
    assert res.returncode == 0
    recs = records_of(res.stdout)
    assert len(recs) == 2
    for r in recs:
        assert r["outputs"]["all_proved"] is True
        assert r["outputs"]["negative_control"]["certified"] is True


def test_filtration():
    res = run_cli("filtration", "--group", "2", "--rmax", "3")
    assert res.returncode == 0
    (rec,) = records_of(res.stdout)
    got = [q["invariant_factors"] for q in rec["outputs"]["quotients"]]
    assert got == [[2], [2], [2]]


def test_determinism_cold_and_warm_cache(tmp_path):
    cache = tmp_path / "cache"
    args = [
        "--cache-dir", str(cache),
        "scholten", "verify", "--params", "1,2,3,4", "--primes", "50",
    ]
    first = run_cli(*args)
    assert first.returncode == 0
    second = run_cli(*args)
    assert second.returncode == 0
    assert strip_timing(records_of(first.stdout)) == strip_timing(records_of(second.stdout))


def test_cache_env_and_warm_conductor(tmp_path):
    cache = tmp_path / "cache2"
    env = dict(os.environ, ISOGENY_FORGE_CACHE=str(cache))
    args = ["analyze-curve", "--a", "1", "--b", "-1", "--primes", "5"]
    cold = run_cli(*args, env=env)
    assert cold.returncode == 0
    assert (cache / "conductors.json").exists()
    table = json.loads((cache / "conductors.json").read_text())
    assert list(table.values()) == [32]
    warm = run_cli(*args, env=env)
    assert strip_timing(records_of(cold.stdout)) == strip_timing(records_of(warm.stdout))


def test_output_file_and_io_error(tmp_path):
    out = tmp_path / "out.jsonl"
    res = run_cli(
        "--output", str(out), "scholten", "verify", "--params", "1,2,3,4", "--primes", "50"
    )
    assert res.returncode == 0
    assert res.stdout == ""
    assert records_of(out.read_text())[0]["outputs"]["verdict"] == "pass"

    res = run_cli(
        "--output", str(tmp_path / "missing" / "out.jsonl"),
        "scholten", "verify", "--params", "1,2,3,4", "--primes", "50",
    )
    assert res.returncode == 3
    assert "i/o error" in res.stderr


def test_degenerate_params_exit_1():
    res = run_cli("scholten", "verify", "--params", "1,2,2,4", "--primes", "50")
    assert res.returncode == 1
