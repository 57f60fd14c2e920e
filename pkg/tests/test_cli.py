import json
import pathlib
import subprocess
import sys

import pytest

GOLDEN = pathlib.Path(__file__).parent / "golden"

JOBS = {
    "curvature.csv": ["curvature", "--space", "DIV", "--a", "2", "--b", "1",
                      "--grid", "6x6", "--format", "csv"],
    "spectrum.json": ["spectrum", "--space", "DIII", "--potential", "V5", "--a", "1",
                      "--b", "1", "--v0", "0", "--scheme", "uv", "--n", "0..2",
                      "--l", "0..2", "--format", "json"],
    "wavefunction.json": ["wavefunction", "--space", "DIII", "--potential", "V5",
                          "--a", "1", "--b", "1", "--v0", "0", "--n", "0", "--l", "1",
                          "--chart", "uv", "--grid", "12x12", "--format", "json"],
    "classical.json": ["classical", "--space", "DIII", "--a", "1", "--b", "1",
                       "--q1", "0.3", "--q2", "1.0", "--p1", "0.7", "--p2", "-0.4",
                       "--t-final", "1", "--samples", "11", "--format", "json"],
}


def run_cli(argv, out):
    return subprocess.run([sys.executable, "-m", "darboux.cli"] + argv + ["--out", str(out)],
                          capture_output=True, text=True)


@pytest.mark.parametrize("name", sorted(JOBS))
def test_golden_files(name, tmp_path):
    out = tmp_path / name
    r = run_cli(JOBS[name], out)
    assert r.returncode == 0, r.stderr
    assert out.read_bytes() == (GOLDEN / name).read_bytes()


@pytest.mark.parametrize("name", sorted(JOBS))
def test_rerun_byte_identical(name, tmp_path):
    a, b = tmp_path / "a.out", tmp_path / "b.out"
    assert run_cli(JOBS[name], a).returncode == 0
    assert run_cli(JOBS[name], b).returncode == 0
    assert a.read_bytes() == b.read_bytes()


def test_verify_deterministic_and_exit_code(tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    r1 = run_cli(["verify", "--suite", "spectra"], a)
    r2 = run_cli(["verify", "--suite", "spectra"], b)
    assert r1.returncode == 0 and r2.returncode == 0
    assert a.read_bytes() == b.read_bytes()
    doc = json.loads(a.read_text())
    assert doc["records"][0]["pass"] is True


def test_spectrum_contains_free_level(tmp_path):
    out = tmp_path / "spec.json"
    assert run_cli(JOBS["spectrum.json"], out).returncode == 0
    doc = json.loads(out.read_text())
    rec = [r for r in doc["records"] if r["n"] == 0 and r["l"] == 0][0]
    assert any(abs(e + 0.5) < 1e-12 for e in rec["candidates_re"])
    assert doc["header"]["potential"] == "DIII_V5"


def test_curvature_csv_all_minus_one(tmp_path):
    out = tmp_path / "c.csv"
    assert run_cli(JOBS["curvature.csv"], out).returncode == 0
    lines = out.read_text().strip().splitlines()
    assert lines[0].strip() == "u,v,G,G_closed"
    for line in lines[1:]:
        g = float(line.split(",")[2])
        assert abs(g + 1.0) < 1e-6


def test_validation_error_exit_code(tmp_path):
    out = tmp_path / "x.json"
    r = run_cli(["spectrum", "--space", "DIII", "--potential", "V9", "--a", "1",
                 "--b", "1"], out)
    assert r.returncode == 2
    err = json.loads(r.stderr)
    assert "V9" in err["message"]


def test_threads_env_consistency(tmp_path, monkeypatch):
    import os

    a, b = tmp_path / "a.json", tmp_path / "b.json"
    env = dict(os.environ, DARBOUX_THREADS="4")
    r = subprocess.run([sys.executable, "-m", "darboux.cli"] + JOBS["spectrum.json"]
                       + ["--out", str(a)], capture_output=True, env=env)
    assert r.returncode == 0
    assert run_cli(JOBS["spectrum.json"], b).returncode == 0
    assert a.read_bytes() == b.read_bytes()
