import json
import subprocess
import sys

import pytest

from mmes.cli import main
from mmes.core import ghz, read_state, write_state


def run(capsys, *argv):
    status = main(list(argv))
    out, err = capsys.readouterr()
    lines = [json.loads(line) for line in out.splitlines() if line.strip()]
    return status, lines, err


@pytest.fixture
def ghz_file(tmp_path):
    path = tmp_path / "ghz3.json"
    write_state(ghz(3), path)
    return str(path)


def test_pime(capsys, ghz_file):
    status, (obj,), err = run(capsys, "pime", "--state", ghz_file)
    assert status == 0
    assert obj["pime"] == pytest.approx(0.5, abs=1e-12)
    manifest = json.loads(err)["manifest"]
    assert manifest["subcommand"] == "pime"
    assert set(manifest) == {"subcommand", "params", "seed", "version", "duration_s"}


def test_pime_histogram_and_svg(capsys, ghz_file, tmp_path):
    csv_path, svg_path = tmp_path / "h.csv", tmp_path / "h.svg"
    status, (obj,), _ = run(capsys, "pime", "--state", ghz_file, "--histogram", str(csv_path), "--svg", str(svg_path))
    assert status == 0 and obj["bimodal"] is False
    assert csv_path.read_text().splitlines()[0] == "partition,purity"
    assert svg_path.read_text().startswith("<svg")


def test_purity(capsys, ghz_file):
    status, (obj,), _ = run(capsys, "purity", "--state", ghz_file, "--partition", "1,3")
    assert status == 0 and obj == {"partition": "1;3", "purity": pytest.approx(0.5, abs=1e-12)}


def test_purity_bad_partition(capsys, ghz_file):
    status, (obj,), _ = run(capsys, "purity", "--state", ghz_file, "--partition", "1,4")
    assert status == 2 and obj["error"] == "invalid"


def test_delta(capsys):
    status, (obj,), _ = run(capsys, "delta", "--n", "2", "--d", "2", "--nA", "1",
                            "--k", "00", "--kp", "11", "--l", "01", "--lp", "10")
    assert status == 0 and obj["delta"] == 0.5


def test_delta_length_mismatch(capsys):
    status, _, _ = run(capsys, "delta", "--n", "3", "--d", "2", "--k", "00", "--kp", "11", "--l", "01", "--lp", "10")
    assert status == 2


def test_sample_requires_seed(capsys):
    status, (obj,), _ = run(capsys, "sample", "--n", "2", "--d", "2", "--samples", "10")
    assert status == 2 and "--seed" in obj["message"]


def test_sample_schema_and_reproducible(capsys):
    args = ("sample", "--n", "2", "--d", "2", "--samples", "2000", "--seed", "4", "--moment", "1")
    _, (a,), _ = run(capsys, *args)
    _, (b,), _ = run(capsys, *args, "--threads", "3")
    assert set(a) == {"estimate", "stderr", "samples", "seed"}
    assert a == b
    assert abs(a["estimate"] - 0.8) <= 4 * a["stderr"]


def test_sample_beta(capsys):
    status, (obj,), _ = run(capsys, "sample", "--n", "2", "--d", "2", "--beta", "1", "--samples", "500", "--seed", "1")
    assert status == 0 and obj["estimate"] < 0.8


def test_sample_moment_with_beta_rejected(capsys):
    status, _, _ = run(capsys, "sample", "--n", "2", "--d", "2", "--beta", "1", "--samples", "10",
                       "--seed", "1", "--moment", "2")
    assert status == 2


def test_moments_exact(capsys):
    status, (obj,), _ = run(capsys, "moments", "--n", "2", "--d", "2", "--m", "1", "--mode", "exact")
    assert status == 0 and obj["value"] == pytest.approx(0.8, abs=1e-15)
    assert set(obj) >= {"m", "value", "cactus", "noncactus", "ratio"}


def test_moments_split(capsys):
    _, (obj,), _ = run(capsys, "moments", "--n", "2", "--d", "2", "--m", "2", "--mode", "split")
    assert obj["value"] == pytest.approx(23 / 35, rel=1e-12)
    assert obj["cactus"] + obj["noncactus"] == pytest.approx(obj["value"], rel=1e-12)
    assert obj["ratio"] == pytest.approx(10 / 128)


def test_moments_mc(capsys):
    status, _, _ = run(capsys, "moments", "--n", "2", "--d", "2", "--m", "2", "--mode", "mc")
    assert status == 2
    status, (obj,), _ = run(capsys, "moments", "--n", "2", "--d", "2", "--m", "2", "--mode", "mc",
                            "--seed", "3", "--samples", "20000")
    assert status == 0 and abs(obj["value"] - 23 / 35) <= 4 * obj["stderr"]


def test_graphs_census(capsys):
    status, rows, _ = run(capsys, "graphs", "census", "--m", "2")
    assert status == 0
    assert sorted(r["degeneracy"] for r in rows) == [4, 4, 16]
    assert all(set(r) >= {"canonical", "degeneracy", "cactus", "representative"} for r in rows)


def test_graphs_census_eval(capsys):
    _, rows, _ = run(capsys, "graphs", "census", "--m", "2", "--eval", "--n", "2", "--d", "2")
    assert sorted(r["bracket"] for r in rows) == [10, 16, 64]


def test_graphs_census_guard(capsys):
    status, (obj,), _ = run(capsys, "graphs", "census", "--m", "5")
    assert status == 3 and obj["error"] == "guard"


def test_code_rs(capsys, tmp_path):
    path = tmp_path / "rs.json"
    status, (obj,), _ = run(capsys, "code", "rs", "--n", "4", "--d", "5", "--k", "2", "--emit-state", str(path))
    assert status == 0 and obj["distance"] == 3 and obj["mds"]
    assert obj["pime"] == pytest.approx(1 / 25, abs=1e-12)
    assert read_state(path).n == 4


def test_code_rs_invalid(capsys):
    status, (obj,), _ = run(capsys, "code", "rs", "--n", "3", "--d", "2", "--k", "1")
    assert status == 2 and "d-1" in obj["message"]


def test_optimize(capsys):
    status, (obj,), err = run(capsys, "optimize", "--n", "3", "--restarts", "2", "--seed", "0", "--max-iter", "100")
    assert status == 0 and len(obj["restarts"]) == 2
    assert json.loads(err)["manifest"]["seed"] == 0


def test_optimize_requires_seed(capsys):
    status, _, _ = run(capsys, "optimize", "--n", "3")
    assert status == 2


def test_sigma7(capsys, tmp_path):
    path = tmp_path / "s.csv"
    status, (obj,), _ = run(capsys, "sigma7", "--histogram", str(path))
    assert status == 0 and obj["pime"] == pytest.approx(0.131952, abs=1e-4) and obj["bimodal"]
    assert len(path.read_text().splitlines()) == 36


@pytest.mark.parametrize("argv", [[], ["bogus"], ["pime"], ["moments", "--n", "2", "--d", "2", "--m", "x"],
                                  ["graphs"], ["pime", "--state", "/nonexistent.json"]])
def test_usage_errors(capsys, argv):
    status, (obj,), _ = run(capsys, *argv)
    assert status == 2 and "error" in obj


def test_console_entry_point(tmp_path, ghz_file):
    proc = subprocess.run([sys.executable, "-m", "mmes.cli", "pime", "--state", ghz_file],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["pime"] == pytest.approx(0.5)
    help_proc = subprocess.run([sys.executable, "-m", "mmes.cli", "sample", "--help"],
                               capture_output=True, text=True, check=False)
    assert help_proc.returncode == 0 and "--seed" in help_proc.stdout
