import json
import subprocess
import sys
from pathlib import Path

import pytest

from semistable_lab.cli import main
from semistable_lab.families import qm_family
from semistable_lab.stats import DistributionReport


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_disc_cubic(capsys):
    code, out, _ = run(capsys, "disc", "--hyperelliptic", "x^3+x+1")
    assert code == 0
    assert "Delta = -31" in out


def test_disc_nodal_plane_with_r(capsys):
    code, out, _ = run(capsys, "disc", "--plane", "x^3+y^3-x*y*z", "--with-R")
    assert code == 0
    assert "D = 0" in out and "R = -177147" in out


def test_disc_family_file(capsys, tmp_path):
    path = tmp_path / "qm.json"
    path.write_text(json.dumps(qm_family().to_dict()))
    code, out, _ = run(capsys, "disc", "--family", str(path), "--at", "1")
    assert code == 0 and "Delta = -419904" in out


def test_classify_minimally_bad(capsys):
    code, out, _ = run(capsys, "classify", "--hyperelliptic", "x^3+x+1")
    assert code == 0
    rows = [line.split() for line in out.splitlines() if line.strip().startswith("31 ")]
    assert rows == [["31", "1", "MinimallyBad", "1", "1", "1", "true"]]


def test_classify_fermat_all_good(capsys):
    code, out, _ = run(capsys, "classify", "--plane", "x^3+y^3+z^3")
    assert code == 0
    assert "Delta = 531441" in out and "all primes p > 6 are good" in out


def test_classify_degenerate_exit_3(capsys):
    code, _, err = run(capsys, "classify", "--family", "fixture:qm", "--at", "2")
    assert code == 3
    assert "degenerate specialization excluded by Δ(\U0001d42d) ≠ 0" in err


@pytest.mark.parametrize("argv", [
    ["disc", "--hyperelliptic", "x^3+"],
    ["disc", "--family", "fixture:nope", "--at", "1"],
    ["disc", "--family", "fixture:qm", "--at", "1,2"],
    ["run", "--family", "fixture:standard-hyperelliptic-1", "--B", "8"],
    ["run", "--family", "fixture:standard-hyperelliptic-1", "--B", "100"],
    ["run", "--family", "missing.json", "--B", "100"],
])
def test_config_errors_exit_2(capsys, argv, tmp_path):
    code, _, err = run(capsys, *argv, *(["--out", str(tmp_path)] if argv[0] == "run" else []))
    assert code == 2 and err.startswith("error:")
    assert not list(tmp_path.iterdir())


def test_run_writes_reports(capsys, tmp_path):
    args = ["run", "--family", "fixture:isotrivial-3", "--B", "100", "--csv", "--out", str(tmp_path)]
    code, out, _ = run(capsys, *args)
    assert code == 0
    assert "all bad primes divide the exclusion divisor" in out
    assert {p.name for p in tmp_path.iterdir()} == {"report.json", "records.csv", "histogram.dat"}
    report = DistributionReport.from_json((tmp_path / "report.json").read_text())
    assert report.exclusion_covers_all
    assert (tmp_path / "histogram.dat").read_text().startswith("# bin_center value")
    first = (tmp_path / "report.json").read_bytes()
    run(capsys, *args)
    assert (tmp_path / "report.json").read_bytes() == first


def test_run_sampled_deterministic(capsys, tmp_path):
    a, b = tmp_path / "a", tmp_path / "b"
    base = ["run", "--family", "fixture:standard-hyperelliptic-1", "--B", "1000", "--sample", "300",
            "--seed", "42", "--probe-primes", "5,7"]
    assert run(capsys, *base, "--out", str(a))[0] == 0
    assert run(capsys, *base, "--out", str(b))[0] == 0
    assert (a / "report.json").read_bytes() == (b / "report.json").read_bytes()


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "semistable_lab", "disc", "--hyperelliptic", "x^3+x+1"],
                          capture_output=True, text=True, cwd=Path(__file__).parent)
    assert proc.returncode == 0 and "-31" in proc.stdout
