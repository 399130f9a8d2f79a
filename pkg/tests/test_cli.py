import subprocess
import sys

import pytest

import builders
from oretel.cli import main

DIFF = str(builders.DATA / "diff_example.sys")
BESSEL2 = str(builders.DATA / "bessel_k2.sys")
NONPROPER = str(builders.DATA / "nonproper.sys")
GAMMA = str(builders.DATA / "gamma_inverse.sys")


def run(capsys, *argv):
    status = main(list(argv))
    out, err = capsys.readouterr()
    return status, out, err


def fields(text):
    out = {}
    for line in text.splitlines():
        key, _, value = line.partition(": ")
        out.setdefault(key, value)
    return out


def test_telescope_differential_example(capsys):
    status, out, _ = run(capsys, "telescope", DIFF, "--phi", "0")
    assert status == 0
    f = fields(out)
    assert f["order"] == "2" and f["verified"] == "true"
    assert "elapsed" in f


def test_bound_bessel(capsys):
    status, out, _ = run(capsys, "bound", BESSEL2, "--phi", "0", "--format", "structured")
    assert status == 0
    assert fields(out)["bound"] == "8"


def test_properness_negative(capsys):
    status, out, _ = run(capsys, "properness", NONPROPER)
    assert status == 1
    assert fields(out)["proper"] == "false"


def test_properness_positive_reports_witness(capsys):
    status, out, _ = run(capsys, "properness", GAMMA, "--format", "structured")
    assert status == 0
    f = fields(out)
    assert f["proper"] == "true" and f["eta"] == "0"
    assert "witness_g" in f


def test_structured_output_is_reproducible(capsys):
    first = run(capsys, "telescope", GAMMA, "--format", "structured")[1]
    second = run(capsys, "telescope", GAMMA, "--format", "structured")[1]
    assert first == second
    assert "elapsed" not in first


def test_verify_round_trip(capsys, tmp_path):
    pair = tmp_path / "pair.txt"
    assert run(capsys, "telescope", DIFF, "--phi", "0", "--format", "structured", "--out", str(pair))[0] == 0
    status, out, _ = run(capsys, "verify", DIFF, str(pair))
    assert status == 0 and fields(out)["verified"] == "true"
    lines = pair.read_text().splitlines()
    bad = [ln + " + 1" if ln.startswith("telescoper:") else ln for ln in lines]
    pair.write_text("\n".join(bad) + "\n")
    status, out, _ = run(capsys, "verify", DIFF, str(pair))
    assert status == 1 and fields(out)["verified"] == "false"


def test_order_cap_reports_failure(capsys):
    status, out, _ = run(capsys, "telescope", BESSEL2, "--phi", "0", "--r-max", "3")
    assert status == 1
    f = fields(out)
    assert f["status"] == "failure" and f["r max"] == "3"


def test_truncated_file(capsys, tmp_path):
    path = tmp_path / "cut.sys"
    path.write_text("\n".join(open(GAMMA).read().splitlines()[:5]) + "\n")
    status, _, err = run(capsys, "telescope", str(path))
    assert status == 2
    assert "missing section" in err


def test_non_polynomial_e(capsys, tmp_path):
    text = open(BESSEL2).read().replace("e: 1, 0", "e: 1/x, 0")
    path = tmp_path / "bad.sys"
    path.write_text(text)
    status, _, err = run(capsys, "telescope", str(path))
    assert status == 2
    assert "admissibility" in err


def test_syntax_error_position(capsys, tmp_path):
    text = open(GAMMA).read().replace("U: 1", "U: 1 + * x")
    path = tmp_path / "bad.sys"
    path.write_text(text)
    status, _, err = run(capsys, "bound", str(path))
    assert status == 2
    lineno = next(i for i, ln in enumerate(text.splitlines(), 1) if ln.startswith("U:"))
    assert f":{lineno}:" in err


def test_gff_subcommand(capsys):
    status, out, _ = run(capsys, "gff", "y*(y+1)^2*(y+2)")
    assert status == 0
    assert "factor: [1] y + 1" in out and "factor: [3] y" in out


def test_apply_subcommand(capsys):
    status, out, _ = run(capsys, "apply", "Dy + 1", "y^2", "--algebra", "x: shift, y: forward_difference")
    assert status == 0
    assert fields(out)["result"].replace(" ", "") in ("y^2+2*y+1", "(y+1)^2")


@pytest.mark.parametrize(
    "argv",
    [
        ["telescope", GAMMA, "--r-start", "0"],
        ["telescope", GAMMA, "--r-start", "3", "--r-max", "2"],
        ["bound", DIFF, "--phi", "3"],
        ["bound", DIFF, "--phi", "-1"],
        ["telescope", "/nonexistent.sys"],
    ],
)
def test_bad_input_exit_code(capsys, argv):
    assert run(capsys, *argv)[0] == 2


def test_thread_variable_validated(capsys, monkeypatch):
    monkeypatch.setenv("ORETEL_THREADS", "many")
    assert run(capsys, "bound", GAMMA)[0] == 2
    monkeypatch.setenv("ORETEL_THREADS", "4")
    assert run(capsys, "bound", GAMMA)[0] == 0


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "oretel.cli", "bound", GAMMA, "--format", "structured"],
        capture_output=True,
        text=True,
        check=False,
    )
    assert proc.returncode == 0
    assert "bound: 2" in proc.stdout
