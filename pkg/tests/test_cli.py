import json
import math
import subprocess
import sys

import numpy as np
import pytest

from ceslab.cli import main
from ceslab.spaces import HALF, UNIT, PCFun, write_pcfun_csv


@pytest.fixture
def seq_csv(tmp_path):
    p = tmp_path / "a.csv"
    p.write_text("a\n3\n4\n")
    return p


def _values(out):
    return dict(line.split(" ", 1) for line in out.strip().splitlines())


def test_norm_sequence(seq_csv, capsys):
    assert main(["norm", "--space", "lp(2)", "--input", str(seq_csv)]) == 0
    v = _values(capsys.readouterr().out)
    assert float(v["value"]) == pytest.approx(5.0)
    assert v["divergent"] == "false"


def test_norm_f_alpha(tmp_path, capsys):
    alpha = math.exp(-1)
    x = np.concatenate([[0.0], np.geomspace(alpha, 1.0, 2 ** 10 + 1)])
    f = PCFun.from_antiderivative(lambda t: np.log(np.maximum(t, alpha)), x, UNIT)
    p = tmp_path / "f.csv"
    write_pcfun_csv(p, f)
    assert main(["norm", "--space", "Ces(Lp(1,[0,1]))", "--input", str(p)]) == 0
    assert float(_values(capsys.readouterr().out)["value"]) == pytest.approx(0.5, rel=1e-3)


def test_norm_divergent(seq_csv, capsys):
    assert main(["norm", "--space", "Ces(lp(1))", "--input", str(seq_csv)]) == 0
    assert _values(capsys.readouterr().out)["divergent"] == "true"


@pytest.mark.parametrize("argv", [
    ["norm", "--space", "lp(2)", "--input", "/nonexistent.csv"],
    ["norm", "--space", "Ces(lp(", "--input", "x.csv"],
    ["check", "--suite", "nonsense"],
    ["check", "--suite", "identities", "--tol", "identity"],
    ["constant", "--ratio", "nope"],
])
def test_errors_exit_2(argv, capsys):
    assert main(argv) == 2
    assert capsys.readouterr().err.startswith("ceslab: error:")


def test_check_json_to_stdout(capsys):
    rc = main(["check", "--suite", "identities", "--samples", "10"])
    d = json.loads(capsys.readouterr().out)
    assert rc == (0 if d["summary"]["fail"] == 0 else 1)
    assert d["suite"] == "identities" and d["config"]["samples"] == 10


def test_check_out_file_and_exit_code(tmp_path, capsys):
    out = tmp_path / "r.csv"
    rc = main(["check", "--suite", "examples", "--samples", "5", "--format", "csv", "--out", str(out)])
    # the examples suite records one failing value, so the exit status is 1
    assert rc == 1
    assert "examples: pass" in capsys.readouterr().out
    assert out.read_text().startswith("suite,seed,name,status")


def test_kprofile_csv(tmp_path, capsys):
    p = tmp_path / "f.csv"
    write_pcfun_csv(p, PCFun([0.0, 1.0], [1.0], HALF))
    assert main(["kprofile", "--left", "Lp(1,[0,inf))", "--right", "Lp(1,[0,inf),pow(-1))", "--input", str(p),
                 "--points", "5", "--tmin", "0.01", "--tmax", "100"]) == 0
    lines = capsys.readouterr().out.strip().splitlines()
    assert lines[0] == "t,K" and len(lines) == 6
    t, k = map(float, lines[1].split(","))
    assert k == pytest.approx(t + t * math.log(1 / t), rel=1e-9)


def test_constant(capsys):
    assert main(["constant", "--ratio", "identity", "--budget", "20"]) == 0
    d = json.loads(capsys.readouterr().out)
    assert d["supremum"] == pytest.approx(1.0) and d["evaluations"] <= 20


def test_module_entry_point(seq_csv):
    r = subprocess.run([sys.executable, "-m", "ceslab", "norm", "--space", "lp(1)", "--input", str(seq_csv)],
                       capture_output=True, text=True, check=False)
    assert r.returncode == 0 and "value 7.0" in r.stdout
