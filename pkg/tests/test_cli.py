import json
import subprocess
import sys

import numpy as np
import pytest

from qals.cli import main
from qals.qubo import Ising, Qubo


@pytest.fixture
def problem_file(tmp_path):
    path = tmp_path / "p.csv"
    assert main(["gen", "--m", "12", "--n", "2", "--seed", "3", "--out", str(path)]) == 0
    return path


def run_json(capsys, argv):
    assert main(argv) == 0
    return json.loads(capsys.readouterr().out)


def test_cost_json(capsys):
    doc = run_json(capsys, ["cost", "--m", "100", "--n", "8", "--c", "5", "--beta", "2"])
    assert doc["lambda_upper"] == pytest.approx(0.127, abs=1e-3)
    assert doc["speedup_feasible"] is False
    assert doc["cost_qa_prep"] == 23876


def test_cost_table(capsys):
    assert main(["cost", "--m", "5000", "--n", "1000", "--c", "5", "--table"]) == 0
    out = capsys.readouterr().out
    assert "speedup over normal equations: feasible" in out


def test_gen_formats(tmp_path, capsys):
    doc = run_json(capsys, ["gen", "--m", "5", "--n", "2", "--seed", "1"])
    assert doc["m"] == 5 and len(doc["a"]) == 5
    path = tmp_path / "p.json"
    assert main(["gen", "--m", "5", "--n", "2", "--seed", "1", "--out", str(path)]) == 0
    assert json.loads(path.read_text()) == doc


def test_build_and_solve_exhaustive(problem_file, tmp_path, capsys):
    qpath = tmp_path / "q.json"
    assert main(["build", str(problem_file), "--scheme", "twos", "--o", "-2", "--p", "0",
                 "--out", str(qpath)]) == 0
    q = Qubo.load(qpath)
    assert q.n_qubits == 8 and q.layout is not None
    samples = run_json(capsys, ["solve", str(qpath), "--sampler", "exhaustive"])
    assert len(samples) == 1
    assert set(samples[0]) == {"bits", "energy", "multiplicity"}
    assert len(samples[0]["bits"]) == 8


def test_solve_sa_deterministic(problem_file, tmp_path):
    qpath = tmp_path / "q.json"
    main(["build", str(problem_file), "--out", str(qpath)])
    outs = [tmp_path / "s1.json", tmp_path / "s2.json"]
    for out in outs:
        assert main(["solve", str(qpath), "--sampler", "sa", "--seed", "7", "--reads", "50",
                     "--sweeps", "50", "--out", str(out)]) == 0
    assert outs[0].read_bytes() == outs[1].read_bytes()
    samples = json.loads(outs[0].read_text())
    assert sum(s["multiplicity"] for s in samples) == 50
    energies = [s["energy"] for s in samples]
    assert energies == sorted(energies)


def test_solve_refine(problem_file, tmp_path, capsys):
    qpath = tmp_path / "q.json"
    main(["build", str(problem_file), "--out", str(qpath)])
    raw = run_json(capsys, ["solve", str(qpath), "--reads", "20", "--sweeps", "3"])
    refined = run_json(capsys, ["solve", str(qpath), "--reads", "20", "--sweeps", "3", "--refine"])
    assert refined[0]["energy"] <= raw[0]["energy"]


def test_exhaustive_guard_exit_code(tmp_path, capsys):
    qpath = tmp_path / "big.json"
    Qubo(np.zeros(25), np.zeros((25, 25))).save(qpath)
    assert main(["solve", str(qpath), "--sampler", "exhaustive"]) == 1
    assert "guard" in capsys.readouterr().err


def test_build_ising_normalized(problem_file, tmp_path):
    out = tmp_path / "i.json"
    assert main(["build", str(problem_file), "--ising", "--normalize", "--out", str(out)]) == 0
    doc = json.loads(out.read_text())
    assert doc["vartype"] == "SPIN" and 0 < doc["scale"] <= 1
    model = Ising.from_dict(doc)
    assert np.abs(model.h).max() <= 2 and np.abs(model.j).max() <= 1


def test_boltzmann_csv(problem_file, tmp_path):
    qpath, out = tmp_path / "q.json", tmp_path / "b.csv"
    main(["build", str(problem_file), "--scheme", "twos", "--o", "0", "--p", "0",
          "--out", str(qpath)])
    assert main(["boltzmann", str(qpath), "--out", str(out)]) == 0
    lines = out.read_text().splitlines()
    assert lines[0] == "bits,probability" and len(lines) == 1 + 2**4
    assert sum(float(ln.split(",")[1]) for ln in lines[1:]) == pytest.approx(1.0, abs=1e-10)


def test_experiment_cli(tmp_path, capsys):
    out = tmp_path / "rows.json"
    assert main(["experiment2", "--seeds", "4", "--reads", "20", "--sweeps", "20",
                 "--out", str(out)]) == 0
    rows = json.loads(out.read_text())
    assert rows[0]["seed"] == 4 and "OnesComplement" in rows[0]["schemes"]
    assert "classical" in capsys.readouterr().out


def test_missing_file_exit_code(tmp_path, capsys):
    assert main(["build", str(tmp_path / "nope.csv")]) == 1


def test_bad_problem_exit_code(tmp_path, capsys):
    path = tmp_path / "bad.csv"
    path.write_text("2 2\n1,0\n0,1\n1\n0\n")
    assert main(["build", str(path)]) == 1
    assert "m must exceed n" in capsys.readouterr().err


@pytest.mark.parametrize("argv", [["frobnicate"], ["cost", "--m", "4", "--bogus", "1"], []])
def test_usage_errors_exit_2(argv):
    with pytest.raises(SystemExit) as exc:
        main(argv)
    assert exc.value.code == 2


def test_help_documents_sampler_mapping(capsys):
    with pytest.raises(SystemExit):
        main(["solve", "--help"])
    out = capsys.readouterr().out
    assert "anneal time" in out and "--reads" in out


def test_console_entry_point():
    proc = subprocess.run([sys.executable, "-m", "qals.cli", "cost", "--m", "10", "--n", "2",
                           "--c", "3"], capture_output=True, text=True)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["n"] == 2
