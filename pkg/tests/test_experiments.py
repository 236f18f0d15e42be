import numpy as np
import pytest

from qals.encoding import Encoding, Scheme
from qals.experiments import (EXPERIMENT1, EXPERIMENT2, ExperimentConfig, auto_theta,
                              format_rows, run_experiment, run_experiment1, run_experiment2)
from qals.problem import gen_random_problem
from qals.qubo import build_real
from qals.samplers import exhaustive_solve

QUICK = dict(reads=100, sweeps=200)


def test_defaults():
    assert (EXPERIMENT1.m, EXPERIMENT1.n, EXPERIMENT1.seeds) == (100, 8, (4, 5, 6, 7))
    assert set(EXPERIMENT1.schemes) == {Scheme.BASIC, Scheme.ONES}
    assert (EXPERIMENT1.o, EXPERIMENT1.p) == (-5, -2)
    assert EXPERIMENT2.n == 12 and EXPERIMENT2.schemes == (Scheme.ONES,)


@pytest.mark.slow
def test_experiment1_default_ordering():
    rows = run_experiment1()
    assert [r.seed for r in rows] == [4, 5, 6, 7]
    for row in rows:
        assert set(row.schemes) == {"Basic", "OnesComplement"}
        for res in row.schemes.values():
            assert res.residual >= row.residual_classical - 1e-9
            assert res.residual ** 2 == pytest.approx(res.residual_sq_from_energy, rel=1e-9)
    assert "classical" in format_rows(rows)


def test_refine_never_hurts():
    plain = run_experiment1(**QUICK, seeds=(4, 5))
    refined = run_experiment1(**QUICK, seeds=(4, 5), refine=True)
    for a, b in zip(plain, refined):
        for name in a.schemes:
            assert b.schemes[name].residual <= a.schemes[name].residual + 1e-12


def test_grid_guarded_run_hits_grid_optimum():
    cfg = ExperimentConfig(n=2, o=-2, p=-1, schemes=("ones", "twos", "Basic"),
                           reads=200, sweeps=300)
    rows = run_experiment(cfg)
    for row in rows:
        problem = gen_random_problem(cfg.m, cfg.n, row.seed, cfg.round_digits)
        for name, res in row.schemes.items():
            assert res.grid_residual is not None
            assert res.residual >= res.grid_residual - 1e-9
            q, _ = build_real(problem, Encoding(Scheme.parse(name), cfg.o, cfg.p))
            _, e_min = exhaustive_solve(q)
            if res.best_energy <= e_min + 1e-12:
                assert res.residual == pytest.approx(res.grid_residual, abs=1e-9)


def test_experiment2_rows():
    rows = run_experiment2(**QUICK)
    assert len(rows) == 4
    for row in rows:
        assert list(row.schemes) == ["OnesComplement"]
        assert row.schemes["OnesComplement"].residual >= row.residual_classical - 1e-9


def test_output_is_reproducible(tmp_path):
    paths = [tmp_path / "a.json", tmp_path / "b.json"]
    for path in paths:
        run_experiment2(**QUICK, seeds=(4,), output=str(path))
    assert paths[0].read_bytes() == paths[1].read_bytes()


def test_more_reads_never_worse():
    few = run_experiment2(reads=20, sweeps=100, seeds=(4, 5))
    many = run_experiment2(reads=200, sweeps=100, seeds=(4, 5))
    for a, b in zip(few, many):
        assert b.schemes["OnesComplement"].best_energy <= a.schemes["OnesComplement"].best_energy


def test_auto_theta():
    assert auto_theta(np.array([0.26, -0.05]), 4) == (-5, -2)
    assert auto_theta(np.array([3.0]), 2) == (0, 1)
    rows = run_experiment2(**QUICK, seeds=(4,), auto_theta=True)
    res = rows[0].schemes["OnesComplement"]
    assert res.p - res.o == EXPERIMENT2.p - EXPERIMENT2.o


def test_bad_config():
    with pytest.raises(ValueError):
        ExperimentConfig(m=5, n=8)
    with pytest.raises(ValueError):
        ExperimentConfig(seeds=())
