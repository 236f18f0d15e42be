"""Residual comparison experiments: classical solution vs. annealed encodings.

Each seed produces one random problem. The classical reference is the
Householder QR solution; every requested encoding is built into a QUBO,
sampled with the annealer (optionally polished by :func:`local_refine`) and
the best sample decoded back to ``x``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from pathlib import Path

import numpy as np

from ._json import dumps_canonical
from .encoding import (GRID_GUARD, Encoding, Scheme, decode, grid_optimum)
from .problem import gen_random_problem, residual, solve_qr
from .qubo import build_real, energy
from .samplers import AnnealParams, anneal_states, best_sample, local_refine, SampleSet


@dataclass(frozen=True)
class ExperimentConfig:
    m: int = 100
    n: int = 8
    seeds: tuple[int, ...] = (4, 5, 6, 7)
    schemes: tuple[Scheme, ...] = (Scheme.BASIC, Scheme.ONES)
    o: int = -5
    p: int = -2
    reads: int = 1000
    sweeps: int = 1000
    inv_temp_start: float = 0.1
    inv_temp_end: float = 10.0
    refine: bool = False
    auto_theta: bool = False
    round_digits: int = 3
    output: str | None = None

    def __post_init__(self):
        if self.m <= self.n:
            raise ValueError(f"m must exceed n (got m={self.m}, n={self.n})")
        if not self.seeds:
            raise ValueError("at least one seed is required")
        if self.o > self.p:
            raise ValueError(f"need o <= p, got o={self.o}, p={self.p}")
        object.__setattr__(self, "seeds", tuple(int(s) for s in self.seeds))
        object.__setattr__(self, "schemes", tuple(Scheme.parse(s) for s in self.schemes))

    def anneal_params(self, seed: int) -> AnnealParams:
        return AnnealParams(self.reads, self.sweeps, self.inv_temp_start,
                            self.inv_temp_end, seed)


EXPERIMENT1 = ExperimentConfig()
EXPERIMENT2 = ExperimentConfig(n=12, schemes=(Scheme.ONES,))


@dataclass
class SchemeResult:
    o: int
    p: int
    residual: float
    best_energy: float
    offset: float
    grid_residual: float | None = None

    @property
    def residual_sq_from_energy(self) -> float:
        return self.best_energy + self.offset

    def to_dict(self) -> dict:
        doc = {"o": self.o, "p": self.p, "residual": self.residual,
               "best_energy": self.best_energy,
               "best_energy_plus_offset": self.residual_sq_from_energy}
        if self.grid_residual is not None:
            doc["residual_grid_optimum"] = self.grid_residual
        return doc


@dataclass
class ExperimentRow:
    seed: int
    residual_classical: float
    schemes: dict[str, SchemeResult] = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {"seed": self.seed, "residual_classical": self.residual_classical,
                "schemes": {k: v.to_dict() for k, v in self.schemes.items()}}


def auto_theta(x: np.ndarray, n_bits: int) -> tuple[int, int]:
    """Heuristic exponent window from the magnitude of a reference solution.

    ``p`` is the exponent of the largest component's leading bit, and the
    window spans ``n_bits`` exponents downward from there.
    """
    peak = float(np.max(np.abs(x)))
    p = math.floor(math.log2(peak)) if peak > 0.0 else 0
    return p - n_bits + 1, p


def solve_encoded(problem, enc: Encoding, params: AnnealParams, refine: bool = False,
                  with_grid: bool = True) -> SchemeResult:
    qubo, layout = build_real(problem, enc)
    samples = SampleSet.from_states(qubo, anneal_states(qubo, params))
    bits, e = best_sample(samples)
    if refine:
        bits = local_refine(qubo, bits)
        e = min(e, energy(qubo, bits))
    x = decode(layout, bits)
    grid = None
    if with_grid and problem.n * enc.qubits_per_var <= GRID_GUARD:
        grid = grid_optimum(problem, enc).residual
    return SchemeResult(enc.o, enc.p, residual(problem, x), e, qubo.offset, grid)


def run_experiment(cfg: ExperimentConfig) -> list[ExperimentRow]:
    rows = []
    for seed in cfg.seeds:
        problem = gen_random_problem(cfg.m, cfg.n, seed, cfg.round_digits)
        classical = solve_qr(problem)
        o, p = (cfg.o, cfg.p)
        if cfg.auto_theta:
            o, p = auto_theta(classical.x, cfg.p - cfg.o + 1)
        row = ExperimentRow(seed, classical.residual_norm)
        for scheme in cfg.schemes:
            row.schemes[scheme.value] = solve_encoded(
                problem, Encoding(scheme, o, p), cfg.anneal_params(seed), cfg.refine)
        rows.append(row)
    if cfg.output:
        write_rows(rows, cfg.output)
    return rows


def run_experiment1(cfg: ExperimentConfig | None = None, **overrides) -> list[ExperimentRow]:
    """Eight-variable comparison of the basic and one's complement encodings."""
    return run_experiment(replace(cfg or EXPERIMENT1, **overrides))


def run_experiment2(cfg: ExperimentConfig | None = None, **overrides) -> list[ExperimentRow]:
    """Twelve-variable run with the one's complement encoding only."""
    return run_experiment(replace(cfg or EXPERIMENT2, **overrides))


def write_rows(rows: list[ExperimentRow], path) -> None:
    Path(path).write_text(dumps_canonical([r.to_dict() for r in rows]) + "\n", encoding="utf-8")


def format_rows(rows: list[ExperimentRow]) -> str:
    if not rows:
        return ""
    names = list(rows[0].schemes)
    head = ["seed", "classical"] + names
    grid_cols = [nm for nm in names if rows[0].schemes[nm].grid_residual is not None]
    head += [f"grid({nm})" for nm in grid_cols]
    lines = ["  ".join(f"{h:>16}" for h in head)]
    for r in rows:
        cells = [f"{r.seed:>16d}", f"{r.residual_classical:>16.4f}"]
        cells += [f"{r.schemes[nm].residual:>16.4f}" for nm in names]
        cells += [f"{r.schemes[nm].grid_residual:>16.4f}" for nm in grid_cols]
        lines.append("  ".join(cells))
    return "\n".join(lines)
