"""Samplers for QUBO models.

* :func:`exhaustive_solve` - brute-force ground state (oracle).
* :func:`simulated_anneal` - Metropolis single-flip annealing, the classical
  stand-in for an annealing machine.
* :func:`boltzmann_exact` - the full distribution ``P(q) ~ exp(-beta F'(q))``.
* :func:`local_refine` - greedy best-improvement bit-flip descent.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import kernels
from ._json import dumps_canonical, format_real
from .encoding import QubitLayout, as_bits, bits_to_str
from .errors import GuardError
from .qubo import Qubo, energies, energy

EXHAUSTIVE_GUARD = 24
BOLTZMANN_GUARD = 20


def _tie_tol(q: Qubo) -> float:
    return 1e-12 * (1.0 + float(np.abs(q.linear).sum() + np.abs(q.quadratic).sum()))


def _index_to_bits(index: int, n: int) -> np.ndarray:
    return np.array([(index >> (n - 1 - a)) & 1 for a in range(n)], dtype=np.uint8)


def _all_bits(n: int) -> np.ndarray:
    idx = np.arange(1 << n, dtype=np.int64)
    return ((idx[:, None] >> np.arange(n - 1, -1, -1)) & 1).astype(np.uint8)


def exhaustive_solve(q: Qubo, guard: int = EXHAUSTIVE_GUARD) -> tuple[np.ndarray, float]:
    """Global minimum by enumeration; ties go to the lexicographically smallest bits."""
    n = q.n_qubits
    if n > guard:
        raise GuardError(f"exhaustive search over {n} qubits exceeds guard {guard}")
    w = np.ascontiguousarray(q.symmetric())
    v = np.ascontiguousarray(q.linear)
    index, _ = kernels.backend.exhaustive_min(w, v, _tie_tol(q))
    bits = _index_to_bits(index, n)
    return bits, energy(q, bits)


# ---------------------------------------------------------------------------
# sample sets


@dataclass(frozen=True, eq=False)
class Sample:
    bits: np.ndarray
    energy: float
    multiplicity: int = 1

    @property
    def key(self) -> str:
        return bits_to_str(self.bits)

    def to_dict(self) -> dict:
        return {"bits": self.key, "energy": self.energy, "multiplicity": self.multiplicity}


@dataclass(frozen=True)
class SampleSet:
    """Distinct assignments sorted by energy, then by bit string."""

    samples: tuple[Sample, ...]

    def __post_init__(self):
        ordered = tuple(sorted(self.samples, key=lambda s: (s.energy, s.key)))
        object.__setattr__(self, "samples", ordered)

    def __len__(self):
        return len(self.samples)

    def __iter__(self):
        return iter(self.samples)

    def __eq__(self, other):
        if not isinstance(other, SampleSet):
            return NotImplemented
        return [s.to_dict() for s in self] == [s.to_dict() for s in other]

    @property
    def total_reads(self) -> int:
        return sum(s.multiplicity for s in self.samples)

    @classmethod
    def from_states(cls, q: Qubo, states: np.ndarray) -> "SampleSet":
        states = np.asarray(states, dtype=np.uint8)
        if states.size == 0 and states.shape[0] == 0:
            return cls(())
        uniq, counts = np.unique(states, axis=0, return_counts=True)
        es = energies(q, uniq)
        return cls(tuple(Sample(bits.copy(), float(e), int(c))
                         for bits, e, c in zip(uniq, es, counts)))

    def to_list(self) -> list[dict]:
        return [s.to_dict() for s in self.samples]

    def save(self, path) -> None:
        Path(path).write_text(dumps_canonical(self.to_list()) + "\n", encoding="utf-8")

    @classmethod
    def from_list(cls, items) -> "SampleSet":
        return cls(tuple(Sample(as_bits(d["bits"]), float(d["energy"]),
                                int(d.get("multiplicity", 1))) for d in items))


def best_sample(s: SampleSet) -> tuple[np.ndarray, float]:
    if not len(s):
        raise ValueError("empty sample set")
    emin = min(x.energy for x in s)
    tol = 1e-12 * (1.0 + abs(emin))
    best = min((x for x in s if x.energy <= emin + tol), key=lambda x: x.key)
    return best.bits.copy(), best.energy


# ---------------------------------------------------------------------------
# simulated annealing


@dataclass(frozen=True)
class AnnealParams:
    """Settings of the annealer.

    ``sweeps`` plays the part of anneal time per read and ``reads`` the
    number of independent anneals.
    """

    reads: int = 1000
    sweeps: int = 1000
    inv_temp_start: float = 0.1
    inv_temp_end: float = 10.0
    seed: int = 0

    def __post_init__(self):
        if self.reads < 1 or self.sweeps < 1:
            raise ValueError("reads and sweeps must be at least 1")
        if not 0.0 < self.inv_temp_start <= self.inv_temp_end:
            raise ValueError("need 0 < inv_temp_start <= inv_temp_end")
        if not 0 <= self.seed < 1 << 64:
            raise ValueError("seed must fit in 64 unsigned bits")

    def schedule(self) -> np.ndarray:
        """Geometric inverse-temperature ladder, one rung per sweep."""
        if self.sweeps == 1:
            return np.array([self.inv_temp_start])
        return np.geomspace(self.inv_temp_start, self.inv_temp_end, self.sweeps)


def anneal_states(q: Qubo, params: AnnealParams, n_threads: int | None = None,
                  backend=None) -> np.ndarray:
    """Raw final states, one row per read (read ``k`` uses stream ``seed ^ k``)."""
    backend = backend or kernels.backend
    w = np.ascontiguousarray(q.symmetric())
    v = np.ascontiguousarray(q.linear)
    threads = n_threads or kernels.thread_count()
    return backend.anneal(w, v, np.ascontiguousarray(params.schedule()),
                          params.seed, params.reads, threads)


def simulated_anneal(q: Qubo, params: AnnealParams | None = None,
                     n_threads: int | None = None) -> SampleSet:
    params = params or AnnealParams()
    return SampleSet.from_states(q, anneal_states(q, params, n_threads))


# ---------------------------------------------------------------------------
# greedy refinement


def local_refine(q: Qubo, a) -> np.ndarray:
    """Best-improvement single-flip descent to a 1-flip local minimum.

    Each step flips the qubit with the most negative energy change (lowest
    index on ties) and updates local fields in O(n).
    """
    bits = as_bits(a, q.n_qubits).copy()
    n = q.n_qubits
    if n == 0:
        return bits
    w = q.symmetric()
    field = q.linear + w @ bits.astype(np.float64)
    threshold = -1e-12 * (1.0 + float(np.abs(q.linear).max() + np.abs(w).sum(axis=1).max()))
    # each flip lowers the energy, so no state repeats; bound guards runaway float drift
    for _ in range(n * (1 << min(n, 20))):
        delta = (1.0 - 2.0 * bits) * field
        a_best = int(np.argmin(delta))
        if delta[a_best] >= threshold:
            break
        dq = 1.0 - 2.0 * bits[a_best]
        bits[a_best] ^= 1
        field += dq * w[a_best]
    return bits


# ---------------------------------------------------------------------------
# exact Boltzmann distribution


@dataclass(frozen=True, eq=False)
class BoltzmannTable:
    """Probabilities of all ``2**n`` assignments in lexicographic order."""

    n_qubits: int
    inv_temp: float
    energies: np.ndarray
    probabilities: np.ndarray
    log_partition: float
    _bits: np.ndarray | None = field(default=None, repr=False)

    @property
    def partition(self) -> float:
        """Z' = sum exp(-beta F'(q)); may overflow to inf for large models."""
        try:
            return math.exp(self.log_partition)
        except OverflowError:
            return math.inf

    @property
    def assignments(self) -> np.ndarray:
        if self._bits is None:
            object.__setattr__(self, "_bits", _all_bits(self.n_qubits))
        return self._bits

    def argmax(self) -> np.ndarray:
        """Indices of the most probable assignments."""
        pmax = self.probabilities.max()
        return np.flatnonzero(self.probabilities >= pmax * (1.0 - 1e-12))

    def to_csv(self) -> str:
        lines = ["bits,probability"]
        lines += [f"{bits_to_str(b)},{format_real(p)}"
                  for b, p in zip(self.assignments, self.probabilities)]
        return "\n".join(lines) + "\n"


def boltzmann_exact(q: Qubo, inv_temp: float = 1.0, guard: int = BOLTZMANN_GUARD
                    ) -> BoltzmannTable:
    """Exact ``P(q) = exp(-inv_temp F'(q)) / Z'`` (offset cancels in the ratio)."""
    n = q.n_qubits
    if n > guard:
        raise GuardError(f"Boltzmann table over {n} qubits exceeds guard {guard}")
    if not inv_temp > 0.0:
        raise ValueError("inv_temp must be positive")
    w = np.ascontiguousarray(q.symmetric())
    v = np.ascontiguousarray(q.linear)
    es = kernels.backend.all_energies(w, v)
    shifted = -inv_temp * (es - es.min())
    weights = np.exp(shifted)
    total = math.fsum(weights)
    probs = weights / total
    log_z = -inv_temp * float(es.min()) + math.log(total)
    return BoltzmannTable(n, float(inv_temp), es, probs, log_z)


def decoded_values(table: BoltzmannTable, layout: QubitLayout) -> np.ndarray:
    """Decoded x for every row of ``table`` (shape ``(2**n, n_vars)``)."""
    if layout.total_qubits != table.n_qubits:
        raise ValueError("layout does not match the table")
    qpv = layout.encoding.qubits_per_var
    blocks = table.assignments.reshape(-1, layout.n_vars, qpv).astype(np.float64)
    return blocks @ layout.encoding.slot_weights + 0.0


def x_masses(table: BoltzmannTable, layout: QubitLayout) -> tuple[np.ndarray, np.ndarray]:
    """Distinct decoded vectors and the total probability mapped onto each."""
    xs = decoded_values(table, layout)
    uniq, inverse = np.unique(xs, axis=0, return_inverse=True)
    mass = np.bincount(inverse.reshape(-1), weights=table.probabilities, minlength=len(uniq))
    return uniq, mass


def ground_mass(q: Qubo, layout: QubitLayout, x_target, inv_temp: float = 1.0,
                table: BoltzmannTable | None = None) -> float:
    """Probability that a Boltzmann sample decodes to ``x_target``."""
    table = table or boltzmann_exact(q, inv_temp)
    xs = decoded_values(table, layout)
    target = np.asarray(x_target, dtype=np.float64)
    hit = np.all(np.abs(xs - target) <= 1e-12 * (1.0 + np.abs(target)), axis=1)
    return float(table.probabilities[hit].sum())
