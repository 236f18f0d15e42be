"""QUBO and Ising models built from least squares problems.

Quadratic couplings are stored as dense strictly upper triangular arrays:
``quadratic[a, b]`` with ``a < b`` is the coefficient of ``q_a q_b``. Self
terms never appear because ``q**2 == q`` folds them into the linear part.
Every model carries a constant ``offset`` so that, for a model built from a
problem, ``energy(model, q) + model.offset == ||A decode(q) - b||**2``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from ._json import dumps_canonical
from .encoding import Encoding, QubitLayout, Scheme, as_bits
from .problem import LeastSquaresProblem


def _readonly(arr) -> np.ndarray:
    out = np.array(arr, dtype=np.float64)
    out.setflags(write=False)
    return out


def _check_upper(mat: np.ndarray, size: int, name: str) -> np.ndarray:
    mat = _readonly(mat)
    if mat.shape != (size, size):
        raise ValueError(f"{name} must be {size}x{size}, got {mat.shape}")
    if np.any(np.tril(mat) != 0.0):
        raise ValueError(f"{name} must be strictly upper triangular")
    if not np.all(np.isfinite(mat)):
        raise ValueError(f"{name} has non-finite entries")
    return mat


def _upper_from_items(size: int, items) -> np.ndarray:
    mat = np.zeros((size, size))
    for (a, b), val in items:
        if a == b:
            raise ValueError(f"self pair ({a}, {a}) is not a coupling")
        lo, hi = (a, b) if a < b else (b, a)
        mat[lo, hi] += val
    return mat


class _Model:
    """Shared storage/serialisation of binary and spin models."""

    _vartype = ""

    def _coeffs(self) -> tuple[np.ndarray, np.ndarray]:
        raise NotImplementedError

    @property
    def size(self) -> int:
        return self._coeffs()[0].shape[0]

    def linear_items(self) -> list[tuple[int, float]]:
        lin = self._coeffs()[0]
        return [(a, float(lin[a])) for a in range(lin.shape[0])]

    def quadratic_items(self) -> list[tuple[int, int, float]]:
        quad = self._coeffs()[1]
        rows, cols = np.nonzero(quad)
        return [(int(a), int(b), float(quad[a, b])) for a, b in zip(rows, cols)]

    def symmetric(self) -> np.ndarray:
        """Full symmetric coupling matrix with zero diagonal."""
        quad = self._coeffs()[1]
        return quad + quad.T

    def to_dict(self) -> dict:
        doc = {
            "n": self.size,
            "vartype": self._vartype,
            "linear": [[a, v] for a, v in self.linear_items()],
            "quadratic": [[a, b, v] for a, b, v in self.quadratic_items()],
            "offset": float(self.offset),
        }
        if getattr(self, "layout", None) is not None:
            doc["layout"] = {"n_vars": self.layout.n_vars,
                             "encoding": self.layout.encoding.to_dict()}
        return doc

    def save(self, path) -> None:
        Path(path).write_text(dumps_canonical(self.to_dict()) + "\n", encoding="utf-8")


def _parse_model_doc(doc: dict):
    n = int(doc["n"])
    lin = np.zeros(n)
    for a, v in doc.get("linear", []):
        lin[int(a)] += float(v)
    quad = _upper_from_items(n, (((int(a), int(b)), float(v))
                                 for a, b, v in doc.get("quadratic", [])))
    layout = None
    if "layout" in doc:
        layout = QubitLayout(int(doc["layout"]["n_vars"]),
                             Encoding.from_dict(doc["layout"]["encoding"]))
    return lin, quad, float(doc.get("offset", 0.0)), layout


@dataclass(frozen=True, eq=False)
class Qubo(_Model):
    """``F'(q) = sum_a linear[a] q_a + sum_{a<b} quadratic[a, b] q_a q_b``."""

    linear: np.ndarray
    quadratic: np.ndarray
    offset: float = 0.0
    layout: QubitLayout | None = field(default=None, compare=False)

    _vartype = "BINARY"

    def __post_init__(self):
        lin = _readonly(self.linear)
        if lin.ndim != 1 or not np.all(np.isfinite(lin)):
            raise ValueError("linear must be a finite 1-D array")
        object.__setattr__(self, "linear", lin)
        object.__setattr__(self, "quadratic", _check_upper(self.quadratic, lin.shape[0], "quadratic"))
        object.__setattr__(self, "offset", float(self.offset))

    def _coeffs(self):
        return self.linear, self.quadratic

    @property
    def n_qubits(self) -> int:
        return self.linear.shape[0]

    @classmethod
    def from_maps(cls, n: int, linear: dict, quadratic: dict, offset: float = 0.0) -> "Qubo":
        lin = np.zeros(n)
        for a, v in linear.items():
            lin[a] += v
        return cls(lin, _upper_from_items(n, quadratic.items()), offset)

    @classmethod
    def from_dict(cls, doc: dict) -> "Qubo":
        if doc.get("vartype", "BINARY") != "BINARY":
            raise ValueError("document holds a spin model, not a QUBO")
        lin, quad, offset, layout = _parse_model_doc(doc)
        return cls(lin, quad, offset, layout)

    @classmethod
    def load(cls, path) -> "Qubo":
        import json
        return cls.from_dict(json.loads(Path(path).read_text(encoding="utf-8")))


@dataclass(frozen=True, eq=False)
class Ising(_Model):
    """``F(s) = sum_a h[a] s_a + sum_{a<b} j[a, b] s_a s_b`` over spins ``s = +-1``."""

    h: np.ndarray
    j: np.ndarray
    offset: float = 0.0

    _vartype = "SPIN"

    def __post_init__(self):
        h = _readonly(self.h)
        if h.ndim != 1 or not np.all(np.isfinite(h)):
            raise ValueError("h must be a finite 1-D array")
        object.__setattr__(self, "h", h)
        object.__setattr__(self, "j", _check_upper(self.j, h.shape[0], "j"))
        object.__setattr__(self, "offset", float(self.offset))

    def _coeffs(self):
        return self.h, self.j

    @property
    def n_spins(self) -> int:
        return self.h.shape[0]

    @classmethod
    def from_dict(cls, doc: dict) -> "Ising":
        if doc.get("vartype", "SPIN") != "SPIN":
            raise ValueError("document holds a binary model, not an Ising model")
        h, j, offset, _ = _parse_model_doc(doc)
        return cls(h, j, offset)


# ---------------------------------------------------------------------------
# energies


def energy(q: Qubo, a) -> float:
    """QUBO energy of one assignment, offset excluded."""
    bits = as_bits(a, q.n_qubits).astype(np.float64)
    return float(q.linear @ bits + bits @ q.quadratic @ bits)


def energies(q: Qubo, assignments: np.ndarray) -> np.ndarray:
    """Vectorised ``energy`` over the rows of a 0/1 matrix."""
    x = np.asarray(assignments, dtype=np.float64)
    return x @ q.linear + np.einsum("ij,ij->i", x @ q.quadratic, x)


def ising_energy(model: Ising, spins) -> float:
    s = np.asarray(spins, dtype=np.float64)
    if s.shape != (model.n_spins,) or not np.all(np.abs(s) == 1.0):
        raise ValueError("spins must be a +-1 vector of matching length")
    return float(model.h @ s + s @ model.j @ s)


def spins_from_bits(a) -> np.ndarray:
    return 2.0 * as_bits(a).astype(np.float64) - 1.0


# ---------------------------------------------------------------------------
# builders


def _coefficients(a: np.ndarray, b: np.ndarray, weights: np.ndarray,
                  variable_of: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    # column of qubit (j, s) is s * A[:, j]
    sa = a[:, variable_of] * weights
    linear = np.sum(sa * (sa - 2.0 * b[:, None]), axis=0)
    quadratic = np.triu(2.0 * (sa.T @ sa), k=1)
    return linear, quadratic


def build_binary(problem: LeastSquaresProblem) -> Qubo:
    """QUBO for ``min ||A q - b||^2`` with binary ``q``."""
    n = problem.n
    linear, quadratic = _coefficients(problem.a, problem.b, np.ones(n), np.arange(n))
    return Qubo(linear, quadratic, float(problem.b @ problem.b))


def build_real(problem: LeastSquaresProblem, e: Encoding) -> tuple[Qubo, QubitLayout]:
    """QUBO whose qubits encode every ``x_j`` under encoding ``e``."""
    layout = QubitLayout(problem.n, e)
    linear, quadratic = _coefficients(problem.a, problem.b, layout.weights, layout.variable_of)
    return Qubo(linear, quadratic, float(problem.b @ problem.b), layout), layout


@dataclass
class FlopCounter:
    linear_prep: int = 0
    quadratic_template: int = 0
    quadratic_scaling: int = 0

    @property
    def total(self) -> int:
        return self.linear_prep + self.quadratic_template + self.quadratic_scaling

    def as_dict(self) -> dict:
        return {"linear_prep": self.linear_prep,
                "quadratic_template": self.quadratic_template,
                "quadratic_scaling": self.quadratic_scaling,
                "total": self.total}


def build_real_counted(problem: LeastSquaresProblem, e: Encoding
                       ) -> tuple[Qubo, QubitLayout, FlopCounter]:
    """Scalar construction of ``build_real`` that tallies floating point work.

    The work is organised and counted the way the published cost estimate
    does it:

    1. ``2 b_i`` once per row (m flops).
    2. every linear coefficient: 3 flops per row for ``sA(sA - 2b)`` plus one
       accumulation per row (4cmn flops).
    3. coupling template ``2 sum_i A_ij A_ik`` for all ``j <= k``: a product and
       an accumulation per row plus the doubling (m(n^2+n) + (n^2+n)/2).
    4. scaling of the template by precomputed weight products; charged at
       ``c(c+1)/2`` per variable pair, ((c^2+c)(n^2+n)/4). Cross-variable
       pairs actually need all ``c^2`` weight products; they are computed
       but the tally keeps the published charge.
    """
    if not e.scheme.is_complement:
        raise ValueError("flop accounting is defined for complement encodings only")
    a = problem.a.tolist()
    b = problem.b.tolist()
    m, n = problem.m, problem.n
    layout = QubitLayout(n, e)
    weights = e.slot_weights.tolist()
    c = len(weights)
    flops = FlopCounter()

    two_b = [2.0 * bi for bi in b]
    flops.linear_prep += m

    linear = np.zeros(layout.total_qubits)
    for j in range(n):
        for slot, s in enumerate(weights):
            acc = 0.0
            for i in range(m):
                t = s * a[i][j]
                acc += t * (t - two_b[i])
            flops.linear_prep += 4 * m
            linear[layout.index(j, slot)] = acc

    template = [[0.0] * n for _ in range(n)]
    for j in range(n):
        for k in range(j, n):
            acc = 0.0
            for i in range(m):
                acc += a[i][j] * a[i][k]
            template[j][k] = 2.0 * acc
            flops.quadratic_template += 2 * m + 1

    st = [[s * t for t in weights] for s in weights]
    quadratic = np.zeros((layout.total_qubits, layout.total_qubits))
    for j in range(n):
        for k in range(j, n):
            tpl = template[j][k]
            for s_slot in range(c):
                for t_slot in range(c):
                    if j == k and t_slot <= s_slot:
                        continue
                    quadratic[layout.index(j, s_slot), layout.index(k, t_slot)] = st[s_slot][t_slot] * tpl
            flops.quadratic_scaling += (c * c + c) // 2

    offset = math.fsum(bi * bi for bi in b)
    return Qubo(linear, quadratic, offset, layout), layout, flops


# ---------------------------------------------------------------------------
# QUBO <-> Ising


def qubo_to_ising(q: Qubo) -> Ising:
    """Substitute ``q = (s + 1) / 2``; totals including offsets are preserved."""
    sym = q.symmetric()
    h = q.linear / 2.0 + sym.sum(axis=1) / 4.0
    j = q.quadratic / 4.0
    offset = q.offset + q.linear.sum() / 2.0 + q.quadratic.sum() / 4.0
    return Ising(h, j, offset)


def ising_to_qubo(model: Ising) -> Qubo:
    """Substitute ``s = 2q - 1``."""
    sym = model.symmetric()
    linear = 2.0 * model.h - 2.0 * sym.sum(axis=1)
    quadratic = 4.0 * model.j
    offset = model.offset - model.h.sum() + model.j.sum()
    return Qubo(linear, quadratic, offset)


H_BOUND = 2.0
J_BOUND = 1.0


def normalize_to_hardware(model: Ising) -> tuple[Ising, float]:
    """Uniformly shrink a model into ``|h| <= 2``, ``|J| <= 1``.

    Returns the scaled model (offset scaled too) and the factor applied.
    Models already inside the bounds, or with all-zero coefficients, come
    back unchanged with scale 1.
    """
    hmax = float(np.abs(model.h).max(initial=0.0))
    jmax = float(np.abs(model.j).max(initial=0.0))
    scale = 1.0
    if hmax > 0.0:
        scale = min(scale, H_BOUND / hmax)
    if jmax > 0.0:
        scale = min(scale, J_BOUND / jmax)
    if scale == 1.0:
        return model, 1.0
    h = np.clip(model.h * scale, -H_BOUND, H_BOUND)
    j = np.clip(model.j * scale, -J_BOUND, J_BOUND)
    return Ising(h, j, model.offset * scale), scale


def load_model(path) -> Qubo | Ising:
    import json
    doc = json.loads(Path(path).read_text(encoding="utf-8"))
    if doc.get("vartype", "BINARY") == "SPIN":
        return Ising.from_dict(doc)
    return Qubo.from_dict(doc)


__all__ = [
    "Qubo", "Ising", "FlopCounter", "Scheme",
    "energy", "energies", "ising_energy", "spins_from_bits",
    "build_binary", "build_real", "build_real_counted",
    "qubo_to_ising", "ising_to_qubo", "normalize_to_hardware", "load_model",
]
