"""Radix-2 qubit encodings of real variables.

Three schemes are supported:

* ``Basic``: two rails per variable, ``x = sum(theta * q) - sum(theta * q*)``.
* ``OnesComplement`` / ``TwosComplement``: one sign qubit of weight
  ``vartheta`` followed by the magnitude qubits.

Slot order inside a variable block is fixed: sign qubit first (complement
schemes), then exponents ascending from ``o`` to ``p``; for Basic the
positive rail (ascending) precedes the negative rail (ascending). Qubit
``a`` of the whole problem belongs to variable ``a // qubits_per_var``.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .errors import GuardError
from .problem import LeastSquaresProblem

GRID_GUARD = 24


class Scheme(str, enum.Enum):
    BASIC = "Basic"
    ONES = "OnesComplement"
    TWOS = "TwosComplement"

    @classmethod
    def parse(cls, text) -> "Scheme":
        if isinstance(text, cls):
            return text
        key = str(text).strip().lower().replace("_", "").replace("-", "").replace("'", "")
        aliases = {
            "basic": cls.BASIC, "dualrail": cls.BASIC,
            "onescomplement": cls.ONES, "ones": cls.ONES, "1s": cls.ONES,
            "twoscomplement": cls.TWOS, "twos": cls.TWOS, "2s": cls.TWOS,
        }
        try:
            return aliases[key]
        except KeyError:
            raise ValueError(f"unknown encoding scheme {text!r}") from None

    @property
    def is_complement(self) -> bool:
        return self is not Scheme.BASIC


@dataclass(frozen=True)
class Encoding:
    scheme: Scheme
    o: int
    p: int

    def __post_init__(self):
        object.__setattr__(self, "scheme", Scheme.parse(self.scheme))
        if int(self.o) != self.o or int(self.p) != self.p:
            raise ValueError("exponent bounds must be integers")
        if self.o > self.p:
            raise ValueError(f"need o <= p, got o={self.o}, p={self.p}")

    @property
    def n_theta(self) -> int:
        """Size of the exponent set, ``p - o + 1``."""
        return self.p - self.o + 1

    @property
    def c(self) -> int:
        """Qubits per variable under a complement scheme (``|Theta| + 1``)."""
        return self.n_theta + 1

    @property
    def vartheta(self) -> float:
        if self.scheme is Scheme.TWOS:
            return -math.ldexp(1.0, self.p + 1)
        if self.scheme is Scheme.ONES:
            return -math.ldexp(1.0, self.p + 1) + math.ldexp(1.0, self.o)
        return 0.0

    @property
    def qubits_per_var(self) -> int:
        return 2 * self.n_theta if self.scheme is Scheme.BASIC else self.c

    @property
    def step(self) -> float:
        return math.ldexp(1.0, self.o)

    @property
    def thetas(self) -> np.ndarray:
        return np.array([math.ldexp(1.0, k) for k in range(self.o, self.p + 1)])

    @property
    def slot_weights(self) -> np.ndarray:
        """Signed weight of every slot in one variable block."""
        if self.scheme is Scheme.BASIC:
            return np.concatenate([self.thetas, -self.thetas])
        return np.concatenate([[self.vartheta], self.thetas])

    def to_dict(self) -> dict:
        return {"scheme": self.scheme.value, "o": self.o, "p": self.p}

    @classmethod
    def from_dict(cls, doc: dict) -> "Encoding":
        return cls(Scheme.parse(doc["scheme"]), int(doc["o"]), int(doc["p"]))


def make_encoding(scheme, o: int, p: int) -> Encoding:
    return Encoding(Scheme.parse(scheme), o, p)


@dataclass(frozen=True)
class QubitLayout:
    n_vars: int
    encoding: Encoding

    @property
    def total_qubits(self) -> int:
        return self.n_vars * self.encoding.qubits_per_var

    def index(self, var: int, slot: int) -> int:
        qpv = self.encoding.qubits_per_var
        if not (0 <= var < self.n_vars and 0 <= slot < qpv):
            raise IndexError(f"(var={var}, slot={slot}) outside layout")
        return var * qpv + slot

    def locate(self, qubit: int) -> tuple[int, int]:
        if not 0 <= qubit < self.total_qubits:
            raise IndexError(f"qubit {qubit} outside layout")
        return divmod(qubit, self.encoding.qubits_per_var)

    @cached_property
    def weights(self) -> np.ndarray:
        """Signed weight of every qubit in layout order."""
        w = np.tile(self.encoding.slot_weights, self.n_vars)
        w.setflags(write=False)
        return w

    @cached_property
    def variable_of(self) -> np.ndarray:
        v = np.repeat(np.arange(self.n_vars), self.encoding.qubits_per_var)
        v.setflags(write=False)
        return v


def as_bits(a, length: int | None = None) -> np.ndarray:
    """Coerce a 0/1 sequence or a '0101' string into a uint8 vector."""
    if isinstance(a, str):
        if set(a) - {"0", "1"}:
            raise ValueError("assignment strings may only contain 0 and 1")
        bits = np.frombuffer(a.encode("ascii"), dtype=np.uint8) - ord("0")
    else:
        bits = np.asarray(a)
        if bits.ndim != 1 or not np.all((bits == 0) | (bits == 1)):
            raise ValueError("assignment must be a flat sequence of 0/1")
        bits = bits.astype(np.uint8)
    if length is not None and bits.shape[0] != length:
        raise ValueError(f"assignment has {bits.shape[0]} bits, layout needs {length}")
    return bits


def bits_to_str(bits) -> str:
    return "".join("1" if b else "0" for b in bits)


def decode(layout: QubitLayout, a) -> np.ndarray:
    bits = as_bits(a, layout.total_qubits)
    block = bits.reshape(layout.n_vars, layout.encoding.qubits_per_var)
    x = block.astype(np.float64) @ layout.encoding.slot_weights
    return x + 0.0  # one's-complement negative zero -> +0.0


def representable_range(e: Encoding) -> tuple[float, float, float]:
    top = math.ldexp(1.0, e.p + 1)
    hi = top - e.step
    lo = -top if e.scheme is Scheme.TWOS else -hi
    return lo, hi, e.step


def _magnitude_bits(k: int, n_theta: int) -> list[int]:
    return [(k >> i) & 1 for i in range(n_theta)]


def nearest_representable(e: Encoding, v: float) -> tuple[float, np.ndarray]:
    """Closest grid point to ``v`` (clamped; ties toward zero) and its bits."""
    lo, hi, step = representable_range(e)
    t = v / step
    k = math.copysign(math.ceil(abs(t) - 0.5), t)
    k = int(min(max(k, lo / step), hi / step))
    value = k * step + 0.0

    if e.scheme is Scheme.BASIC:
        mag = _magnitude_bits(abs(k), e.n_theta)
        zeros = [0] * e.n_theta
        bits = mag + zeros if k >= 0 else zeros + mag
    elif k >= 0:
        bits = [0] + _magnitude_bits(k, e.n_theta)
    else:
        rest = int(round((value - e.vartheta) / step))
        bits = [1] + _magnitude_bits(rest, e.n_theta)
    return value, np.array(bits, dtype=np.uint8)


def encode_vector(layout: QubitLayout, x) -> tuple[np.ndarray, np.ndarray]:
    """Round every component of ``x`` to the grid; returns (values, bits)."""
    parts = [nearest_representable(layout.encoding, float(v)) for v in x]
    if len(parts) != layout.n_vars:
        raise ValueError(f"x must have length {layout.n_vars}")
    values = np.array([pv for pv, _ in parts])
    bits = np.concatenate([pb for _, pb in parts]).astype(np.uint8)
    return values, bits


def value_table(e: Encoding) -> tuple[np.ndarray, np.ndarray]:
    """Distinct representable values and their lexicographically smallest patterns.

    Rows are ordered lexicographically by pattern (slot 0 most significant).
    """
    qpv = e.qubits_per_var
    if qpv > GRID_GUARD:
        raise GuardError(f"{qpv} qubits per variable exceeds guard {GRID_GUARD}")
    idx = np.arange(1 << qpv, dtype=np.int64)
    patterns = ((idx[:, None] >> np.arange(qpv - 1, -1, -1)) & 1).astype(np.uint8)
    values = patterns.astype(np.float64) @ e.slot_weights + 0.0
    _, first = np.unique(values, return_index=True)
    first.sort()
    return values[first], patterns[first]


@dataclass(frozen=True, eq=False)
class GridOptimum:
    x: np.ndarray
    residual: float
    bits: np.ndarray


def grid_optimum(problem: LeastSquaresProblem, e: Encoding,
                 chunk: int = 1 << 14) -> GridOptimum:
    """Best representable x by enumeration of decoded values.

    Works directly on residuals, independent of any QUBO coefficients. Among
    near-equal residuals the lexicographically smallest bit pattern wins.
    """
    n = problem.n
    if n * e.qubits_per_var > GRID_GUARD:
        raise GuardError(
            f"grid enumeration needs {n * e.qubits_per_var} qubits, guard is {GRID_GUARD}")
    values, patterns = value_table(e)
    base = len(values)
    total = base ** n
    a, b = problem.a, problem.b
    radix = base ** np.arange(n - 1, -1, -1, dtype=np.int64)

    def residuals(start: int, stop: int) -> np.ndarray:
        idx = np.arange(start, stop, dtype=np.int64)
        digits = (idx[:, None] // radix) % base
        r = values[digits] @ a.T - b
        return np.sqrt(np.einsum("ij,ij->i", r, r))

    best = math.inf
    for start in range(0, total, chunk):
        best = min(best, float(residuals(start, min(start + chunk, total)).min()))
    tol = 1e-12 * (1.0 + best)
    for start in range(0, total, chunk):
        res = residuals(start, min(start + chunk, total))
        hits = np.flatnonzero(res <= best + tol)
        if hits.size:
            k = start + int(hits[0])
            digits = (k // radix) % base
            x = values[digits] + 0.0
            bits = patterns[digits].reshape(-1)
            return GridOptimum(x, float(res[hits[0]]), bits)
    raise AssertionError("unreachable: minimum not revisited")
