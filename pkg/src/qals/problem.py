"""Least squares problems: representation, generation, I/O and direct solvers."""

from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Literal

import numpy as np

from .errors import FactorizationError, ProblemFormatError
from .rng import SplitMix64


def _frozen(arr) -> np.ndarray:
    out = np.array(arr, dtype=np.float64)
    out.setflags(write=False)
    return out


@dataclass(frozen=True, eq=False)
class LeastSquaresProblem:
    """Overdetermined system ``min ||A x - b||_2`` with ``m > n``."""

    a: np.ndarray
    b: np.ndarray

    def __post_init__(self):
        a = _frozen(self.a)
        b = _frozen(self.b)
        if a.ndim != 2:
            raise ProblemFormatError(f"A must be 2-D, got shape {a.shape}")
        if b.ndim != 1 or b.shape[0] != a.shape[0]:
            raise ProblemFormatError(
                f"b must have length {a.shape[0]}, got shape {b.shape}")
        m, n = a.shape
        if n < 1:
            raise ProblemFormatError("A needs at least one column")
        if m <= n:
            raise ProblemFormatError(f"m must exceed n (got m={m}, n={n})")
        if not (np.all(np.isfinite(a)) and np.all(np.isfinite(b))):
            raise ProblemFormatError("entries must be finite")
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)

    @property
    def m(self) -> int:
        return self.a.shape[0]

    @property
    def n(self) -> int:
        return self.a.shape[1]

    def __eq__(self, other):
        if not isinstance(other, LeastSquaresProblem):
            return NotImplemented
        return np.array_equal(self.a, other.a) and np.array_equal(self.b, other.b)

    def __hash__(self):
        return hash((self.a.tobytes(), self.b.tobytes(), self.a.shape))

    def to_dict(self) -> dict:
        return {"m": self.m, "n": self.n, "a": self.a.tolist(), "b": self.b.tolist()}


@dataclass(frozen=True, eq=False)
class ClassicalSolution:
    x: np.ndarray
    residual_norm: float
    method: Literal["NormalEquations", "QR"]


# ---------------------------------------------------------------------------
# generation


def round_half_away(value: float, digits: int) -> float:
    """Round like MATLAB ``round(value, digits)``: ties go away from zero."""
    scale = 10.0 ** digits
    y = value * scale
    return math.copysign(math.floor(abs(y) + 0.5), y) / scale


def gen_random_problem(m: int, n: int, seed: int, round_digits: int = 3
                       ) -> LeastSquaresProblem:
    """Uniform random problem drawn from a single SplitMix64 stream.

    A is filled row-major first, then b; every entry is rounded to
    ``round_digits`` decimals (so an entry may round up to exactly 1.0).
    """
    if m <= n:
        raise ProblemFormatError(f"m must exceed n (got m={m}, n={n})")
    if round_digits < 0:
        raise ValueError("round_digits must be non-negative")
    rng = SplitMix64(seed)
    vals = [round_half_away(u, round_digits) for u in rng.doubles(m * n + m)]
    a = np.array(vals[: m * n]).reshape(m, n)
    b = np.array(vals[m * n:])
    return LeastSquaresProblem(a, b)


# ---------------------------------------------------------------------------
# file I/O


def _parse_float(token: str, where: str) -> float:
    try:
        val = float(token.strip())
    except ValueError:
        raise ProblemFormatError(f"non-numeric token {token.strip()!r} at {where}") from None
    if not math.isfinite(val):
        raise ProblemFormatError(f"non-finite value {token.strip()!r} at {where}")
    return val


def _load_csv(text: str) -> LeastSquaresProblem:
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines:
        raise ProblemFormatError("empty problem file")
    header = lines[0].replace(",", " ").split()
    if len(header) != 2:
        raise ProblemFormatError("header must be 'm n'")
    try:
        m, n = (int(tok) for tok in header)
    except ValueError:
        raise ProblemFormatError(f"bad header {lines[0]!r}") from None
    if m <= n:
        raise ProblemFormatError(f"m must exceed n (got m={m}, n={n})")
    body = lines[1:]
    if len(body) != 2 * m:
        raise ProblemFormatError(
            f"dimension mismatch: expected {2 * m} data lines, found {len(body)}")
    a = np.empty((m, n))
    for i, row in enumerate(csv.reader(body[:m])):
        if len(row) != n:
            raise ProblemFormatError(
                f"dimension mismatch: row {i + 1} has {len(row)} entries, expected {n}")
        for j, tok in enumerate(row):
            a[i, j] = _parse_float(tok, f"row {i + 1}, col {j + 1}")
    b = np.empty(m)
    for i, line in enumerate(body[m:]):
        b[i] = _parse_float(line, f"b row {i + 1}")
    return LeastSquaresProblem(a, b)


def _load_json(text: str) -> LeastSquaresProblem:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ProblemFormatError(f"invalid JSON: {exc}") from None
    try:
        m, n, rows, b = int(doc["m"]), int(doc["n"]), doc["a"], doc["b"]
    except (KeyError, TypeError, ValueError):
        raise ProblemFormatError("JSON problem needs integer m, n and arrays a, b") from None
    if m <= n:
        raise ProblemFormatError(f"m must exceed n (got m={m}, n={n})")
    if len(rows) != m or len(b) != m:
        raise ProblemFormatError(f"dimension mismatch: expected {m} rows of A and b")
    a = np.empty((m, n))
    for i, row in enumerate(rows):
        if len(row) != n:
            raise ProblemFormatError(
                f"dimension mismatch: row {i + 1} has {len(row)} entries, expected {n}")
        for j, tok in enumerate(row):
            a[i, j] = _parse_float(str(tok), f"row {i + 1}, col {j + 1}")
    bv = np.array([_parse_float(str(t), f"b row {i + 1}") for i, t in enumerate(b)])
    return LeastSquaresProblem(a, bv)


def _infer_format(path: Path) -> str:
    return "json" if path.suffix.lower() == ".json" else "csv"


def load_problem(path, format: str | None = None) -> LeastSquaresProblem:
    path = Path(path)
    fmt = format or _infer_format(path)
    text = path.read_text(encoding="utf-8")
    if fmt == "csv":
        return _load_csv(text)
    if fmt == "json":
        return _load_json(text)
    raise ValueError(f"unknown problem format {fmt!r}")


def save_problem(problem: LeastSquaresProblem, path, format: str | None = None) -> None:
    from ._json import dumps_canonical, format_real

    path = Path(path)
    fmt = format or _infer_format(path)
    if fmt == "json":
        path.write_text(dumps_canonical(problem.to_dict()) + "\n", encoding="utf-8")
        return
    lines = [f"{problem.m} {problem.n}"]
    lines += [",".join(format_real(v) for v in row) for row in problem.a]
    lines += [format_real(v) for v in problem.b]
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")


# ---------------------------------------------------------------------------
# direct solvers


def residual(problem: LeastSquaresProblem, x) -> float:
    """Euclidean norm ``||A x - b||_2`` (not squared)."""
    x = np.asarray(x, dtype=np.float64)
    if x.shape != (problem.n,):
        raise ValueError(f"x must have length {problem.n}, got shape {x.shape}")
    return float(np.linalg.norm(problem.a @ x - problem.b))


def cholesky(g: np.ndarray) -> np.ndarray:
    """Lower-triangular L with ``g = L L^T``; unpivoted."""
    n = g.shape[0]
    low = np.zeros_like(g, dtype=np.float64)
    for j in range(n):
        d = g[j, j] - low[j, :j] @ low[j, :j]
        if not d > 0.0:
            raise FactorizationError(f"non-positive pivot {d:.3e} at column {j}")
        low[j, j] = math.sqrt(d)
        low[j + 1:, j] = (g[j + 1:, j] - low[j + 1:, :j] @ low[j, :j]) / low[j, j]
    return low


def _forward_sub(low: np.ndarray, rhs: np.ndarray) -> np.ndarray:
    y = np.zeros_like(rhs)
    for i in range(len(rhs)):
        y[i] = (rhs[i] - low[i, :i] @ y[:i]) / low[i, i]
    return y


def _back_sub(up: np.ndarray, rhs: np.ndarray) -> np.ndarray:
    n = len(rhs)
    x = np.zeros_like(rhs)
    for i in range(n - 1, -1, -1):
        x[i] = (rhs[i] - up[i, i + 1:] @ x[i + 1:]) / up[i, i]
    return x


def solve_normal_equations(problem: LeastSquaresProblem) -> ClassicalSolution:
    a, b = problem.a, problem.b
    low = cholesky(a.T @ a)
    x = _back_sub(low.T, _forward_sub(low, a.T @ b))
    return ClassicalSolution(x, residual(problem, x), "NormalEquations")


def householder_qr(a: np.ndarray) -> tuple[list[np.ndarray], np.ndarray]:
    """Householder reflectors and the n-by-n upper factor R.

    Raises FactorizationError when a column is zero below the diagonal,
    i.e. when ``a`` does not have full column rank.
    """
    r = np.array(a, dtype=np.float64)
    m, n = r.shape
    scale = max(float(np.abs(r).max()), 1.0)
    reflectors = []
    for k in range(n):
        col = r[k:, k]
        norm = float(np.linalg.norm(col))
        if norm <= 1e-14 * scale:
            raise FactorizationError(f"rank deficient: zero Householder column {k}")
        v = col.copy()
        v[0] += math.copysign(norm, col[0])
        v /= np.linalg.norm(v)
        r[k:, k:] -= 2.0 * np.outer(v, v @ r[k:, k:])
        reflectors.append(v)
    return reflectors, np.triu(r[:n, :])


def solve_qr(problem: LeastSquaresProblem) -> ClassicalSolution:
    reflectors, r = householder_qr(problem.a)
    qtb = problem.b.copy()
    for k, v in enumerate(reflectors):
        qtb[k:] -= 2.0 * v * (v @ qtb[k:])
    x = _back_sub(r, qtb[: problem.n])
    return ClassicalSolution(x, residual(problem, x), "QR")
