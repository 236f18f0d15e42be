"""Flop-count cost model for direct least squares solvers and the annealing route.

All costs are in floating point operations for an ``m x n`` problem with
``c`` qubits per variable. The execution term ``tau*`` of the annealing
route is an unknown polynomial in ``c n``; only its degree ``beta`` enters
the speedup test, so it is excluded from :func:`cost_qa_prep`.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass


def _check_dims(m: int, n: int) -> None:
    if n < 1 or m <= n:
        raise ValueError(f"need m > n >= 1, got m={m}, n={n}")


def _check_c(c: int) -> None:
    if c < 2:
        raise ValueError(f"need c >= 2 qubits per variable, got {c}")


def cost_classical(m: int, n: int) -> tuple[float, float, float]:
    """(normal equations, Householder QR, SVD) flop counts."""
    _check_dims(m, n)
    ne = m * n**2 + n**3 / 3
    qr = 2 * m * n**2 - 2 * n**3 / 3
    svd = 2 * m * n**2 + 11 * n**3
    return float(ne), float(qr), float(svd)


def cost_qa_prep(m: int, n: int, c: int) -> float:
    """Flops to assemble the QUBO: mn^2 + mn(4c+1) + (n^2+n)(c^2+c+2)/4 + m."""
    _check_dims(m, n)
    _check_c(c)
    return float(m * n**2 + m * n * (4 * c + 1) + (n**2 + n) * (c**2 + c + 2) / 4 + m)


def delta_costs(m: int, n: int, c: int) -> tuple[float, float]:
    """Costs left after removing the shared ``m n^2`` term.

    Returns ``(n^3/3, (4c+1) m n)``: the normal-equations remainder and the
    dominant remainder of the annealing route.
    """
    _check_dims(m, n)
    _check_c(c)
    return n**3 / 3, float((4 * c + 1) * m * n)


@dataclass(frozen=True)
class CostModelParams:
    m: int
    n: int
    c: int
    beta: float = 2.0
    anneal_time: float | None = None
    reads: int | None = None

    def __post_init__(self):
        _check_dims(self.m, self.n)
        _check_c(self.c)

    @property
    def lam(self) -> float:
        return self.m / self.n

    @property
    def tau(self) -> float | None:
        """Machine execution cost, anneal time per read times reads."""
        if self.anneal_time is None or self.reads is None:
            return None
        return self.anneal_time * self.reads


@dataclass(frozen=True)
class CostReport:
    m: int
    n: int
    c: int
    beta: float
    cost_ne: float
    cost_qr: float
    cost_svd: float
    cost_qa_prep: float
    delta_ne: float
    delta_qa_star: float
    lam: float
    lambda_upper: float
    beta_ok: bool
    speedup_feasible: bool
    tau: float | None = None

    def to_dict(self) -> dict:
        doc = asdict(self)
        doc["lambda"] = doc.pop("lam")
        doc["poly_term"] = f"poly(cn) of degree {self.beta:g}"
        if doc["tau"] is None:
            del doc["tau"]
        return doc

    def table(self) -> str:
        """Plain-text rendering with one row per method."""
        # flops of the annealing row exclude the unknown poly(cn) term
        rows = [
            ("Normal Equations", "mn^2 + n^3/3", self.cost_ne),
            ("QR Factorization", "2mn^2 - 2n^3/3", self.cost_qr),
            ("SVD", "2mn^2 + 11n^3", self.cost_svd),
            ("Quantum Annealing",
             "mn^2 + mn(4c+1) + poly(cn) + 0.25(n^2+n)(c^2+c+2) + m", self.cost_qa_prep),
        ]
        w0 = max(len(r[0]) for r in rows)
        w1 = max(len(r[1]) for r in rows)
        out = [f"{'Method':<{w0}}  {'Operational cost':<{w1}}  {'Flops':>16}"]
        out.append("-" * len(out[0]))
        for name, formula, val in rows:
            out.append(f"{name:<{w0}}  {formula:<{w1}}  {val:>16.2f}")
        verdict = "feasible" if self.speedup_feasible else "infeasible"
        out.append("")
        out.append(f"m={self.m} n={self.n} c={self.c} beta={self.beta:g}")
        out.append(f"lambda = m/n = {self.lam:.4f}; window 1 < lambda < {self.lambda_upper:.4f}")
        out.append(f"delta NE = {self.delta_ne:.2f}; delta QA* = {self.delta_qa_star:.2f}")
        out.append(f"speedup over normal equations: {verdict}")
        return "\n".join(out)


def speedup_region(m: int, n: int, c: int, beta: float,
                   anneal_time: float | None = None, reads: int | None = None) -> CostReport:
    """Check the conditions under which annealing could beat normal equations.

    Feasible iff ``0 < beta < 3`` and ``1 < m/n < n / (3(4c+1))`` (which in
    turn needs the upper limit to exceed 1).
    """
    params = CostModelParams(m, n, c, beta, anneal_time, reads)
    ne, qr, svd = cost_classical(m, n)
    d_ne, d_qa = delta_costs(m, n, c)
    lam = params.lam
    upper = n / (3 * (4 * c + 1))
    beta_ok = 0.0 < beta < 3.0
    feasible = beta_ok and upper > 1.0 and 1.0 < lam < upper
    return CostReport(m, n, c, float(beta), ne, qr, svd, cost_qa_prep(m, n, c),
                      d_ne, d_qa, lam, upper, beta_ok, feasible, params.tau)
