import numpy as np
import pytest

from qals import kernels
from qals.problem import LeastSquaresProblem


@pytest.fixture(params=sorted(kernels.available_backends()))
def backend(request, monkeypatch):
    """Run a test once per available kernel backend."""
    impl = kernels.available_backends()[request.param]
    monkeypatch.setattr(kernels, "backend", impl)
    return impl


def random_problem(rng: np.random.Generator, m: int, n: int) -> LeastSquaresProblem:
    return LeastSquaresProblem(rng.uniform(-1, 1, (m, n)), rng.uniform(-1, 1, m))


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture
def identity_top():
    return LeastSquaresProblem([[1.0, 0.0], [0.0, 1.0], [0.0, 0.0]], [1.0, 0.0, 0.0])


@pytest.fixture
def ones_column():
    return LeastSquaresProblem([[1.0], [1.0], [1.0]], [1.0, 2.0, 3.0])


ACCEPTANCE_RESULTS: dict[int, tuple[bool, str]] = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(ACCEPTANCE_RESULTS):
        ok, detail = ACCEPTANCE_RESULTS[number]
        terminalreporter.write_line(f"criterion {number}: {'PASS' if ok else 'FAIL'}  {detail}")
