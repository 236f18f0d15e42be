"""The compiled extension and the NumPy fallback must agree."""

import numpy as np
import pytest

from qals import kernels

backends = kernels.available_backends()
needs_both = pytest.mark.skipif(len(backends) < 2, reason="compiled extension not built")


def random_model(seed, n):
    rng = np.random.default_rng(seed)
    upper = np.triu(rng.normal(size=(n, n)), 1)
    return np.ascontiguousarray(upper + upper.T), rng.normal(size=n)


def test_active_backend_reported():
    assert kernels.BACKEND in ("compiled", "python")
    assert kernels.backend is backends[kernels.BACKEND]


@needs_both
@pytest.mark.parametrize("n", [1, 2, 9, 24])
@pytest.mark.parametrize("seed", [0, 2**63 + 11])
def test_anneal_bit_identical(n, seed):
    w, v = random_model(n, n)
    betas = np.geomspace(0.05, 20.0, 40)
    out = [b.anneal(w, v, betas, seed, 33, 2) for b in backends.values()]
    np.testing.assert_array_equal(out[0], out[1])


@needs_both
@pytest.mark.parametrize("n", [1, 4, 13, 16])
def test_exhaustive_agree(n):
    w, v = random_model(100 + n, n)
    (i0, e0), (i1, e1) = (b.exhaustive_min(w, v, 1e-11) for b in backends.values())
    assert i0 == i1
    assert e0 == pytest.approx(e1, abs=1e-10)


@needs_both
def test_all_energies_agree():
    w, v = random_model(7, 15)
    e0, e1 = (b.all_energies(w, v) for b in backends.values())
    np.testing.assert_allclose(e0, e1, atol=1e-11)


@pytest.mark.parametrize("name", sorted(backends))
def test_all_energies_counting_order(name):
    w, v = random_model(3, 5)
    es = backends[name].all_energies(w, v)
    for idx in (0, 1, 6, 31):
        bits = np.array([(idx >> (4 - a)) & 1 for a in range(5)], dtype=float)
        assert es[idx] == pytest.approx(v @ bits + 0.5 * bits @ w @ bits, abs=1e-12)


@pytest.mark.parametrize("name", sorted(backends))
def test_empty_model(name):
    impl = backends[name]
    w, v = np.zeros((0, 0)), np.zeros(0)
    assert impl.anneal(w, v, np.ones(3), 1, 4, 1).shape == (4, 0)
    assert impl.exhaustive_min(w, v, 0.0) == (0, 0.0)
