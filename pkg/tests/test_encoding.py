import itertools

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from qals.encoding import (Encoding, QubitLayout, Scheme, as_bits, bits_to_str, decode,
                           grid_optimum, make_encoding, nearest_representable,
                           representable_range, value_table)
from qals.errors import GuardError
from qals.problem import LeastSquaresProblem, residual, solve_qr

from conftest import random_problem

SCHEMES = list(Scheme)


def enumerate_values(e: Encoding) -> list[float]:
    """Decode every bit pattern of one variable by direct summation."""
    w = e.slot_weights
    return [float(sum(wi * bi for wi, bi in zip(w, bits)))
            for bits in itertools.product((0, 1), repeat=e.qubits_per_var)]


class TestMakeEncoding:
    def test_twos(self):
        e = make_encoding("TwosComplement", 0, 1)
        assert e.vartheta == -4.0
        assert e.qubits_per_var == 3

    def test_ones_five_to_two_window(self):
        e = make_encoding(Scheme.ONES, -5, -2)
        assert e.vartheta == -0.46875
        assert e.qubits_per_var == 5
        assert e.c == 5

    def test_basic(self):
        e = make_encoding("Basic", -5, -2)
        assert e.vartheta == 0.0
        assert e.qubits_per_var == 8

    def test_bad_window(self):
        with pytest.raises(ValueError):
            make_encoding("Basic", 1, 0)

    def test_json_roundtrip(self):
        e = make_encoding("ones", -3, 1)
        assert Encoding.from_dict(e.to_dict()) == e
        assert e.to_dict() == {"scheme": "OnesComplement", "o": -3, "p": 1}


class TestDecode:
    def test_twos_example(self):
        layout = QubitLayout(1, make_encoding("twos", -2, -1))
        # sign=1, 2^-2 bit=1, 2^-1 bit=0
        assert decode(layout, [1, 1, 0]) == pytest.approx([-0.75])

    def test_ones_negative_zero(self):
        layout = QubitLayout(1, make_encoding("ones", -5, -2))
        x = decode(layout, [1] * 5)
        assert x[0] == 0.0 and not np.signbit(x[0])

    @pytest.mark.parametrize("o, p", [(0, 0), (-3, 1), (-5, -2)])
    def test_basic_rails_cancel(self, o, p):
        e = make_encoding("Basic", o, p)
        layout = QubitLayout(2, e)
        assert np.all(decode(layout, [1] * layout.total_qubits) == 0.0)

    def test_layout_order(self):
        e = make_encoding("ones", 0, 1)  # slots: sign, 2^0, 2^1
        layout = QubitLayout(2, e)
        assert layout.index(1, 0) == 3
        assert layout.locate(4) == (1, 1)
        np.testing.assert_array_equal(decode(layout, "000011"), [0.0, 3.0])

    def test_length_mismatch(self):
        with pytest.raises(ValueError):
            decode(QubitLayout(2, make_encoding("twos", 0, 0)), [0, 1, 0])

    def test_bit_strings(self):
        assert bits_to_str(as_bits("0110")) == "0110"
        with pytest.raises(ValueError):
            as_bits("012")


class TestRange:
    @pytest.mark.parametrize("scheme, o, p, expected", [
        ("twos", 0, 1, (-4.0, 3.0, 1.0)),
        ("ones", -5, -2, (-0.46875, 0.46875, 0.03125)),
        ("Basic", 0, 0, (-1.0, 1.0, 1.0)),
    ])
    def test_examples(self, scheme, o, p, expected):
        assert representable_range(make_encoding(scheme, o, p)) == expected

    @pytest.mark.parametrize("scheme", SCHEMES)
    @pytest.mark.parametrize("o, p", [(0, 1), (-5, -2), (-2, 0), (1, 3)])
    def test_matches_enumeration(self, scheme, o, p):
        e = make_encoding(scheme, o, p)
        vals = enumerate_values(e)
        lo, hi, step = representable_range(e)
        assert (lo, hi) == (min(vals), max(vals))
        distinct = sorted(set(vals))
        assert np.allclose(np.diff(distinct), step)

    @pytest.mark.parametrize("c", range(2, 9))
    def test_distinct_value_counts(self, c):
        # c qubits per variable: sign + (c-1) magnitude bits
        o, p = 0, c - 2
        assert len(set(enumerate_values(make_encoding("twos", o, p)))) == 2**c
        assert len(set(enumerate_values(make_encoding("ones", o, p)))) == 2**c - 1

    def test_basic_is_redundant(self):
        e = make_encoding("Basic", 0, 2)
        assert len(set(enumerate_values(e))) < 2**e.qubits_per_var


class TestNearest:
    def test_ones_example(self):
        value, bits = nearest_representable(make_encoding("ones", -5, -2), 0.3)
        assert value == 0.3125

    def test_tie_toward_zero(self):
        value, _ = nearest_representable(make_encoding("twos", 0, 1), -0.5)
        assert value == 0.0
        value, _ = nearest_representable(make_encoding("twos", 0, 1), 1.5)
        assert value == 1.0

    @pytest.mark.parametrize("scheme", SCHEMES)
    def test_clamp(self, scheme):
        e = make_encoding(scheme, -2, 0)
        lo, hi, _ = representable_range(e)
        assert nearest_representable(e, 100.0)[0] == hi
        assert nearest_representable(e, -100.0)[0] == lo

    @settings(max_examples=200, deadline=None)
    @given(scheme=st.sampled_from(SCHEMES), o=st.integers(-6, 2), width=st.integers(0, 4),
           v=st.floats(-40, 40, allow_nan=False))
    def test_is_nearest_and_decodes(self, scheme, o, width, v):
        e = make_encoding(scheme, o, o + width)
        value, bits = nearest_representable(e, v)
        assert decode(QubitLayout(1, e), bits)[0] == value
        grid = np.array(sorted(set(enumerate_values(e))))
        assert abs(value - v) <= np.min(np.abs(grid - v)) + 1e-12


class TestValueTable:
    @pytest.mark.parametrize("scheme", SCHEMES)
    def test_patterns_lexicographically_first(self, scheme):
        e = make_encoding(scheme, -1, 1)
        values, patterns = value_table(e)
        first = {}
        for bits in itertools.product((0, 1), repeat=e.qubits_per_var):
            val = float(np.dot(bits, e.slot_weights))
            first.setdefault(val, bits)
        assert len(values) == len(first)
        for val, pat in zip(values, patterns):
            assert tuple(pat) == first[float(val)]
        keys = [bits_to_str(pat) for pat in patterns]
        assert keys == sorted(keys)


class TestGridOptimum:
    def test_contains_exact_solution(self):
        a = np.array([[1.0, 0.0], [0.0, 1.0], [1.0, 1.0]])
        x_true = np.array([0.75, -0.5])
        p = LeastSquaresProblem(a, a @ x_true)
        g = grid_optimum(p, make_encoding("twos", -2, 0))
        np.testing.assert_array_equal(g.x, x_true)
        assert g.residual == pytest.approx(solve_qr(p).residual_norm, abs=1e-12)

    @pytest.mark.parametrize("scheme", SCHEMES)
    def test_never_beats_qr(self, rng, scheme):
        for _ in range(5):
            p = random_problem(rng, 8, 2)
            g = grid_optimum(p, make_encoding(scheme, -2, 0))
            assert g.residual >= solve_qr(p).residual_norm - 1e-12
            assert g.residual == pytest.approx(residual(p, g.x), abs=1e-12)

    def test_bits_decode_to_x(self, rng):
        p = random_problem(rng, 6, 3)
        e = make_encoding("Basic", -1, 0)
        g = grid_optimum(p, e)
        np.testing.assert_array_equal(decode(QubitLayout(3, e), g.bits), g.x)

    def test_guard(self, rng):
        p = random_problem(rng, 10, 5)
        with pytest.raises(GuardError):
            grid_optimum(p, make_encoding("Basic", -2, 0))
