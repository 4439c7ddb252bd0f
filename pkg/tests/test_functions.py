"""Bounded functions on integer supports: constructors, gather, file parsing."""

from __future__ import annotations

from fractions import Fraction

import numpy as np
import pytest

from bohrkit.functions import BoundedFunction, read_values_file


def test_indicator_gather():
    f = BoundedFunction.indicator(np.array([1, 3, 5]))
    got = f.gather(np.array([[0, 1], [3, 4]]))
    assert got.tolist() == [[0, 1], [1, 0]]


def test_bound_enforced():
    with pytest.raises(ValueError):
        BoundedFunction(np.array([0]), np.array([1.5 + 0j]))


def test_support_must_increase():
    with pytest.raises(ValueError):
        BoundedFunction(np.array([3, 1]), np.array([1.0 + 0j, 1.0 + 0j]))


def test_character_unit_modulus_and_phase():
    f = BoundedFunction.character(Fraction(1, 4), -4, 4)
    assert np.allclose(np.abs(f.values), 1.0)
    # n = 1 has phase e(1/4) = i, exactly representable
    idx = np.searchsorted(f.support, 1)
    assert abs(f.values[idx] - 1j) < 1e-15
    idx0 = np.searchsorted(f.support, 0)
    assert f.values[idx0] == 1


def test_character_exact_period():
    f = BoundedFunction.character(Fraction(1, 3), 0, 8)
    vals = f.values
    assert np.allclose(vals[0:3], vals[3:6])
    assert np.allclose(vals[0:3], vals[6:9])


def test_balanced_indicator_exact_density():
    ambient = np.arange(0, 10)
    subset = np.array([0, 1, 2, 3])
    f, delta = BoundedFunction.balanced_indicator(subset, ambient)
    assert delta == Fraction(4, 10)
    on = f.gather(ambient)
    assert abs(on.sum()) < 1e-12
    assert abs(on[0] - (1 - 0.4)) < 1e-15


def test_mean_on():
    f = BoundedFunction.indicator(np.array([2, 4]))
    assert abs(f.mean_on(np.array([1, 2, 3, 4])) - 0.5) < 1e-15


def test_read_values_file(tmp_path):
    p = tmp_path / "f.txt"
    p.write_text("# header\n0 1.0\n1 0.5 -0.5\n\n2 -1\n")
    f = read_values_file(str(p))
    assert f.support.tolist() == [0, 1, 2]
    assert f.values[1] == 0.5 - 0.5j
    assert f.values[2] == -1


def test_read_values_file_duplicate(tmp_path):
    p = tmp_path / "f.txt"
    p.write_text("0 1\n0 1\n")
    with pytest.raises(ValueError, match=r":2:"):
        read_values_file(str(p))


def test_read_values_file_parse_error(tmp_path):
    p = tmp_path / "f.txt"
    p.write_text("0 huh\n")
    with pytest.raises(ValueError, match=r":1:"):
        read_values_file(str(p))
