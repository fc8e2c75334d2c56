#!/usr/bin/env python3
"""
Tests for the truncated Taylor jet arithmetic.
"""

import sys
import os
# Add project root to path
sys.path.append(os.path.join(os.path.dirname(__file__), '..', '..'))

import math

import numpy as np
import pytest

from src.utils import jets
from src.utils.errors import InsufficientJetOrderError
from src.utils.jets import Jet, multi_indices

POINTS = np.array([[0.3, -0.7, 1.1, 0.2], [1.5, 0.4, -0.2, -1.0]])


def test_coefficient_count_for_order_four():
    assert len(multi_indices(4)) == 70
    assert len(multi_indices(2)) == 15
    assert multi_indices(4)[0] == (0, 0, 0, 0)


def test_coordinate_partials():
    x = Jet.variables(POINTS, 3)
    np.testing.assert_allclose(x[2].value, POINTS[:, 2])
    first = x[2].partials(1)
    assert first.shape == (2, 4)
    np.testing.assert_allclose(first, np.tile([0.0, 0.0, 1.0, 0.0], (2, 1)))
    np.testing.assert_allclose(x[2].partials(2), 0.0)


def test_product_rule_and_mixed_partials():
    x = Jet.variables(POINTS, 4)
    u = x[0] * x[0] * x[1]
    second = u.partials(2)
    np.testing.assert_allclose(second[:, 0, 0], 2.0 * POINTS[:, 1])
    np.testing.assert_allclose(second[:, 0, 1], 2.0 * POINTS[:, 0])
    np.testing.assert_allclose(second[:, 1, 0], 2.0 * POINTS[:, 0])
    third = u.partials(3)
    np.testing.assert_allclose(third[:, 0, 0, 1], 2.0)
    np.testing.assert_allclose(u.partials(4), 0.0)


def test_partials_are_symmetric():
    x = Jet.variables(POINTS, 4)
    u = jets.exp(x[0] * x[1]) * jets.sin(x[2] + x[3] * 2.0)
    second = u.partials(2)
    np.testing.assert_allclose(second, np.swapaxes(second, 1, 2))
    third = u.partials(3)
    np.testing.assert_allclose(third, np.einsum("zabc->zcab", third), rtol=1e-12, atol=1e-12)


def test_elementary_functions_match_closed_forms():
    x = Jet.variables(POINTS, 4)[0]
    t = POINTS[:, 0]
    e = jets.exp(x * 2.0)
    np.testing.assert_allclose(e.partials(4)[:, 0, 0, 0, 0], 16.0 * np.exp(2.0 * t))
    s = jets.sin(x)
    np.testing.assert_allclose(s.partials(3)[:, 0, 0, 0], -np.cos(t))
    c = jets.cos(x)
    np.testing.assert_allclose(c.partials(2)[:, 0, 0], -np.cos(t))
    shifted = x + 3.0
    lg = jets.log(shifted)
    np.testing.assert_allclose(lg.partials(2)[:, 0, 0], -1.0 / (t + 3.0) ** 2)
    root = jets.sqrt(shifted)
    np.testing.assert_allclose(root.partials(1)[:, 0], 0.5 / np.sqrt(t + 3.0))


def test_real_and_integer_powers_agree():
    x = Jet.variables(POINTS, 4)[1] + 2.0
    np.testing.assert_allclose((x ** 3).coeffs, (x ** 3.0).coeffs, rtol=1e-12, atol=1e-12)
    t = POINTS[:, 1] + 2.0
    np.testing.assert_allclose((x ** -2).partials(1)[:, 1], -2.0 / t ** 3)


def test_division_and_reciprocal():
    x = Jet.variables(POINTS, 3)
    u = (x[0] + 4.0) / (x[1] + 4.0)
    np.testing.assert_allclose(u.partials(1)[:, 1], -(POINTS[:, 0] + 4.0) / (POINTS[:, 1] + 4.0) ** 2)
    v = 1.0 / (x[2] + 4.0)
    np.testing.assert_allclose(v.value, 1.0 / (POINTS[:, 2] + 4.0))


def test_division_by_zero_raises():
    x = Jet.variables(np.zeros((1, 4)), 2)
    with pytest.raises(ZeroDivisionError):
        1.0 / x[0]


def test_partials_beyond_order_raise():
    x = Jet.variables(POINTS, 2)
    with pytest.raises(InsufficientJetOrderError) as excinfo:
        x[0].partials(3)
    assert excinfo.value.required == 3
    assert excinfo.value.available == 2


def test_order_mismatch_raises():
    a = Jet.variables(POINTS, 2)[0]
    b = Jet.variables(POINTS, 3)[0]
    with pytest.raises(ValueError):
        a * b


def test_functions_pass_through_plain_numbers():
    assert jets.sin(0.0) == 0.0
    assert jets.exp(0.0) == 1.0
    assert math.isclose(jets.sqrt(4.0), 2.0)
