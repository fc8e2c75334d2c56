#!/usr/bin/env python3
"""
Tests for the divergence-theorem self-test of the quadrature layer.
"""

import sys
import os
# Add project root to path
sys.path.append(os.path.join(os.path.dirname(__file__), '..', '..'))

import math

import numpy as np
import pytest

from src.processing.integral_verifier import IntegralVerifier
from src.processing.stokes_selftest import (
    SUBLEVEL_MODELS,
    ball_volume_integral,
    boundary_bump_field,
    divergence,
    poly_derivative,
    poly_multiply,
    position_field,
    radial_flux,
    sphere_surface_integral,
    stokes_selftest,
    sublevel_gradient_flux,
)
from src.utils.quadrature import QuadratureSpec

QUAD = QuadratureSpec(resolution=64)


def _constant(value=1.0):
    coeffs = np.zeros((11, 11, 11, 11))
    coeffs[0, 0, 0, 0] = value
    return coeffs


def test_ball_volume_and_sphere_area():
    assert ball_volume_integral(_constant(), QUAD) == pytest.approx(8.0 * math.pi ** 2, rel=1e-12)
    assert sphere_surface_integral(_constant(), QUAD) == pytest.approx(16.0 * math.pi ** 2, rel=1e-12)


def test_position_field_flux():
    field = position_field()
    volume = ball_volume_integral(divergence(field), QUAD)
    boundary = sphere_surface_integral(radial_flux(field), QUAD)
    assert volume == pytest.approx(32.0 * math.pi ** 2, rel=1e-12)
    assert boundary == pytest.approx(32.0 * math.pi ** 2, rel=1e-12)


def test_polynomial_helpers():
    x = np.zeros((11, 11, 11, 11))
    x[1, 0, 0, 0] = 1.0
    square = poly_multiply(x, x)
    assert square[2, 0, 0, 0] == 1.0
    assert np.count_nonzero(square) == 1
    derivative = poly_derivative(square, 0)
    assert derivative[1, 0, 0, 0] == 2.0
    assert np.count_nonzero(derivative) == 1


def test_bump_field_has_no_flux():
    field = boundary_bump_field(np.random.default_rng(0))
    assert abs(sphere_surface_integral(radial_flux(field), QUAD)) < 1e-6
    assert abs(ball_volume_integral(divergence(field), QUAD)) < 1e-6


def test_selftest_passes_at_default_resolution():
    report = stokes_selftest(QUAD, field_count=10, tolerance=1e-8, seed=7)
    assert report.passed
    assert report.verdict == "pass"
    assert report.max_residual < 1e-8
    domains = [case.domain for case in report.cases]
    assert domains.count("torus") == 10
    assert domains.count("ball") == 12


def test_selftest_is_deterministic():
    first = stokes_selftest(QUAD, field_count=3, seed=2)
    second = stokes_selftest(QUAD, field_count=3, seed=2)
    assert [case.volume for case in first.cases] == [case.volume for case in second.cases]


def test_gaussian_ball_through_the_verifier():
    volume, boundary = sublevel_gradient_flux(IntegralVerifier(QUAD), "gaussian")
    assert volume == pytest.approx(32.0 * math.pi ** 2, rel=1e-10)
    assert boundary == pytest.approx(32.0 * math.pi ** 2, rel=1e-10)


@pytest.mark.parametrize("name", SUBLEVEL_MODELS)
def test_sublevel_flux_matches_divergence(name):
    volume, boundary = sublevel_gradient_flux(IntegralVerifier(QUAD), name)
    assert volume > 0.0
    assert volume == pytest.approx(boundary, rel=1e-8)


def test_selftest_reports_sublevel_cases():
    report = stokes_selftest(QUAD, field_count=1, seed=0)
    sublevel = [case for case in report.cases if case.domain.startswith("sublevel:")]
    assert [case.domain for case in sublevel] == [f"sublevel:{name}" for name in SUBLEVEL_MODELS]
    assert all(case.passed for case in sublevel)
