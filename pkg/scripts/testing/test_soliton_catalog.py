#!/usr/bin/env python3
"""
Tests for the soliton catalog: model construction, oracles and soliton residuals.
"""

import sys
import os
# Add project root to path
sys.path.append(os.path.join(os.path.dirname(__file__), '..', '..'))

import math

import numpy as np
import pytest

from config import CATALOG_SOLITONS, SOLITON_RESIDUAL_TOLERANCE
from src.models.soliton_catalog import (
    MODEL_NAMES,
    catalog_model,
    exact_oracle,
    perturbed_model,
    soliton_residuals,
)
from src.utils.errors import MissingOracleError, NotASolitonError, UnknownModelError


def test_catalog_names():
    assert MODEL_NAMES == ["gaussian", "sphere4", "cyl-s3xr", "cyl-s2xr2", "conformal-torus", "flat-torus"]
    for name in MODEL_NAMES:
        assert catalog_model(name).name == name


def test_unknown_model_raises():
    with pytest.raises(UnknownModelError):
        catalog_model("hyperbolic")


@pytest.mark.parametrize("name, min_f", [("gaussian", 0.0), ("sphere4", 2.0), ("cyl-s3xr", 1.5), ("cyl-s2xr2", 1.0)])
def test_potential_minimum(name, min_f):
    model = catalog_model(name)
    assert model.is_soliton
    assert model.min_f == min_f


def test_torus_models_carry_no_potential():
    for name in ("conformal-torus", "flat-torus"):
        model = catalog_model(name)
        assert not model.is_soliton
        assert model.reduction.kind == "periodic"


def test_conformal_torus_amplitude_override():
    model = catalog_model("conformal-torus", amplitude=0.25)
    assert model.parameters == {"a": 0.25}


def test_sphere_volume():
    model = catalog_model("sphere4")
    assert math.isclose(model.total_volume, 96.0 * math.pi ** 2)
    assert model.compact


@pytest.mark.parametrize("name", CATALOG_SOLITONS)
def test_soliton_equations_hold(name):
    model = catalog_model(name)
    points = model.sample_points(40, np.random.default_rng(5))
    report = soliton_residuals(model, points)
    assert report.points == 40
    assert report.max_residual() < SOLITON_RESIDUAL_TOLERANCE * 10.0


def test_normalization_on_gaussian():
    model = catalog_model("gaussian")
    points = np.array([[1.0, 2.0, 0.0, -1.0]])
    geom = model.geometry(points)
    np.testing.assert_allclose(geom.potential.f, 1.5)
    np.testing.assert_allclose(geom.potential.grad, [[0.5, 1.0, 0.0, -0.5]])


def test_residuals_need_a_soliton():
    with pytest.raises(NotASolitonError):
        soliton_residuals(catalog_model("flat-torus"), np.zeros((1, 4)))


def test_exact_oracle_returns_copies():
    model = catalog_model("cyl-s3xr")
    value = exact_oracle(model, "V")
    value[0, 0] = 100.0
    np.testing.assert_allclose(exact_oracle(model, "V"), np.diag([3.0, 3.0, 3.0, -9.0]) / 16.0)
    assert exact_oracle(catalog_model("sphere4"), "sectional") == pytest.approx(1.0 / 6.0)


def test_missing_oracle_raises():
    with pytest.raises(MissingOracleError):
        exact_oracle(catalog_model("conformal-torus"), "B")


def test_sample_points_stay_in_chart():
    model = catalog_model("cyl-s2xr2")
    points = model.sample_points(200, np.random.default_rng(1))
    for axis, (lo, hi) in enumerate(model.chart_domain):
        assert np.all(points[:, axis] >= lo)
        assert np.all(points[:, axis] <= hi)


def test_perturbed_model():
    base = catalog_model("flat-torus")

    def bump(xs):
        return [[0.1 if (i, j) == (1, 1) else 0.0 for j in range(4)] for i in range(4)]

    model = perturbed_model(base, bump, 0.5, extra_axes=(2,))
    assert model.name == "flat-torus+perturbation"
    assert not model.is_soliton
    assert model.reduction.active_axes == (2,)
    jet = model.metric_jet(np.zeros((1, 4)), order=2)
    np.testing.assert_allclose(jet.g[0], np.diag([1.0, 1.05, 1.0, 1.0]))
