#!/usr/bin/env python3
"""
Tests for the curvature tensor layer: U, V, Bach, Cotton, D and parameter classification.
"""

import sys
import os
# Add project root to path
sys.path.append(os.path.join(os.path.dirname(__file__), '..', '..'))

import numpy as np
import pytest

from src.geometry.chart_calculus import orthonormal_components, tensor_norm_sq
from src.geometry.curvature_tensors import (
    ParameterPair,
    ParameterRegion,
    bach_like,
    bach_tensor,
    bochner_residual,
    classify_parameters,
    cotton_tensor,
    d_tensor,
    numeric_divergence,
    tensor_U,
    tensor_V,
    traces,
    weyl_norm_sq,
)
from src.models.soliton_catalog import catalog_model
from src.utils.errors import NotASolitonError, VerificationError


def _geometry(name, count=10, seed=11):
    model = catalog_model(name)
    return model, model.geometry(model.sample_points(count, np.random.default_rng(seed)), derivative_order=2)


def _diag(values, size):
    return np.broadcast_to(np.diag(values), (size, 4, 4))


@pytest.mark.parametrize("alpha, beta, region", [
    (3.0, 1.0, ParameterRegion.BACH_LINE),
    (1.0, 1.0 / 3.0, ParameterRegion.BACH_LINE),
    (0.0, 1.0, ParameterRegion.INSIDE_CONE),
    (-1.0, -1.0, ParameterRegion.INSIDE_CONE),
    (1.0, 0.0, ParameterRegion.OUTSIDE_CONE),
    (-1.0, 0.0, ParameterRegion.OUTSIDE_CONE),
    (0.0, 0.0, ParameterRegion.ORIGIN),
])
def test_parameter_classification(alpha, beta, region):
    assert classify_parameters(ParameterPair(alpha, beta)) == region


def test_bach_like_rejects_origin():
    _, geom = _geometry("gaussian", count=2)
    with pytest.raises(VerificationError):
        bach_like(ParameterPair(0.0, 0.0), geom.cache)


def test_three_sphere_cylinder_oracles():
    _, geom = _geometry("cyl-s3xr")
    cache = geom.cache
    n = geom.size
    np.testing.assert_allclose(orthonormal_components(tensor_U(cache), cache.metric),
                               _diag([-1 / 16, -1 / 16, -1 / 16, 3 / 16], n), atol=1e-9)
    np.testing.assert_allclose(orthonormal_components(tensor_V(cache), cache.metric),
                               _diag([3 / 16, 3 / 16, 3 / 16, -9 / 16], n), atol=1e-9)
    np.testing.assert_allclose(bach_tensor(cache), 0.0, atol=1e-9)


def test_two_sphere_cylinder_oracles():
    _, geom = _geometry("cyl-s2xr2")
    cache = geom.cache
    n = geom.size
    np.testing.assert_allclose(tensor_U(cache), 0.0, atol=1e-9)
    np.testing.assert_allclose(orthonormal_components(tensor_V(cache), cache.metric),
                               _diag([0.25, 0.25, -0.25, -0.25], n), atol=1e-9)
    np.testing.assert_allclose(orthonormal_components(bach_tensor(cache), cache.metric),
                               _diag([1 / 24, 1 / 24, -1 / 24, -1 / 24], n), atol=1e-9)
    D = d_tensor(cache, geom.potential, route="soliton-formula")
    grad_sq = np.einsum("zi,zij,zj->z", geom.potential.grad, cache.inverse, geom.potential.grad)
    np.testing.assert_allclose(tensor_norm_sq(D, cache.inverse), grad_sq / 12.0, atol=1e-9)


def test_flat_and_einstein_models_are_bach_flat():
    for name in ("gaussian", "sphere4"):
        _, geom = _geometry(name, count=5)
        cache = geom.cache
        np.testing.assert_allclose(tensor_U(cache), 0.0, atol=1e-9)
        np.testing.assert_allclose(tensor_V(cache), 0.0, atol=1e-9)
        np.testing.assert_allclose(bach_tensor(cache), 0.0, atol=1e-9)


def test_bach_routes_agree_on_conformal_torus():
    _, geom = _geometry("conformal-torus")
    cache = geom.cache
    np.testing.assert_allclose(bach_tensor(cache, route="weyl"), bach_tensor(cache, route="uv"), atol=1e-8)
    np.testing.assert_allclose(weyl_norm_sq(cache), 0.0, atol=1e-10)


def test_bach_routes_agree_on_solitons():
    for name in ("cyl-s3xr", "cyl-s2xr2"):
        _, geom = _geometry(name)
        cache = geom.cache
        weyl_route = bach_tensor(cache, route="weyl")
        np.testing.assert_allclose(weyl_route, bach_tensor(cache, route="uv"), atol=1e-8)
        np.testing.assert_allclose(weyl_route, bach_tensor(cache, route="d", potential=geom.potential), atol=1e-8)


def test_cotton_routes_agree():
    _, geom = _geometry("conformal-torus")
    np.testing.assert_allclose(cotton_tensor(geom.cache, route="weyl"), cotton_tensor(geom.cache, route="ricci"),
                               atol=1e-8)


def test_d_routes_agree():
    _, geom = _geometry("cyl-s2xr2")
    np.testing.assert_allclose(d_tensor(geom.cache, geom.potential, route="conformal"),
                               d_tensor(geom.cache, geom.potential, route="soliton-formula"), atol=1e-9)


def test_u_on_soliton_route():
    model, geom = _geometry("cyl-s3xr")
    np.testing.assert_allclose(tensor_U(geom.cache),
                               tensor_U(geom.cache, route="on-soliton", potential=geom.potential, rho=model.rho),
                               atol=1e-9)


def test_d_tensor_needs_potential():
    _, geom = _geometry("conformal-torus", count=2)
    with pytest.raises(NotASolitonError):
        d_tensor(geom.cache, None)


def test_trace_identities_on_conformal_torus():
    _, geom = _geometry("conformal-torus")
    t = traces(geom.cache)
    assert np.max(np.abs(t["laplacian_R"])) > 1e-3
    np.testing.assert_allclose(t["trU"], -t["laplacian_R"], atol=1e-8)
    np.testing.assert_allclose(t["trV"], 3.0 * t["laplacian_R"], atol=1e-8)
    np.testing.assert_allclose(t["trB"], 0.0, atol=1e-8)


def test_bochner_identity_on_cylinders():
    for name in ("cyl-s3xr", "cyl-s2xr2"):
        _, geom = _geometry(name)
        np.testing.assert_allclose(bochner_residual(geom.cache, geom.potential), 0.0, atol=1e-10)


def test_u_and_v_are_divergence_free():
    model, geom = _geometry("conformal-torus", count=4)
    points = geom.points
    cache = model.cache(points, derivative_order=2)
    for tensor in (tensor_U, tensor_V):
        divergence = numeric_divergence(lambda shifted: tensor(model.cache(shifted, derivative_order=2)),
                                        points, cache, 1e-2)
        assert np.max(np.abs(divergence)) < 1e-6


def test_unknown_routes_raise():
    _, geom = _geometry("gaussian", count=2)
    with pytest.raises(VerificationError):
        bach_tensor(geom.cache, route="nonsense")
    with pytest.raises(VerificationError):
        cotton_tensor(geom.cache, route="nonsense")
    with pytest.raises(VerificationError):
        tensor_U(geom.cache, route="nonsense")
