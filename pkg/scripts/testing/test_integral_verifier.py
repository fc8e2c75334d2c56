#!/usr/bin/env python3
"""
Tests for weighted quadrature, integral identities and the rigidity diagnostics.
"""

import sys
import os
# Add project root to path
sys.path.append(os.path.join(os.path.dirname(__file__), '..', '..'))

import math

import pytest

from config import CATALOG_SOLITONS, IDENTITY_IDS
from src.geometry.curvature_tensors import ParameterPair
from src.models.soliton_catalog import catalog_model
from src.processing.integral_verifier import (
    DomainSpec,
    IntegralVerifier,
    constant_one,
    identity_uses_c,
    judge,
    verify_identity,
)
from src.utils.errors import (
    HypothesisViolationError,
    IrregularValueError,
    NonCompactDomainError,
    NotASolitonError,
    UnknownIdentityError,
    VerificationError,
)
from src.utils.quadrature import QuadratureSpec

PI2 = math.pi ** 2


@pytest.fixture(scope="module")
def verifier():
    return IntegralVerifier(QuadratureSpec(resolution=64))


def test_gaussian_ball_volume_and_area(verifier):
    model = catalog_model("gaussian")
    volume = verifier.integrate(constant_one, DomainSpec.sublevel(model, 1.0))
    assert volume.value == pytest.approx(8.0 * PI2, rel=1e-12)
    assert not volume.empty_domain
    area = verifier.boundary_integrate(constant_one, model, 1.0)
    assert area.value == pytest.approx(16.0 * PI2, rel=1e-12)


def test_gaussian_weighted_full_volume(verifier):
    model = catalog_model("gaussian")
    value = verifier.integrate(constant_one, DomainSpec.full(model), c=1.0).value
    assert value == pytest.approx(16.0 * PI2, rel=1e-10)


def test_unweighted_full_manifold_is_rejected(verifier):
    with pytest.raises(NonCompactDomainError):
        verifier.integrate(constant_one, DomainSpec.full(catalog_model("cyl-s3xr")))


def test_sphere_sublevel_sets(verifier):
    model = catalog_model("sphere4")
    empty = verifier.integrate(constant_one, DomainSpec.sublevel(model, 1.5))
    assert empty.empty_domain
    assert empty.value == 0.0
    whole = verifier.integrate(constant_one, DomainSpec.sublevel(model, 3.0))
    assert whole.value == pytest.approx(96.0 * PI2, rel=1e-12)
    with pytest.raises(IrregularValueError):
        verifier.integrate(constant_one, DomainSpec.sublevel(model, 2.0))


def test_cylinder_slab_volume(verifier):
    model = catalog_model("cyl-s3xr")
    # f <= 5/2 is S^3(2) x [-2, 2]
    value = verifier.integrate(constant_one, DomainSpec.sublevel(model, 2.5)).value
    assert value == pytest.approx(64.0 * PI2, rel=1e-12)


def test_domain_validation():
    model = catalog_model("gaussian")
    with pytest.raises(VerificationError):
        DomainSpec(model=model, kind="sublevel")
    with pytest.raises(VerificationError):
        DomainSpec(model=model, kind="annulus")
    assert DomainSpec.sublevel(model, 2.0).label == "sublevel(r=2)"


def test_judge_is_relative():
    residual, ok = judge(1000.0, 1000.0005, 1e-6)
    assert residual == pytest.approx(5e-4)
    assert ok
    assert not judge(0.0, 1e-3, 1e-6)[1]


def test_l51_pinned_value_on_two_sphere_cylinder(verifier):
    report = verifier.verify_identity("L5.1", catalog_model("cyl-s2xr2"), r=None)
    expected = -(4.0 * PI2 / 3.0) * math.exp(-1.0)
    assert report.verdict == "pass"
    assert report.lhs == pytest.approx(expected, rel=1e-6)
    assert report.rhs == pytest.approx(expected, rel=1e-6)
    assert report.params == {"r": "full"}


def test_l73_pinned_value_on_three_sphere_cylinder(verifier):
    report = verifier.verify_identity("L7.3", catalog_model("cyl-s3xr"), r=None, c=1.0)
    expected = (3.0 / 16.0) * 16.0 * PI2 * math.sqrt(math.pi) * math.exp(-1.5)
    assert report.verdict == "pass"
    assert report.lhs == pytest.approx(expected, rel=1e-6)
    assert report.rhs == pytest.approx(expected, rel=1e-6)


@pytest.mark.parametrize("c", [0.5, 1.0, 2.0])
@pytest.mark.parametrize("offset", [0.5, 1.0, 2.0])
@pytest.mark.parametrize("name", CATALOG_SOLITONS)
def test_identity_grid(verifier, name, offset, c):
    model = catalog_model(name)
    for identity in IDENTITY_IDS:
        if c != 1.0 and not identity_uses_c(identity):
            continue
        report = verifier.verify_identity(identity, model, r=model.min_f + offset, c=c, tolerance=1e-6)
        assert report.verdict in ("pass", "vacuous"), (identity, report)


@pytest.fixture(scope="module")
def fine_verifier():
    return IntegralVerifier(QuadratureSpec(resolution=128))


@pytest.mark.parametrize("name", CATALOG_SOLITONS)
def test_doubling_resolution_changes_nothing(verifier, fine_verifier, name):
    model = catalog_model(name)
    for identity in IDENTITY_IDS:
        coarse = verifier.verify_identity(identity, model, r=model.min_f + 1.0, c=1.0)
        fine = fine_verifier.verify_identity(identity, model, r=model.min_f + 1.0, c=1.0)
        assert fine.lhs == pytest.approx(coarse.lhs, rel=1e-8, abs=1e-12), identity
        assert fine.rhs == pytest.approx(coarse.rhs, rel=1e-8, abs=1e-12), identity


def test_weighted_bach_identity_reports_scaled_form(verifier):
    report = verifier.verify_identity("L5.1-c", catalog_model("cyl-s2xr2"), r=None, c=2.0)
    assert report.verdict == "pass"
    assert report.extras["rhs_c_scaled"] == pytest.approx(2.0 * report.rhs, rel=1e-12)
    assert any("reported only" in note for note in report.notes)


def test_sphere_below_minimum_is_vacuous(verifier):
    report = verifier.verify_identity("L7.3", catalog_model("sphere4"), r=1.0)
    assert report.verdict == "vacuous"
    assert report.empty_domain
    assert report.passed


def test_unbounded_form_rejected_on_noncompact(verifier):
    with pytest.raises(NonCompactDomainError):
        verifier.verify_identity("L2.2-2", catalog_model("gaussian"), r=None)


def test_identity_errors(verifier):
    with pytest.raises(UnknownIdentityError):
        verifier.verify_identity("L9.9", catalog_model("gaussian"), r=1.0)
    with pytest.raises(NotASolitonError):
        verifier.verify_identity("L3.1", catalog_model("flat-torus"), r=1.0)
    with pytest.raises(VerificationError):
        verifier.verify_identity("L7.3", catalog_model("gaussian"), r=1.0, c=0.0)
    with pytest.raises(UnknownIdentityError):
        identity_uses_c("L9.9")


def test_module_level_entry_point():
    report = verify_identity("L2.2-4", catalog_model("gaussian"), r=1.0, quad=QuadratureSpec(resolution=16))
    assert report.verdict == "pass"
    assert report.resolution == 16


def test_rigidity_kernels_vanish_on_gaussian(verifier):
    report = verifier.rigidity_integrand_report(catalog_model("gaussian"), 0.5, params=ParameterPair(1.0, 0.0))
    assert report.verdict == "pass"
    assert not report.empty_domain
    for value in (report.kernel_scalar, report.kernel_gradient, report.kernel_d, report.kernel_u,
                  report.combination, report.combination_printed, report.bach_like_kernel):
        assert value == pytest.approx(0.0, abs=1e-12)
    assert report.flat and report.u_vanishes


def test_rigidity_on_cylinders_is_vacuous(verifier):
    report = verifier.rigidity_integrand_report(catalog_model("cyl-s2xr2"), 0.75)
    assert report.verdict == "vacuous"
    assert report.empty_domain
    assert report.u_vanishes
    assert any("empty" in line for line in report.narrative)
    assert verifier.rigidity_integrand_report(catalog_model("cyl-s3xr"), 0.9).verdict == "vacuous"


def test_rigidity_rejects_r_outside_unit_interval(verifier):
    with pytest.raises(HypothesisViolationError):
        verifier.rigidity_integrand_report(catalog_model("gaussian"), 1.5)


def test_rigidity_series_on_cylinders(verifier):
    for name in ("cyl-s3xr", "cyl-s2xr2"):
        model = catalog_model(name)
        terms = verifier.rigidity_series(model, model.min_f + 1.0, c=1.0)
        assert [term.n for term in terms] == [0, 1, 2, 3]
        assert all(term.verdict == "pass" for term in terms), terms
    # U vanishes on S^2 x R^2, so S_n = -T_n there
    assert all(term.rhs == pytest.approx(0.0, abs=1e-10)
               for term in verifier.rigidity_series(catalog_model("cyl-s2xr2"), 2.0))


def test_decay_probe(verifier):
    model = catalog_model("cyl-s3xr")
    report = verifier.decay_probe(model, 1.0, [2.5, 3.5, 5.5])
    assert report.verdict == "pass"
    assert report.values == pytest.approx([0.0, 0.0, 0.0], abs=1e-12)
    with pytest.raises(VerificationError):
        verifier.decay_probe(model, 1.0, [3.0, 2.0])
    with pytest.raises(VerificationError):
        verifier.decay_probe(model, 0.0, [2.5, 3.0])


def test_torus_gradient_energy_converges():
    verifier = IntegralVerifier(QuadratureSpec(resolution=32))
    report = verifier.torus_gradient_energy(catalog_model("conformal-torus"), resolutions=(24, 32))
    assert report.values[-1] > 0.0
    assert report.verdict == "pass"
    assert report.stable_digits > 3.0


def test_torus_volume():
    verifier = IntegralVerifier(QuadratureSpec(resolution=16), derivative_order=0)
    value = verifier.integrate(constant_one, DomainSpec.torus(catalog_model("flat-torus"))).value
    assert value == pytest.approx((2.0 * math.pi) ** 4, rel=1e-12)
