#!/usr/bin/env python3
"""
Tests for the quadratic curvature functionals, their variations and the stability scans.
"""

import sys
import os
# Add project root to path
sys.path.append(os.path.join(os.path.dirname(__file__), '..', '..'))

import math

import numpy as np
import pytest

from config import FD_TOLERANCE, GRADIENT_PAIRING_FLOOR, RANDOM_SEED
from src.geometry.curvature_tensors import ParameterPair
from src.models.soliton_catalog import catalog_model
from src.processing.variational import (
    FourierMode,
    PerturbationField,
    bach_linearization,
    conformal_bump,
    first_variation_check,
    flat_lichnerowicz_residual,
    flat_second_variation_check,
    functional_eval,
    gradient_pairing,
    gradient_test_fields,
    linearization_consistency,
    random_perturbation,
    reference_flat_mode,
    second_variation_R2,
    spectral_polynomial,
    stability_scan,
    tt_mode,
    v_linearization,
)
from src.utils.errors import NotTransverseTracelessError, StepRejectedError, VerificationError
from src.utils.quadrature import QuadratureSpec

TORUS_VOLUME = (2.0 * math.pi) ** 4


def test_fourier_mode_validation():
    with pytest.raises(VerificationError):
        FourierMode((1, 0, 0, 0), np.triu(np.ones((4, 4))))
    with pytest.raises(VerificationError):
        FourierMode((1, 0, 0), np.eye(4))
    with pytest.raises(VerificationError):
        FourierMode((1, 0, 0, 0), np.eye(4), phase="tan")


@pytest.mark.parametrize("k", [(1, 0, 0, 0), (1, 2, 0, 0), (1, 1, 1, 0), (0, 0, 2, -1)])
def test_tt_modes_are_exact(k):
    mode = tt_mode(k)
    assert mode.is_tt
    assert mode.wave_number_sq == sum(c * c for c in k)
    assert tt_mode(k, scale=0.5, rng=np.random.default_rng(4)).is_tt


def test_identity_amplitude_is_not_tt():
    field = PerturbationField([FourierMode((1, 0, 0, 0), np.eye(4))])
    assert not field.tt
    with pytest.raises(NotTransverseTracelessError):
        field.require_tt("test")


def test_reference_mode_mass_and_weight():
    field = reference_flat_mode()
    assert field.tt
    assert field.axes == (0,)
    assert field.flat_mass() == pytest.approx(TORUS_VOLUME)
    assert field.flat_hessian_weight() == pytest.approx(TORUS_VOLUME)


def test_duplicate_modes_are_rejected():
    mode = tt_mode((1, 0, 0, 0))
    field = PerturbationField([mode, FourierMode((-1, 0, 0, 0), mode.amplitude)])
    with pytest.raises(VerificationError):
        field.flat_mass()


def test_flat_lichnerowicz_eigenvalue():
    points = np.random.default_rng(2).uniform(0.0, 2.0 * math.pi, size=(6, 4))
    for k in ((1, 0, 0, 0), (1, 1, 0, 0), (2, 0, 1, 0)):
        assert flat_lichnerowicz_residual(tt_mode(k), points) < 1e-10


def test_functional_vanishes_on_flat_torus():
    values = functional_eval(ParameterPair(1.0, 0.0), catalog_model("flat-torus"))
    assert values.W2 == pytest.approx(0.0, abs=1e-14)
    assert values.R2 == pytest.approx(0.0, abs=1e-14)
    assert values.F == pytest.approx(0.0, abs=1e-14)


def test_conformal_torus_is_conformally_flat():
    values = functional_eval(ParameterPair(0.0, 1.0), catalog_model("conformal-torus"))
    assert values.W2 == pytest.approx(0.0, abs=1e-10)
    assert values.R2 > 0.0
    assert values.F == pytest.approx(-0.5 * values.R2)


@pytest.mark.parametrize("alpha, beta", [(1.0, 0.0), (0.0, 1.0)])
def test_first_variation_on_conformal_torus(alpha, beta):
    params = ParameterPair(alpha, beta)
    model = catalog_model("conformal-torus")
    fields = gradient_test_fields(params, model, seed=RANDOM_SEED)
    assert len(fields) == 5
    for h in fields:
        report = first_variation_check(params, model, h)
        assert abs(report.pairing) >= GRADIENT_PAIRING_FLOOR
        assert report.mismatch < FD_TOLERANCE, report
        assert report.verdict == "pass"
        assert len(report.central_differences) == 2


@pytest.mark.parametrize("alpha, beta", [(1.0, 0.0), (0.0, 1.0)])
def test_conformal_bump_pairs_with_the_gradient(alpha, beta):
    params = ParameterPair(alpha, beta)
    model = catalog_model("conformal-torus")
    bare = random_perturbation(np.random.default_rng(5))
    assert abs(gradient_pairing(params, model, bare)) < GRADIENT_PAIRING_FLOOR
    bumped = random_perturbation(np.random.default_rng(5), base=conformal_bump())
    assert abs(gradient_pairing(params, model, bumped)) > 1e3 * GRADIENT_PAIRING_FLOOR
    assert abs(gradient_pairing(params, model, conformal_bump())) > 1e3 * GRADIENT_PAIRING_FLOOR


def test_bumped_fields_keep_distinct_modes():
    h = random_perturbation(np.random.default_rng(1), mode_count=6, base=conformal_bump())
    assert len(h.modes) == 8
    assert [mode.k for mode in h.modes[:2]] == [(1, -1, 0, 0), (1, 1, 0, 0)]
    h.flat_mass()


def test_gradient_fields_redraw_below_the_floor():
    quad = QuadratureSpec(resolution=8)
    params = ParameterPair(1.0, 0.0)
    with pytest.raises(VerificationError):
        gradient_test_fields(params, catalog_model("conformal-torus"), count=1, floor=1e12, quad=quad)
    with pytest.raises(VerificationError):
        gradient_test_fields(params, catalog_model("flat-torus"), count=1, quad=quad)
    assert len(gradient_test_fields(params, catalog_model("flat-torus"), count=2, floor=0.0, quad=quad)) == 2


def test_first_variation_needs_a_torus():
    h = random_perturbation(np.random.default_rng(0))
    with pytest.raises(VerificationError):
        first_variation_check(ParameterPair(1.0, 0.0), catalog_model("gaussian"), h)


def test_flat_hessian_sign_of_reference_mode():
    report = flat_second_variation_check(1.0, reference_flat_mode())
    assert report.predicted == pytest.approx(TORUS_VOLUME, rel=1e-12)
    assert report.finite_difference == pytest.approx(-TORUS_VOLUME, rel=1e-4)
    assert report.verdict == "pass"
    assert report.mismatch_predicted > 1.0
    assert len(report.narrative) == 3


def test_flat_hessian_is_additive_over_modes():
    h = PerturbationField([tt_mode((1, 0, 0, 0)), tt_mode((0, 1, 0, 0))])
    report = flat_second_variation_check(2.0, h)
    assert report.predicted == pytest.approx(4.0 * TORUS_VOLUME, rel=1e-12)
    assert report.finite_difference == pytest.approx(-4.0 * TORUS_VOLUME, rel=1e-4)
    assert report.verdict == "pass"


def test_flat_hessian_rejects_large_steps():
    with pytest.raises(StepRejectedError):
        flat_second_variation_check(1.0, reference_flat_mode(), steps=(2.0,))


def test_second_variation_of_r2_on_flat_torus():
    report = second_variation_R2(catalog_model("flat-torus"), reference_flat_mode())
    assert report.verdict == "pass"
    assert report.form_value == pytest.approx(0.0, abs=1e-12)
    assert report.fd_value == pytest.approx(0.0, abs=1e-6)


def test_second_variation_reports_form_only_off_flat():
    report = second_variation_R2(catalog_model("conformal-torus"), PerturbationField([tt_mode((1, 0, 0, 0))]))
    assert report.fd_value is None
    assert report.notes


def test_second_variation_needs_tt():
    h = PerturbationField([FourierMode((1, 0, 0, 0), np.eye(4))])
    with pytest.raises(NotTransverseTracelessError):
        second_variation_R2(catalog_model("flat-torus"), h)


def test_spectral_polynomial_on_bach_line():
    poly = spectral_polynomial(1.0, 1.0 / 3.0, 6.0)
    assert (poly.a2, poly.a1) == (1.0, -3.0)
    assert poly.a0 == pytest.approx(2.0)
    assert poly.on_bach_line
    assert poly.roots() == pytest.approx([1.0, 2.0])


def test_bach_line_factorization():
    alpha, R, mu = np.random.default_rng(9).uniform(-5.0, 5.0, size=(3, 1_000_000))
    poly = spectral_polynomial(alpha, alpha / 3.0, R)
    np.testing.assert_allclose(poly.evaluate(mu), poly.bach_line_form(mu), rtol=1e-12, atol=1e-10)


@pytest.mark.parametrize("alpha, beta, R, mu0, expected", [
    (1.0, 0.0, 0.0, 1.0, 1.0),
    (1.0, 1.0 / 3.0, 6.0, 3.0, 2.0),
    (1.0, 1.0 / 3.0, 6.0, 1.5, -0.25),
])
def test_stability_infimum(alpha, beta, R, mu0, expected):
    verdicts = stability_scan(mu0, R, grid=[(alpha, beta)])
    verdict = verdicts[ParameterPair(alpha, beta)]
    assert verdict.inf == pytest.approx(expected)
    assert verdict.verdict == ("positive" if expected > 0.0 else "nonpositive")


def test_negative_leading_coefficient_is_unbounded():
    verdict = stability_scan(1.0, 6.0, grid=[(-1.0, 0.0)])[ParameterPair(-1.0, 0.0)]
    assert verdict.inf == -math.inf
    assert verdict.verdict == "nonpositive"


def test_scaling_flips_positive_verdicts():
    for mu0, R in ((3.0, 6.0), (1.0, 0.0)):
        positive = stability_scan(mu0, R, grid=[(1.0, 1.0 / 3.0)])[ParameterPair(1.0, 1.0 / 3.0)]
        flipped = stability_scan(mu0, R, grid=[(-1.0, -1.0 / 3.0)])[ParameterPair(-1.0, -1.0 / 3.0)]
        assert positive.verdict == "positive"
        assert flipped.verdict == "nonpositive"


def test_linearizations():
    assert bach_linearization(2.0, 6.0) == pytest.approx(0.0)
    assert v_linearization(1.0, 6.0) == pytest.approx(3.0)
    assert v_linearization(1.0, 6.0, form="completed") == pytest.approx(-6.0)
    with pytest.raises(VerificationError):
        v_linearization(1.0, 6.0, form="printed")


def test_only_completed_form_reproduces_polynomial():
    report = linearization_consistency(1.0, 0.0, 6.0)
    assert report.matching_forms == ["completed"]
    assert report.discrepancy["displayed"][2] == pytest.approx(3.0)
    flat = linearization_consistency(1.0, 0.0, 0.0)
    assert flat.matching_forms == ["displayed", "completed"]
