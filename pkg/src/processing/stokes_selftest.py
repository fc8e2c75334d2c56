"""
Divergence-theorem self-test for the quadrature layer.

Three kinds of domain:
  - the flat torus T^4 of side 2*pi, where int div X dV must vanish;
  - the Euclidean ball of radius 2 (the sublevel set {f <= 1} of the
    Gaussian soliton), where int div X dV must equal the outward flux;
  - sublevel sets {f <= min f + 1} of the non-compact solitons, integrated
    through IntegralVerifier with X = 2 grad f, so div X = 2 Delta f and the
    flux density is 2 |grad f|. On the Gaussian ball X is the position field.

Ball integrals run in hyperspherical coordinates (rho, psi, theta, phi) with
Gauss-Legendre nodes in rho, psi, theta and the periodic trapezoid in phi.
Polynomial fields are stored as dense coefficient arrays c[e1, e2, e3, e4];
a monomial x^e restricted to radius rho is rho^|e| times a product of powers
of cos and sin in each angle, so every ball integral factors into 1-D sums.
"""

import logging
import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
from scipy import signal

from config import RANDOM_SEED, STOKES_FIELD_COUNT, STOKES_TOLERANCE
from ..models.soliton_catalog import catalog_model
from ..utils.quadrature import QuadratureSpec, deterministic_sum, interval_rule, periodic_rule
from .integral_verifier import DomainSpec, IntegralVerifier, grad_f_norm

logger = logging.getLogger(__name__)

BALL_RADIUS = 2.0
MAX_DEGREE = 10
FOURIER_MAX_WAVENUMBER = 3
SUBLEVEL_MODELS = ("gaussian", "cyl-s3xr", "cyl-s2xr2")


@dataclass
class StokesCase:
    domain: str
    field: str
    volume: float
    boundary: float
    residual: float
    passed: bool


@dataclass
class StokesReport:
    resolution: int
    tolerance: float
    cases: List[StokesCase] = field(default_factory=list)

    @property
    def max_residual(self) -> float:
        return max((case.residual for case in self.cases), default=0.0)

    @property
    def passed(self) -> bool:
        return all(case.passed for case in self.cases)

    @property
    def verdict(self) -> str:
        return "pass" if self.passed else "fail"


# ---------------------------------------------------------------------------
# Polynomial vector fields
# ---------------------------------------------------------------------------

def _shape() -> Tuple[int, ...]:
    return (MAX_DEGREE + 1,) * 4


def _crop(coeffs: np.ndarray) -> np.ndarray:
    return coeffs[tuple(slice(0, MAX_DEGREE + 1) for _ in range(4))]


def poly_multiply(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Product of two dense polynomials, truncated to MAX_DEGREE per variable."""
    return _crop(signal.convolve(a, b, mode="full", method="direct"))


def poly_derivative(coeffs: np.ndarray, axis: int) -> np.ndarray:
    result = np.zeros_like(coeffs)
    exponents = np.arange(1, MAX_DEGREE + 1, dtype=float)
    shape = [1, 1, 1, 1]
    shape[axis] = MAX_DEGREE
    source = np.take(coeffs, np.arange(1, MAX_DEGREE + 1), axis=axis) * exponents.reshape(shape)
    index = [slice(None)] * 4
    index[axis] = slice(0, MAX_DEGREE)
    result[tuple(index)] = source
    return result


def _monomial(exponent: Sequence[int], coefficient: float = 1.0) -> np.ndarray:
    coeffs = np.zeros(_shape())
    coeffs[tuple(exponent)] = coefficient
    return coeffs


def _coordinate(axis: int) -> np.ndarray:
    exponent = [0, 0, 0, 0]
    exponent[axis] = 1
    return _monomial(exponent)


def _total_degree() -> np.ndarray:
    grids = np.meshgrid(*[np.arange(MAX_DEGREE + 1)] * 4, indexing="ij")
    return sum(grids)


def random_cubic_field(rng: np.random.Generator) -> List[np.ndarray]:
    mask = _total_degree() <= 3
    return [np.where(mask, rng.standard_normal(_shape()), 0.0) for _ in range(4)]


def position_field() -> List[np.ndarray]:
    return [_coordinate(axis) for axis in range(4)]


def boundary_bump_field(rng: np.random.Generator) -> List[np.ndarray]:
    """(4 - |x|^2)^4 times a random affine field; vanishes to fourth order on the sphere |x| = 2."""
    profile = _monomial((0, 0, 0, 0), BALL_RADIUS ** 2)
    for axis in range(4):
        exponent = [0, 0, 0, 0]
        exponent[axis] = 2
        profile = profile - _monomial(exponent)
    bump = _monomial((0, 0, 0, 0))
    for _ in range(4):
        bump = poly_multiply(bump, profile)
    components = []
    for _ in range(4):
        affine = _monomial((0, 0, 0, 0), rng.standard_normal())
        for axis in range(4):
            affine = affine + _coordinate(axis) * rng.standard_normal()
        components.append(poly_multiply(bump, affine))
    return components


def divergence(components: Sequence[np.ndarray]) -> np.ndarray:
    return sum(poly_derivative(components[axis], axis) for axis in range(4))


def radial_flux(components: Sequence[np.ndarray]) -> np.ndarray:
    """<X, x> / |x| on the sphere of radius 2, as a polynomial."""
    return sum(poly_multiply(components[axis], _coordinate(axis)) for axis in range(4)) / BALL_RADIUS


# ---------------------------------------------------------------------------
# Ball quadrature
# ---------------------------------------------------------------------------

@lru_cache(maxsize=None)
def _angle_moments(resolution: int, rule: str) -> Tuple[np.ndarray, np.ndarray]:
    """
    Tables of int_0^pi cos^a sin^b (Gauss-Legendre) and int_0^2pi cos^a sin^b (trapezoid).

    Returns:
        (half[a, b], full[a, b]) for a, b in 0..MAX_DEGREE + 3
    """
    quad = QuadratureSpec(resolution=resolution, rule=rule)
    size = MAX_DEGREE + 4
    half_nodes, half_weights = interval_rule(0.0, math.pi, quad)
    full_nodes, full_weights = periodic_rule(resolution)
    half = np.zeros((size, size))
    full = np.zeros((size, size))
    for a in range(size):
        for b in range(size):
            half[a, b] = deterministic_sum(half_weights * np.cos(half_nodes) ** a * np.sin(half_nodes) ** b)
            full[a, b] = deterministic_sum(full_weights * np.cos(full_nodes) ** a * np.sin(full_nodes) ** b)
    return half, full


@lru_cache(maxsize=None)
def _sphere_moments(resolution: int, rule: str) -> np.ndarray:
    """A[e] = int_{S^3} omega^e dOmega with dOmega = sin^2(psi) sin(theta) dpsi dtheta dphi."""
    half, full = _angle_moments(resolution, rule)
    table = np.zeros(_shape())
    for e1, e2, e3, e4 in np.ndindex(*_shape()):
        if e1 + e2 + e3 + e4 > MAX_DEGREE:
            continue
        table[e1, e2, e3, e4] = (half[e1, e2 + e3 + e4 + 2]
                                 * half[e2, e3 + e4 + 1]
                                 * full[e3, e4])
    return table


@lru_cache(maxsize=None)
def _radial_moments(resolution: int, rule: str) -> np.ndarray:
    """int_0^2 rho^(k+3) d rho for k = 0..MAX_DEGREE."""
    nodes, weights = interval_rule(0.0, BALL_RADIUS, QuadratureSpec(resolution=resolution, rule=rule))
    return np.array([deterministic_sum(weights * nodes ** (k + 3)) for k in range(MAX_DEGREE + 1)])


def ball_volume_integral(coeffs: np.ndarray, quad: QuadratureSpec) -> float:
    degree = _total_degree()
    radial = _radial_moments(quad.resolution, quad.rule)[np.minimum(degree, MAX_DEGREE)]
    terms = coeffs * radial * _sphere_moments(quad.resolution, quad.rule)
    return deterministic_sum(terms[degree <= MAX_DEGREE])


def sphere_surface_integral(coeffs: np.ndarray, quad: QuadratureSpec) -> float:
    degree = _total_degree()
    scale = BALL_RADIUS ** (degree + 3.0)
    terms = coeffs * scale * _sphere_moments(quad.resolution, quad.rule)
    return deterministic_sum(terms[degree <= MAX_DEGREE])


# ---------------------------------------------------------------------------
# Torus fields
# ---------------------------------------------------------------------------

@dataclass
class FourierFactor:
    """a cos(k x) + b sin(k x) + c along one axis."""
    k: int
    a: float
    b: float
    c: float

    def value(self, x: np.ndarray) -> np.ndarray:
        return self.a * np.cos(self.k * x) + self.b * np.sin(self.k * x) + self.c

    def derivative(self, x: np.ndarray) -> np.ndarray:
        return self.k * (-self.a * np.sin(self.k * x) + self.b * np.cos(self.k * x))


def random_fourier_field(rng: np.random.Generator) -> List[List[FourierFactor]]:
    """X^a(x) = prod_b factor[a][b](x_b)."""
    return [[FourierFactor(int(rng.integers(0, FOURIER_MAX_WAVENUMBER + 1)), *rng.standard_normal(3))
             for _ in range(4)] for _ in range(4)]


def torus_divergence_integral(field_factors: List[List[FourierFactor]], resolution: int) -> float:
    nodes, weights = periodic_rule(resolution)
    total = []
    for a, factors in enumerate(field_factors):
        product = 1.0
        for b, factor in enumerate(factors):
            samples = factor.derivative(nodes) if a == b else factor.value(nodes)
            product *= deterministic_sum(weights * samples)
        total.append(product)
    return math.fsum(total)


# ---------------------------------------------------------------------------
# Sublevel sets of the solitons
# ---------------------------------------------------------------------------

def sublevel_gradient_flux(verifier: IntegralVerifier, model_name: str) -> Tuple[float, float]:
    """
    (int_{f <= r} 2 Delta f dV, int_{f = r} 2 |grad f| dS) at r = min f + 1.

    Both sides go through the verifier's sublevel and level-set quadrature.
    """
    model = catalog_model(model_name)
    r = model.min_f + 1.0
    volume = verifier.integrate(lambda geom: 2.0 * geom.potential.laplacian, DomainSpec.sublevel(model, r)).value
    boundary = verifier.boundary_integrate(lambda geom: 2.0 * grad_f_norm(geom), model, r).value
    return volume, boundary


# ---------------------------------------------------------------------------
# Driver
# ---------------------------------------------------------------------------

def _case(domain: str, name: str, volume: float, boundary: float, tolerance: float) -> StokesCase:
    residual = abs(volume - boundary)
    passed = residual <= tolerance * (1.0 + abs(volume) + abs(boundary))
    return StokesCase(domain=domain, field=name, volume=volume, boundary=boundary, residual=residual, passed=passed)


def stokes_selftest(quad: QuadratureSpec, field_count: int = STOKES_FIELD_COUNT,
                    tolerance: float = STOKES_TOLERANCE, seed: int = RANDOM_SEED,
                    verifier: Optional[IntegralVerifier] = None) -> StokesReport:
    """
    int div X dV against the boundary flux for randomized smooth fields.

    Args:
        quad: resolution and rule (the ball uses it on rho, psi and theta)
        field_count: random fields per domain
        tolerance: relative tolerance on each residual
        seed: random seed
        verifier: integrates the soliton sublevel cases (a fresh one at `quad` if omitted)

    Returns:
        StokesReport with one case per field
    """
    rng = np.random.default_rng(seed)
    report = StokesReport(resolution=quad.resolution, tolerance=tolerance)

    for index in range(field_count):
        factors = random_fourier_field(rng)
        volume = torus_divergence_integral(factors, quad.resolution)
        report.cases.append(_case("torus", f"fourier-{index}", volume, 0.0, tolerance))

    ball_fields: Dict[str, List[np.ndarray]] = {
        f"cubic-{index}": random_cubic_field(rng) for index in range(field_count)
    }
    ball_fields["position"] = position_field()
    ball_fields["bump"] = boundary_bump_field(rng)
    for name, components in ball_fields.items():
        volume = ball_volume_integral(divergence(components), quad)
        boundary = sphere_surface_integral(radial_flux(components), quad)
        report.cases.append(_case("ball", name, volume, boundary, tolerance))

    verifier = verifier or IntegralVerifier(quad)
    for model_name in SUBLEVEL_MODELS:
        volume, boundary = sublevel_gradient_flux(verifier, model_name)
        report.cases.append(_case(f"sublevel:{model_name}", "2 grad f", volume, boundary, tolerance))

    log =logger.info if report.passed else logger.error
    log(f"Stokes self-test at resolution {quad.resolution}: {len(report.cases)} fields, "
        f"max residual {report.max_residual:.3e}")
    return report
