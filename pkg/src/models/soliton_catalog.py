"""
Catalog of closed-form gradient shrinking solitons and test metrics.

Each model supplies metric and potential component functions written in jet
arithmetic, a chart domain for pointwise sampling, a symmetry reduction used
by the integrators, and a table of hand-derived orthonormal-frame oracles.
Product models order their coordinates sphere factor first, flat factor last,
so oracle diagonals line up with coordinate frames.
"""

import logging
import math
from dataclasses import dataclass, field, replace
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np

from config import CONFORMAL_TORUS_AMPLITUDE, JET_ORDER
from ..geometry.chart_calculus import (
    ComponentFunction,
    GeometryCache,
    MetricJet,
    PotentialJet,
    evaluate_metric_jet,
    evaluate_tensor_field,
    geometry_cache,
    potential_jet,
    tensor_norm_sq,
)
from ..geometry.curvature_tensors import bochner_residual, raised_gradient
from ..utils import jets
from ..utils.errors import MissingOracleError, NotASolitonError, UnknownModelError

logger = logging.getLogger(__name__)

TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class SymmetryReduction:
    """
    How integrals over the model collapse to low-dimensional quadrature.

    kind:
        "radial"      s >= 0 along `axis`, measure factor * s^(dimension-1) ds, f = f_min + s^2/4
        "line"        s in R along `axis`, measure factor ds, f = f_min + s^2/4
        "homogeneous" a single representative point carrying the total volume
        "periodic"    torus of side 2*pi; quadrature over `active_axes` only
    """
    kind: str
    factor: float = 1.0
    dimension: int = 1
    axis: int = 0
    base_point: Tuple[float, float, float, float] = (0.0, 0.0, 0.0, 0.0)
    active_axes: Tuple[int, ...] = ()

    def points(self, s: np.ndarray) -> np.ndarray:
        s = np.asarray(s, dtype=float)
        result = np.tile(np.asarray(self.base_point, dtype=float), (s.size, 1))
        result[:, self.axis] = s
        return result

    def measure(self, s: np.ndarray) -> np.ndarray:
        s = np.asarray(s, dtype=float)
        if self.kind == "radial":
            return self.factor * s ** (self.dimension - 1)
        return np.full(s.shape, self.factor)


@dataclass
class PointGeometry:
    """Everything an integrand may use at a batch of points."""
    points: np.ndarray
    cache: GeometryCache
    potential: Optional[PotentialJet]
    rho: float = 0.5

    @property
    def size(self) -> int:
        return self.points.shape[0]


@dataclass
class SolitonModel:
    name: str
    description: str
    metric_components: ComponentFunction
    chart_domain: Tuple[Tuple[float, float], ...]
    reduction: SymmetryReduction
    potential_component: Optional[Callable[[Sequence[jets.Jet]], object]] = None
    rho: float = 0.5
    min_f: Optional[float] = None
    total_volume: Optional[float] = None
    compact: bool = False
    oracles: Dict[str, object] = field(default_factory=dict)
    parameters: Dict[str, float] = field(default_factory=dict)

    @property
    def is_soliton(self) -> bool:
        return self.potential_component is not None

    def metric_jet(self, points: np.ndarray, order: int = JET_ORDER) -> MetricJet:
        return evaluate_metric_jet(self.metric_components, points, order)

    def cache(self, points: np.ndarray, derivative_order: int = 2) -> GeometryCache:
        return geometry_cache(self.metric_jet(points, derivative_order + 2), derivative_order)

    def potential(self, points: np.ndarray, cache: GeometryCache) -> PotentialJet:
        if not self.is_soliton:
            raise NotASolitonError(f"model '{self.name}' is not a soliton and carries no potential")
        partials = evaluate_tensor_field(self.potential_component, points, valence=0, order=3)
        return potential_jet(partials, cache)

    def geometry(self, points: np.ndarray, derivative_order: int = 2) -> PointGeometry:
        points = np.atleast_2d(np.asarray(points, dtype=float))
        cache = self.cache(points, derivative_order)
        potential = self.potential(points, cache) if self.is_soliton else None
        return PointGeometry(points=points, cache=cache, potential=potential, rho=self.rho)

    def sample_points(self, count: int, rng: np.random.Generator) -> np.ndarray:
        lows = np.array([lo for lo, _ in self.chart_domain])
        highs = np.array([hi for _, hi in self.chart_domain])
        return lows + (highs - lows) * rng.random((count, 4))


# ---------------------------------------------------------------------------
# Component functions
# ---------------------------------------------------------------------------

def _diagonal(entries: Sequence[object]) -> List[List[object]]:
    return [[entries[i] if i == j else 0.0 for j in range(4)] for i in range(4)]


def _euclidean(xs):
    return _diagonal([1.0, 1.0, 1.0, 1.0])


def _gaussian_potential(xs):
    return (xs[0] * xs[0] + xs[1] * xs[1] + xs[2] * xs[2] + xs[3] * xs[3]) * 0.25


def _stereographic_sphere(radius_sq: float):
    def components(xs):
        norm_sq = xs[0] * xs[0] + xs[1] * xs[1] + xs[2] * xs[2] + xs[3] * xs[3]
        conformal = (2.0 * radius_sq / (norm_sq + radius_sq)) ** 2
        return _diagonal([conformal] * 4)
    return components


def _three_sphere_line(radius_sq: float):
    def components(xs):
        psi, theta = xs[0], xs[1]
        sin_psi_sq = jets.sin(psi) ** 2
        return _diagonal([radius_sq, radius_sq * sin_psi_sq,
                          radius_sq * sin_psi_sq * jets.sin(theta) ** 2, 1.0])
    return components


def _two_sphere_plane(radius_sq: float):
    def components(xs):
        return _diagonal([radius_sq, radius_sq * jets.sin(xs[0]) ** 2, 1.0, 1.0])
    return components


def conformally_flat(phi: Callable[[Sequence[jets.Jet]], object]) -> ComponentFunction:
    """g = exp(2 phi) delta."""
    def components(xs):
        factor = jets.exp(phi(xs) * 2.0)
        return _diagonal([factor] * 4)
    return components


def conformal_bump(amplitude: float) -> Callable[[Sequence[jets.Jet]], object]:
    def phi(xs):
        return jets.sin(xs[0]) * jets.sin(xs[1]) * amplitude
    return phi


# ---------------------------------------------------------------------------
# Catalog
# ---------------------------------------------------------------------------

_CAP = 0.3


def _zeros_oracle() -> Dict[str, object]:
    zero = np.zeros((4, 4))
    return {"R": 0.0, "Rc": zero, "U": zero, "V": zero, "B": zero, "D2_over_grad_f2": 0.0}


def _build_gaussian() -> SolitonModel:
    return SolitonModel(
        name="gaussian",
        description="Gaussian shrinker: flat R^4 with f = |x|^2/4",
        metric_components=_euclidean,
        potential_component=_gaussian_potential,
        chart_domain=((-3.0, 3.0),) * 4,
        reduction=SymmetryReduction(kind="radial", factor=2.0 * math.pi ** 2, dimension=4, axis=0),
        min_f=0.0,
        oracles=_zeros_oracle(),
    )


def _build_sphere4() -> SolitonModel:
    radius_sq = 6.0
    oracles = _zeros_oracle()
    oracles.update({"R": 2.0, "Rc": 0.5 * np.eye(4), "sectional": 1.0 / 6.0})
    return SolitonModel(
        name="sphere4",
        description="Round S^4 of radius sqrt(6) in a stereographic chart, f = 2",
        metric_components=_stereographic_sphere(radius_sq),
        potential_component=lambda xs: 2.0,
        chart_domain=((-2.0, 2.0),) * 4,
        reduction=SymmetryReduction(kind="homogeneous", factor=96.0 * math.pi ** 2),
        min_f=2.0,
        total_volume=(8.0 * math.pi ** 2 / 3.0) * radius_sq ** 2,
        compact=True,
        oracles=oracles,
    )


def _build_cylinder_s3xr() -> SolitonModel:
    return SolitonModel(
        name="cyl-s3xr",
        description="Round cylinder S^3(2) x R, coordinates (psi, theta, phi, x), f = 3/2 + x^2/4",
        metric_components=_three_sphere_line(4.0),
        potential_component=lambda xs: xs[3] * xs[3] * 0.25 + 1.5,
        chart_domain=((_CAP, math.pi - _CAP), (_CAP, math.pi - _CAP), (0.0, TWO_PI), (-3.0, 3.0)),
        reduction=SymmetryReduction(kind="line", factor=16.0 * math.pi ** 2, axis=3,
                                    base_point=(math.pi / 2, math.pi / 2, 0.0, 0.0)),
        min_f=1.5,
        oracles={
            "R": 1.5,
            "Rc": np.diag([0.5, 0.5, 0.5, 0.0]),
            "U": np.diag([-1.0, -1.0, -1.0, 3.0]) / 16.0,
            "V": np.diag([3.0, 3.0, 3.0, -9.0]) / 16.0,
            "B": np.zeros((4, 4)),
            "D2_over_grad_f2": 0.0,
        },
    )


def _build_cylinder_s2xr2() -> SolitonModel:
    return SolitonModel(
        name="cyl-s2xr2",
        description="Round cylinder S^2(sqrt 2) x R^2, coordinates (theta, phi, y1, y2), f = 1 + |y|^2/4",
        metric_components=_two_sphere_plane(2.0),
        potential_component=lambda xs: (xs[2] * xs[2] + xs[3] * xs[3]) * 0.25 + 1.0,
        chart_domain=((_CAP, math.pi - _CAP), (0.0, TWO_PI), (-3.0, 3.0), (-3.0, 3.0)),
        reduction=SymmetryReduction(kind="radial", factor=8.0 * math.pi * TWO_PI, dimension=2, axis=2,
                                    base_point=(math.pi / 2, 0.0, 0.0, 0.0)),
        min_f=1.0,
        oracles={
            "R": 1.0,
            "Rc": np.diag([0.5, 0.5, 0.0, 0.0]),
            "U": np.zeros((4, 4)),
            "V": np.diag([0.25, 0.25, -0.25, -0.25]),
            "B": np.diag([1.0, 1.0, -1.0, -1.0]) / 24.0,
            "D2_over_grad_f2": 1.0 / 12.0,
        },
    )


def _build_conformal_torus(amplitude: float) -> SolitonModel:
    return SolitonModel(
        name="conformal-torus",
        description=f"T^4 with g = exp(2 a sin x1 sin x2) delta, a = {amplitude}",
        metric_components=conformally_flat(conformal_bump(amplitude)),
        chart_domain=((0.0, TWO_PI),) * 4,
        reduction=SymmetryReduction(kind="periodic", active_axes=(0, 1)),
        compact=True,
        parameters={"a": amplitude},
    )


def _build_flat_torus() -> SolitonModel:
    oracles = _zeros_oracle()
    del oracles["D2_over_grad_f2"]
    return SolitonModel(
        name="flat-torus",
        description="Flat T^4 of side 2*pi",
        metric_components=_euclidean,
        chart_domain=((0.0, TWO_PI),) * 4,
        reduction=SymmetryReduction(kind="periodic", active_axes=()),
        total_volume=TWO_PI ** 4,
        compact=True,
        oracles=oracles,
    )


MODEL_NAMES = ["gaussian", "sphere4", "cyl-s3xr", "cyl-s2xr2", "conformal-torus", "flat-torus"]


def catalog_model(name: str, amplitude: Optional[float] = None) -> SolitonModel:
    """
    Build a catalog model by name.

    Args:
        name: one of MODEL_NAMES
        amplitude: conformal-torus amplitude a (defaults to CONFORMAL_TORUS_AMPLITUDE)

    Returns:
        SolitonModel
    """
    if name == "gaussian":
        return _build_gaussian()
    if name == "sphere4":
        return _build_sphere4()
    if name == "cyl-s3xr":
        return _build_cylinder_s3xr()
    if name == "cyl-s2xr2":
        return _build_cylinder_s2xr2()
    if name == "conformal-torus":
        return _build_conformal_torus(CONFORMAL_TORUS_AMPLITUDE if amplitude is None else amplitude)
    if name == "flat-torus":
        return _build_flat_torus()
    raise UnknownModelError(f"unknown model '{name}'; expected one of {', '.join(MODEL_NAMES)}")


def perturbed_model(model: SolitonModel, perturbation: ComponentFunction, t: float,
                    extra_axes: Sequence[int] = ()) -> SolitonModel:
    """Generic metric g + t h, with h given by jet component functions."""
    base = model.metric_components

    def components(xs):
        g = base(xs)
        h = perturbation(xs)
        return [[g[i][j] + h[i][j] * t for j in range(4)] for i in range(4)]

    axes = tuple(sorted(set(model.reduction.active_axes) | set(extra_axes)))
    return replace(
        model,
        name=f"{model.name}+perturbation",
        metric_components=components,
        potential_component=None,
        reduction=replace(model.reduction, active_axes=axes),
        total_volume=None,
        oracles={},
    )


def exact_oracle(model: SolitonModel, tensor_name: str):
    """Hand-derived orthonormal-frame value recorded for the model."""
    if tensor_name not in model.oracles:
        raise MissingOracleError(f"no oracle for '{tensor_name}' on model '{model.name}'")
    value = model.oracles[tensor_name]
    return value.copy() if isinstance(value, np.ndarray) else value


@dataclass
class SolitonResidualReport:
    model: str
    points: int
    soliton_equation: float
    normalization: float
    identity_a: float
    identity_b: float
    identity_c: float
    bochner: float

    def max_residual(self) -> float:
        return max(self.soliton_equation, self.normalization, self.identity_a,
                   self.identity_b, self.identity_c, self.bochner)


def _covector_norm(v: np.ndarray, inverse: np.ndarray) -> np.ndarray:
    return np.sqrt(np.abs(np.einsum("zi,zij,zj->z", v, inverse, v)))


def soliton_residuals(model: SolitonModel, points: np.ndarray) -> SolitonResidualReport:
    """
    Largest residual over the points of each soliton identity:
    Rc + nabla^2 f = rho g, R + |nabla f|^2 = f, (a) Rc(nabla f) = 1/2 nabla R,
    (b) Delta f = 4 rho - R, (c) nabla^2 f(nabla f) = rho nabla f - 1/2 nabla R, and Bochner.
    """
    if not model.is_soliton:
        raise NotASolitonError(f"model '{model.name}' is not a soliton")
    geom = model.geometry(points, derivative_order=1)
    cache, potential = geom.cache, geom.potential
    g, inverse = cache.metric, cache.inverse
    rho = model.rho
    grad_up = raised_gradient(potential, cache)

    equation = cache.ricci + potential.hessian - rho * g
    normalization = cache.scalar + np.einsum("zi,zi->z", potential.grad, grad_up) - potential.f
    identity_a = np.einsum("zij,zj->zi", cache.ricci, grad_up) - 0.5 * cache.grad_scalar
    identity_b = potential.laplacian - (4.0 * rho - cache.scalar)
    identity_c = (np.einsum("zij,zj->zi", potential.hessian, grad_up)
                  - rho * potential.grad + 0.5 * cache.grad_scalar)
    bochner = bochner_residual(cache, potential)

    return SolitonResidualReport(
        model=model.name,
        points=geom.size,
        soliton_equation=float(np.max(np.sqrt(tensor_norm_sq(equation, inverse)))),
        normalization=float(np.max(np.abs(normalization))),
        identity_a=float(np.max(_covector_norm(identity_a, inverse))),
        identity_b=float(np.max(np.abs(identity_b))),
        identity_c=float(np.max(_covector_norm(identity_c, inverse))),
        bochner=float(np.max(np.abs(bochner))),
    )
