"""
Pointwise checks of the tensor engine at sampled chart points.

Each check reduces to the largest residual over the sample and a verdict
against a tolerance scaled by the curvature size at the sample.
"""

import logging
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional

import numpy as np

from config import (
    DIVERGENCE_FD_STEP,
    DIVERGENCE_TOLERANCE,
    POINTWISE_TOLERANCE,
    RANDOM_SEED,
    SAMPLE_POINTS,
    SOLITON_RESIDUAL_TOLERANCE,
)
from ..geometry.chart_calculus import (
    covariant_derivative,
    orthonormal_components,
    sectional_curvature,
    tensor_norm_sq,
)
from ..geometry.curvature_tensors import (
    bach_tensor,
    cotton_tensor,
    d_tensor,
    numeric_divergence,
    tensor_U,
    tensor_V,
    traces,
    weyl_norm_sq,
)
from ..models.soliton_catalog import PointGeometry, SolitonModel, soliton_residuals
from ..utils.errors import MissingOracleError, VerificationError

logger = logging.getLogger(__name__)

TENSOR_NAMES = ["R", "Rc", "Rm", "W", "U", "V", "B", "C", "D", "traces"]
DIVERGENCE_SAMPLE = 20


@dataclass
class PointwiseCheck:
    check: str
    model: str
    points: int
    max_residual: float
    tolerance: float
    verdict: str
    details: Dict[str, float] = field(default_factory=dict)


def _max_norm(T: np.ndarray) -> float:
    return float(np.max(np.abs(T))) if T.size else 0.0


def _check(name: str, model: SolitonModel, geom: PointGeometry, residual: float, tolerance: float,
           details: Optional[Dict[str, float]] = None) -> PointwiseCheck:
    ok = residual <= tolerance
    result = PointwiseCheck(check=name, model=model.name, points=geom.size, max_residual=residual,
                            tolerance=tolerance, verdict="pass" if ok else "fail", details=details or {})
    if not ok:
        logger.error(f"{name} on {model.name}: residual {residual:.3e} exceeds {tolerance:.1e}")
    return result


def _scale(geom: PointGeometry) -> float:
    return 1.0 + float(np.max(np.abs(geom.cache.riemann)))


# ---------------------------------------------------------------------------
# Individual checks
# ---------------------------------------------------------------------------

def riemann_symmetries(model: SolitonModel, geom: PointGeometry) -> PointwiseCheck:
    Rm = geom.cache.riemann
    details = {
        "antisymmetry_first_pair": _max_norm(Rm + np.swapaxes(Rm, 1, 2)),
        "antisymmetry_second_pair": _max_norm(Rm + np.swapaxes(Rm, 3, 4)),
        "pair_symmetry": _max_norm(Rm - np.einsum("zijkl->zklij", Rm)),
        "first_bianchi": _max_norm(Rm + np.einsum("ziklj->zijkl", Rm) + np.einsum("ziljk->zijkl", Rm)),
    }
    return _check("riemann_symmetries", model, geom, max(details.values()), POINTWISE_TOLERANCE * _scale(geom), details)


def contracted_bianchi(model: SolitonModel, geom: PointGeometry) -> PointwiseCheck:
    """(div Rc)_j = 1/2 nabla_j R."""
    cache = geom.cache
    divergence = np.einsum("zim,zijm->zj", cache.inverse, cache.nabla_ricci)
    residual = _max_norm(divergence - 0.5 * cache.grad_scalar)
    return _check("contracted_bianchi", model, geom, residual, POINTWISE_TOLERANCE * _scale(geom))


def weyl_trace_free(model: SolitonModel, geom: PointGeometry) -> PointwiseCheck:
    cache = geom.cache
    details = {
        "trace_13": _max_norm(np.einsum("zik,zijkl->zjl", cache.inverse, cache.weyl)),
        "trace_14": _max_norm(np.einsum("zil,zijkl->zjk", cache.inverse, cache.weyl)),
        "trace_12": _max_norm(np.einsum("zij,zijkl->zkl", cache.inverse, cache.weyl)),
    }
    return _check("weyl_trace_free", model, geom, max(details.values()), POINTWISE_TOLERANCE * _scale(geom), details)


def metric_compatibility(model: SolitonModel, geom: PointGeometry) -> PointwiseCheck:
    jet = model.metric_jet(geom.points, order=1)
    nabla_g = covariant_derivative([jet.g, jet.dg], geom.cache, 1)
    return _check("metric_compatibility", model, geom, _max_norm(nabla_g), POINTWISE_TOLERANCE * _scale(geom))


def _oracle_value(model: SolitonModel, name: str, geom: PointGeometry):
    cache = geom.cache
    g = cache.metric
    if name == "R":
        return cache.scalar
    if name == "Rc":
        return orthonormal_components(cache.ricci, g)
    if name == "U":
        return orthonormal_components(tensor_U(cache), g)
    if name == "V":
        return orthonormal_components(tensor_V(cache), g)
    if name == "B":
        return orthonormal_components(bach_tensor(cache), g)
    if name == "D2_over_grad_f2":
        D = d_tensor(cache, geom.potential, route="soliton-formula")
        grad_sq = np.einsum("zi,zij,zj->z", geom.potential.grad, cache.inverse, geom.potential.grad)
        mask = grad_sq > 1e-6
        return tensor_norm_sq(D, cache.inverse)[mask] / grad_sq[mask]
    if name == "sectional":
        return np.stack([sectional_curvature(cache, i, j) for i in range(4) for j in range(i + 1, 4)], axis=1)
    raise MissingOracleError(f"no evaluator for oracle '{name}'")


def oracle_agreement(model: SolitonModel, geom: PointGeometry) -> PointwiseCheck:
    """Engine values against the hand-derived orthonormal-frame oracles of the model."""
    details = {}
    for name, expected in model.oracles.items():
        actual = _oracle_value(model, name, geom)
        details[name] = _max_norm(np.asarray(actual) - np.asarray(expected))
    residual = max(details.values(), default=0.0)
    return _check("oracles", model, geom, residual, POINTWISE_TOLERANCE * _scale(geom), details)


def route_agreement(model: SolitonModel, geom: PointGeometry) -> PointwiseCheck:
    """Independent constructions of the same tensor agree."""
    cache, potential = geom.cache, geom.potential
    bach = bach_tensor(cache, route="weyl")
    details = {
        "bach_weyl_vs_uv": _max_norm(bach - bach_tensor(cache, route="uv")),
        "cotton_weyl_vs_ricci": _max_norm(cotton_tensor(cache, route="weyl") - cotton_tensor(cache, route="ricci")),
    }
    if potential is not None:
        details["bach_weyl_vs_d"] = _max_norm(bach - bach_tensor(cache, route="d", potential=potential))
        details["d_conformal_vs_formula"] = _max_norm(
            d_tensor(cache, potential, route="conformal") - d_tensor(cache, potential, route="soliton-formula"))
        details["u_direct_vs_on_soliton"] = _max_norm(
            tensor_U(cache) - tensor_U(cache, route="on-soliton", potential=potential, rho=geom.rho))
    return _check("routes", model, geom, max(details.values()), POINTWISE_TOLERANCE * _scale(geom), details)


def trace_identities(model: SolitonModel, geom: PointGeometry) -> PointwiseCheck:
    """tr U = -Delta R, tr V = 3 Delta R, tr B = 0."""
    t = traces(geom.cache)
    details = {
        "trU": _max_norm(t["trU"] + t["laplacian_R"]),
        "trV": _max_norm(t["trV"] - 3.0 * t["laplacian_R"]),
        "trB": _max_norm(t["trB"]),
    }
    return _check("traces", model, geom, max(details.values()), POINTWISE_TOLERANCE * _scale(geom), details)


def soliton_equations(model: SolitonModel, geom: PointGeometry) -> PointwiseCheck:
    report = soliton_residuals(model, geom.points)
    details = {
        "soliton_equation": report.soliton_equation,
        "normalization": report.normalization,
        "identity_a": report.identity_a,
        "identity_b": report.identity_b,
        "identity_c": report.identity_c,
        "bochner": report.bochner,
    }
    return _check("soliton_residuals", model, geom, report.max_residual(),
                  SOLITON_RESIDUAL_TOLERANCE * _scale(geom), details)


def divergence_free(model: SolitonModel, geom: PointGeometry, step: float = DIVERGENCE_FD_STEP) -> PointwiseCheck:
    """div U = 0 and div V = 0 by fourth-order differences of the engine output."""
    points = geom.points[:DIVERGENCE_SAMPLE]
    cache = model.cache(points, derivative_order=2)

    def evaluator(tensor: Callable) -> Callable[[np.ndarray], np.ndarray]:
        return lambda shifted: tensor(model.cache(shifted, derivative_order=2))

    details = {
        "div_U": _max_norm(numeric_divergence(evaluator(tensor_U), points, cache, step)),
        "div_V": _max_norm(numeric_divergence(evaluator(tensor_V), points, cache, step)),
    }
    return _check("divergence_free", model, geom, max(details.values()), DIVERGENCE_TOLERANCE, details)


# ---------------------------------------------------------------------------
# Suite and single-point evaluation
# ---------------------------------------------------------------------------

def run_pointwise_suite(model: SolitonModel, sample_count: int = SAMPLE_POINTS,
                        seed: int = RANDOM_SEED, divergence: Optional[bool] = None) -> List[PointwiseCheck]:
    """
    All pointwise checks that apply to the model at seeded random chart points.

    Args:
        model: catalog or generic model
        sample_count: number of chart points
        seed: random seed
        divergence: run the finite-difference divergence check (default: torus models only)

    Returns:
        List of PointwiseCheck in a fixed order
    """
    rng = np.random.default_rng(seed)
    geom = model.geometry(model.sample_points(sample_count, rng), derivative_order=2)
    checks = [
        riemann_symmetries(model, geom),
        contracted_bianchi(model, geom),
        weyl_trace_free(model, geom),
        metric_compatibility(model, geom),
        route_agreement(model, geom),
        trace_identities(model, geom),
    ]
    if model.oracles:
        checks.append(oracle_agreement(model, geom))
    if model.is_soliton:
        checks.append(soliton_equations(model, geom))
    if divergence is None:
        divergence = model.reduction.kind == "periodic"
    if divergence:
        checks.append(divergence_free(model, geom))
    passed = sum(1 for check in checks if check.verdict == "pass")
    logger.info(f"Pointwise suite on {model.name}: {passed}/{len(checks)} checks passed")
    return checks


def evaluate_at(model: SolitonModel, tensor: str, point, frame: str = "orthonormal") -> Dict[str, object]:
    """
    One tensor at one chart point.

    Args:
        model: model to evaluate
        tensor: one of TENSOR_NAMES
        point: four chart coordinates
        frame: "orthonormal" (Cholesky frame of g) or "coordinate"

    Returns:
        {"tensor", "model", "point", "frame", "value"} with nested lists for arrays
    """
    if tensor not in TENSOR_NAMES:
        raise VerificationError(f"unknown tensor '{tensor}'; expected one of {', '.join(TENSOR_NAMES)}")
    if frame not in ("orthonormal", "coordinate"):
        raise VerificationError(f"unknown frame '{frame}'")
    point = np.asarray(point, dtype=float).reshape(1, 4)
    geom = model.geometry(point, derivative_order=2)
    cache = geom.cache

    if tensor == "R":
        value = float(cache.scalar[0])
    elif tensor == "traces":
        value = {name: float(v[0]) for name, v in traces(cache).items()}
        value["|W|^2"] = float(weyl_norm_sq(cache)[0])
    else:
        builders = {
            "Rc": lambda: cache.ricci,
            "Rm": lambda: cache.riemann,
            "W": lambda: cache.weyl,
            "U": lambda: tensor_U(cache),
            "V": lambda: tensor_V(cache),
            "B": lambda: bach_tensor(cache),
            "C": lambda: cotton_tensor(cache),
            "D": lambda: d_tensor(cache, geom.potential, route="soliton-formula"),
        }
        array = builders[tensor]()
        if frame == "orthonormal":
            array = orthonormal_components(array, cache.metric)
        value = array[0].tolist()
    return {"tensor": tensor, "model": model.name, "point": point[0].tolist(), "frame": frame, "value": value}
