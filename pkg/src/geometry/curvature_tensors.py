"""
Quadratic-curvature tensors of a four-dimensional metric.

U, V, Bach (three routes), Cotton, D, the Bach-like family alpha*U + beta*V,
their traces and the classification of (alpha, beta). All functions take a
GeometryCache (and a PotentialJet where the potential enters) and return
batched all-covariant arrays.
"""

import logging
import math
from dataclasses import dataclass
from enum import Enum
from typing import Callable, Dict, Optional

import numpy as np

from config import BACH_LINE_RTOL
from ..utils.errors import NotASolitonError, VerificationError
from .chart_calculus import GeometryCache, PotentialJet, metric_trace, raise_all, tensor_norm_sq

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ParameterPair:
    alpha: float
    beta: float

    @property
    def is_origin(self) -> bool:
        return self.alpha == 0.0 and self.beta == 0.0


class ParameterRegion(Enum):
    BACH_LINE = "BachLine"
    INSIDE_CONE = "InsideCone"
    OUTSIDE_CONE = "OutsideCone"
    ORIGIN = "Origin"


def _require_potential(potential: Optional[PotentialJet], what: str) -> PotentialJet:
    if potential is None:
        raise NotASolitonError(f"{what} is only defined on soliton models (no potential supplied)")
    return potential


def _scaled_metric(scale: np.ndarray, g: np.ndarray) -> np.ndarray:
    return scale[:, None, None] * g


def raised_gradient(potential: PotentialJet, cache: GeometryCache) -> np.ndarray:
    return np.einsum("zij,zj->zi", cache.inverse, potential.grad)


def ricci_norm_sq(cache: GeometryCache) -> np.ndarray:
    return tensor_norm_sq(cache.ricci, cache.inverse)


def weyl_norm_sq(cache: GeometryCache) -> np.ndarray:
    return tensor_norm_sq(cache.weyl, cache.inverse)


def riemann_ricci_action(cache: GeometryCache) -> np.ndarray:
    """R_ipjq R^pq."""
    return np.einsum("zipjq,zpq->zij", cache.riemann, raise_all(cache.ricci, cache.inverse))


def tensor_V(cache: GeometryCache) -> np.ndarray:
    """V_ij = -nabla_i nabla_j R + Delta R g_ij + R R_ij - 1/4 R^2 g_ij."""
    cache.require(2, "V tensor")
    R = cache.scalar
    hessian = 0.5 * (cache.hessian_scalar + np.swapaxes(cache.hessian_scalar, 1, 2))
    return (-hessian
            + _scaled_metric(cache.laplacian_scalar, cache.metric)
            + R[:, None, None] * cache.ricci
            - _scaled_metric(0.25 * R ** 2, cache.metric))


def tensor_U(cache: GeometryCache, route: str = "direct", potential: Optional[PotentialJet] = None,
             rho: float = 0.5) -> np.ndarray:
    """
    U_ij = 2 R_ipjq R^pq + Delta R_ij - 1/2 |Rc|^2 g_ij - R R_ij - 1/2 Delta R g_ij + 1/4 R^2 g_ij.

    Args:
        cache: geometry cache (order 2 for the direct route)
        route: "direct", or "on-soliton" which replaces 2 Rm*Rc + Delta Rc by
            2 rho Rc + nabla_{grad f} Rc (valid only on solitons)
        potential: required for the on-soliton route
        rho: soliton constant

    Returns:
        Symmetric 2-tensor batch
    """
    R = cache.scalar
    g = cache.metric
    tail = (-_scaled_metric(0.5 * ricci_norm_sq(cache), g)
            - R[:, None, None] * cache.ricci
            + _scaled_metric(0.25 * R ** 2, g))
    if route == "direct":
        cache.require(2, "U tensor")
        leading = 2.0 * riemann_ricci_action(cache) + cache.laplacian_ricci
        correction = -_scaled_metric(0.5 * cache.laplacian_scalar, g)
    elif route == "on-soliton":
        potential = _require_potential(potential, "the on-soliton U route")
        cache.require(1, "U tensor")
        grad_up = raised_gradient(potential, cache)
        drift = np.einsum("zijk,zk->zij", cache.nabla_ricci, grad_up)
        leading = 2.0 * rho * cache.ricci + drift
        # Delta_f R = 2 rho R - 2 |Rc|^2 on a soliton
        laplacian_R = (2.0 * rho * R - 2.0 * ricci_norm_sq(cache)
                       + np.einsum("zi,zi->z", cache.grad_scalar, grad_up))
        correction = -_scaled_metric(0.5 * laplacian_R, g)
    else:
        raise VerificationError(f"unknown U route '{route}'")
    result = leading + correction + tail
    return 0.5 * (result + np.swapaxes(result, 1, 2))


def cotton_tensor(cache: GeometryCache, route: str = "weyl") -> np.ndarray:
    """
    Cotton tensor in dimension four.

    route "weyl":  C_ijk = -2 nabla^l W_ijkl
    route "ricci": C_ijk = nabla_i R_jk - nabla_j R_ik - 1/6 (g_jk nabla_i R - g_ik nabla_j R)
    """
    cache.require(1, "Cotton tensor")
    if route == "weyl":
        return -2.0 * np.einsum("zlm,zijklm->zijk", cache.inverse, cache.nabla_weyl)
    if route == "ricci":
        nabla_ricci = np.einsum("zjki->zijk", cache.nabla_ricci)
        g = cache.metric
        grad_R = cache.grad_scalar
        return (nabla_ricci - np.swapaxes(nabla_ricci, 1, 2)
                - (np.einsum("zjk,zi->zijk", g, grad_R) - np.einsum("zik,zj->zijk", g, grad_R)) / 6.0)
    raise VerificationError(f"unknown Cotton route '{route}'")


def d_tensor(cache: GeometryCache, potential: Optional[PotentialJet], route: str = "conformal") -> np.ndarray:
    """
    D_ijk, the Cotton tensor of the conformally rescaled metric.

    route "conformal":        D_ijk = C_ijk + W_ijkl nabla^l f
    route "soliton-formula":  D_ijk = 1/2 (R_jk f_i - R_ik f_j) + 1/12 (g_jk R_i - g_ik R_j)
                                      - 1/6 R (g_jk f_i - g_ik f_j)
    """
    potential = _require_potential(potential, "the D tensor")
    if route == "conformal":
        grad_up = raised_gradient(potential, cache)
        return cotton_tensor(cache) + np.einsum("zijkl,zl->zijk", cache.weyl, grad_up)
    if route == "soliton-formula":
        cache.require(1, "D tensor")
        g = cache.metric
        f_i = potential.grad
        R = cache.scalar
        ric_f = np.einsum("zjk,zi->zijk", cache.ricci, f_i)
        g_R = np.einsum("zjk,zi->zijk", g, cache.grad_scalar)
        g_f = np.einsum("zjk,zi->zijk", g, f_i)
        return (0.5 * (ric_f - np.swapaxes(ric_f, 1, 2))
                + (g_R - np.swapaxes(g_R, 1, 2)) / 12.0
                - R[:, None, None, None] * (g_f - np.swapaxes(g_f, 1, 2)) / 6.0)
    raise VerificationError(f"unknown D route '{route}'")


def nabla_d_soliton(cache: GeometryCache, potential: PotentialJet) -> np.ndarray:
    """nabla_m D_ijk from differentiating the soliton formula, layout [z, i, j, k, m]."""
    cache.require(2, "nabla D")
    g = cache.metric
    f_i = potential.grad
    f_im = potential.hessian
    R = cache.scalar
    R_m = cache.grad_scalar
    R_im = cache.hessian_scalar

    ricci_part = (np.einsum("zjkm,zi->zijkm", cache.nabla_ricci, f_i)
                  + np.einsum("zjk,zim->zijkm", cache.ricci, f_im))
    scalar_part = np.einsum("zjk,zim->zijkm", g, R_im)
    potential_part = (np.einsum("zm,zjk,zi->zijkm", R_m, g, f_i)
                      + R[:, None, None, None, None] * np.einsum("zjk,zim->zijkm", g, f_im))
    return (0.5 * (ricci_part - np.swapaxes(ricci_part, 1, 2))
            + (scalar_part - np.swapaxes(scalar_part, 1, 2)) / 12.0
            - (potential_part - np.swapaxes(potential_part, 1, 2)) / 6.0)


def bach_tensor(cache: GeometryCache, route: str = "weyl", potential: Optional[PotentialJet] = None) -> np.ndarray:
    """
    Bach tensor in dimension four.

    route "weyl": B_ij = nabla^k nabla^l W_ikjl + 1/2 R^kl W_ikjl
    route "uv":   B_ij = 1/2 U_ij + 1/6 V_ij
    route "d":    B_ij = -1/2 (nabla^k D_ikj + 1/2 C_jli nabla^l f), soliton models only
    """
    if route == "weyl":
        cache.require(2, "Bach tensor")
        inverse = cache.inverse
        divergence = np.einsum("zka,zlb,zikjlba->zij", inverse, inverse, cache.nabla2_weyl)
        curvature = 0.5 * np.einsum("zkl,zikjl->zij", raise_all(cache.ricci, inverse), cache.weyl)
        return divergence + curvature
    if route == "uv":
        return 0.5 * tensor_U(cache) + tensor_V(cache) / 6.0
    if route == "d":
        potential = _require_potential(potential, "the D route of the Bach tensor")
        nabla_d = nabla_d_soliton(cache, potential)
        divergence = np.einsum("zkm,zikjm->zij", cache.inverse, nabla_d)
        cotton = cotton_tensor(cache)
        coupling = np.einsum("zjli,zl->zij", cotton, raised_gradient(potential, cache))
        return -0.5 * (divergence + 0.5 * coupling)
    raise VerificationError(f"unknown Bach route '{route}'")


def bach_like(params: ParameterPair, cache: GeometryCache) -> np.ndarray:
    """alpha U + beta V."""
    if params.is_origin:
        raise VerificationError("Bach-like tensor needs (alpha, beta) != (0, 0)")
    return params.alpha * tensor_U(cache) + params.beta * tensor_V(cache)


def traces(cache: GeometryCache) -> Dict[str, np.ndarray]:
    """Metric traces of U, V and B next to Delta R (trU = -Delta R, trV = 3 Delta R, trB = 0)."""
    U = tensor_U(cache)
    V = tensor_V(cache)
    return {
        "trU": metric_trace(U, cache.inverse),
        "trV": metric_trace(V, cache.inverse),
        "trB": metric_trace(0.5 * U + V / 6.0, cache.inverse),
        "laplacian_R": cache.laplacian_scalar,
    }


def bochner_residual(cache: GeometryCache, potential: PotentialJet) -> np.ndarray:
    """2|Rc|^2 - R - <nabla R, nabla f>, zero on solitons with Delta R = 0."""
    cache.require(1, "Bochner identity")
    drift = np.einsum("zi,zi->z", cache.grad_scalar, raised_gradient(potential, cache))
    return 2.0 * ricci_norm_sq(cache) - cache.scalar - drift


def classify_parameters(params: ParameterPair) -> ParameterRegion:
    """
    Place (alpha, beta) relative to the Bach line and the cone
    {alpha >= 0, beta > alpha/3} U {alpha <= 0, beta < alpha/3}.

    The Bach line is tested before cone membership.
    """
    alpha, beta = params.alpha, params.beta
    if params.is_origin:
        return ParameterRegion.ORIGIN
    if math.isclose(alpha, 3.0 * beta, rel_tol=BACH_LINE_RTOL, abs_tol=0.0):
        return ParameterRegion.BACH_LINE
    if (alpha >= 0.0 and beta > alpha / 3.0) or (alpha <= 0.0 and beta < alpha / 3.0):
        return ParameterRegion.INSIDE_CONE
    return ParameterRegion.OUTSIDE_CONE


def numeric_divergence(evaluate: Callable[[np.ndarray], np.ndarray], points: np.ndarray,
                       cache: GeometryCache, step: float) -> np.ndarray:
    """
    div T_j = g^ik nabla_k T_ij for a symmetric tensor field known only pointwise.

    Partials come from fourth-order central differences of `evaluate`; the
    connection terms use the cache at `points`.
    """
    points = np.atleast_2d(np.asarray(points, dtype=float))
    T = evaluate(points)
    partial = np.zeros(T.shape + (4,))
    for axis in range(4):
        shift = np.zeros(4)
        shift[axis] = step
        partial[..., axis] = (-evaluate(points + 2 * shift) + 8.0 * evaluate(points + shift)
                              - 8.0 * evaluate(points - shift) + evaluate(points - 2 * shift)) / (12.0 * step)
    gamma = cache.christoffel
    nabla = (partial
             - np.einsum("zpj,zpki->zijk", T, gamma)
             - np.einsum("zip,zpkj->zijk", T, gamma))
    return np.einsum("zik,zijk->zj", cache.inverse, nabla)
