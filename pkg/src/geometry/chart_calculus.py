"""
Pointwise differential geometry on a single four-dimensional chart.

Everything here is vectorized over a batch of chart points: tensors carry a
leading batch axis z and are stored all-covariant. Partial and covariant
derivative indices are appended after the tensor slots, in the order they are
taken, so (nabla^2 T)[..., m, n] = nabla_n nabla_m T.

Sign convention: R_{ijkl} = g_{ia}(d_k Gamma^a_{lj} - d_l Gamma^a_{kj} + ...),
which gives R_{ijij} > 0 on round spheres and R_{jl} = g^{ik} R_{ijkl}.
"""

import logging
from dataclasses import dataclass
from itertools import combinations
from typing import Callable, List, Optional, Sequence, Tuple

import numpy as np

from ..utils.errors import InsufficientJetOrderError, NotPositiveDefiniteError
from ..utils.jets import DIMENSION, Jet, as_jet

logger = logging.getLogger(__name__)

ComponentFunction = Callable[[Sequence[Jet]], Sequence[Sequence[object]]]

_DERIV_LETTERS = "ABCDEF"
_SLOT_LETTERS = "ijklqrstuv"


@dataclass
class MetricJet:
    """
    Metric components and their partials at a batch of chart points.

    Attributes:
        g: (N, 4, 4) metric components
        partials: list [dg, d2g, ...]; entry m-1 has shape (N, 4, 4) + (4,) * m
    """
    g: np.ndarray
    partials: List[np.ndarray]

    @property
    def order(self) -> int:
        return len(self.partials)

    @property
    def dg(self) -> Optional[np.ndarray]:
        return self.partials[0] if self.order >= 1 else None

    @property
    def d2g(self) -> Optional[np.ndarray]:
        return self.partials[1] if self.order >= 2 else None

    @property
    def d3g(self) -> Optional[np.ndarray]:
        return self.partials[2] if self.order >= 3 else None

    @property
    def d4g(self) -> Optional[np.ndarray]:
        return self.partials[3] if self.order >= 4 else None

    def derivative_list(self) -> List[np.ndarray]:
        return [self.g] + list(self.partials)


@dataclass
class PotentialJet:
    """Potential f and its covariant derivatives at a batch of points."""
    f: np.ndarray
    grad: np.ndarray
    hessian: np.ndarray
    third: Optional[np.ndarray]
    laplacian: np.ndarray


@dataclass
class GeometryCache:
    """
    Curvature quantities at a batch of points.

    derivative_order 0 fills the curvature fields, 1 adds first covariant
    derivatives and 2 adds second covariant derivatives and Laplacians.
    """
    metric: np.ndarray
    inverse: np.ndarray
    volume_density: np.ndarray
    christoffel: np.ndarray
    christoffel_partials: List[np.ndarray]
    riemann: np.ndarray
    ricci: np.ndarray
    scalar: np.ndarray
    schouten: np.ndarray
    weyl: np.ndarray
    derivative_order: int
    nabla_riemann: Optional[np.ndarray] = None
    nabla_ricci: Optional[np.ndarray] = None
    grad_scalar: Optional[np.ndarray] = None
    nabla_weyl: Optional[np.ndarray] = None
    nabla2_riemann: Optional[np.ndarray] = None
    nabla2_ricci: Optional[np.ndarray] = None
    hessian_scalar: Optional[np.ndarray] = None
    laplacian_ricci: Optional[np.ndarray] = None
    laplacian_scalar: Optional[np.ndarray] = None
    nabla2_weyl: Optional[np.ndarray] = None

    @property
    def size(self) -> int:
        return self.metric.shape[0]

    def require(self, order: int, what: str = "curvature"):
        if self.derivative_order < order:
            raise InsufficientJetOrderError(order + 2, self.derivative_order + 2, what=f"metric ({what})")


# ---------------------------------------------------------------------------
# Jet construction
# ---------------------------------------------------------------------------

def _component_partials(components: Sequence[Sequence[object]], size: int, order: int,
                        shape: Tuple[int, ...]) -> List[np.ndarray]:
    jets = np.empty(shape, dtype=object)
    flat = np.asarray(components, dtype=object).reshape(shape)
    for index in np.ndindex(*shape):
        jets[index] = as_jet(flat[index], size, order)
    result = []
    for m in range(order + 1):
        block = np.stack([jets[index].partials(m) for index in np.ndindex(*shape)], axis=1)
        result.append(block.reshape((size,) + shape + (DIMENSION,) * m))
    return result


def evaluate_metric_jet(components: ComponentFunction, points: np.ndarray, order: int) -> MetricJet:
    """
    Evaluate user-supplied metric component functions with jet arithmetic.

    Args:
        components: callable mapping coordinate jets (x0..x3) to a 4x4 nested
            sequence of jets or numbers
        points: (N, 4) chart points
        order: number of metric derivatives to carry

    Returns:
        MetricJet validated for symmetry and positive definiteness
    """
    points = np.atleast_2d(np.asarray(points, dtype=float))
    xs = Jet.variables(points, order)
    blocks = _component_partials(components(xs), points.shape[0], order, (DIMENSION, DIMENSION))
    jet = MetricJet(g=blocks[0], partials=blocks[1:])
    validate_metric_jet(jet)
    return jet


def evaluate_tensor_field(components: Callable[[Sequence[Jet]], object], points: np.ndarray,
                          valence: int, order: int) -> List[np.ndarray]:
    """Partials [T, dT, ...] of an all-covariant tensor field given by jet component functions."""
    points = np.atleast_2d(np.asarray(points, dtype=float))
    xs = Jet.variables(points, order)
    if valence == 0:
        value = as_jet(components(xs), points.shape[0], order)
        return [value.partials(m) for m in range(order + 1)]
    return _component_partials(components(xs), points.shape[0], order, (DIMENSION,) * valence)


def validate_metric_jet(jet: MetricJet):
    if not np.allclose(jet.g, np.swapaxes(jet.g, 1, 2), rtol=0.0, atol=1e-12):
        raise NotPositiveDefiniteError("metric components are not symmetric")
    eigenvalues = np.linalg.eigvalsh(jet.g)
    if np.any(eigenvalues <= 0.0):
        worst = float(eigenvalues.min())
        raise NotPositiveDefiniteError(f"metric is not positive definite (smallest eigenvalue {worst:.3e})")


def finite_difference_jet(components: ComponentFunction, points: np.ndarray, step: float = 1e-4) -> MetricJet:
    """
    Central-difference metric partials to order 2.

    Only used as an independent cross-check of the jet path.
    """
    points = np.atleast_2d(np.asarray(points, dtype=float))

    def values(shifted):
        return evaluate_metric_jet(components, shifted, order=0).g

    g = values(points)
    n = points.shape[0]
    dg = np.zeros((n, DIMENSION, DIMENSION, DIMENSION))
    d2g = np.zeros((n, DIMENSION, DIMENSION, DIMENSION, DIMENSION))
    eye = np.eye(DIMENSION) * step
    for a in range(DIMENSION):
        dg[..., a] = (values(points + eye[a]) - values(points - eye[a])) / (2.0 * step)
        for b in range(DIMENSION):
            d2g[..., a, b] = (values(points + eye[a] + eye[b]) - values(points + eye[a] - eye[b])
                              - values(points - eye[a] + eye[b]) + values(points - eye[a] - eye[b])) / (4.0 * step ** 2)
    return MetricJet(g=g, partials=[dg, d2g])


# ---------------------------------------------------------------------------
# Index helpers
# ---------------------------------------------------------------------------

def _leibniz(a_list: Sequence[np.ndarray], b_list: Sequence[np.ndarray], a_sub: str, b_sub: str,
             out_sub: str, order: int, skip_undifferentiated_a: bool = False) -> np.ndarray:
    """order-fold partial of a bilinear contraction a * b, derivative letters appended."""
    letters = _DERIV_LETTERS[:order]
    total = None
    for size in range(order + 1):
        if skip_undifferentiated_a and size == 0:
            continue
        for subset in combinations(range(order), size):
            sa = "".join(letters[i] for i in subset)
            sb = "".join(letters[i] for i in range(order) if i not in subset)
            term = np.einsum(f"{a_sub}{sa},{b_sub}{sb}->{out_sub}{letters}", a_list[size], b_list[order - size])
            total = term if total is None else total + term
    return total


def raise_all(T: np.ndarray, inverse: np.ndarray) -> np.ndarray:
    """Raise every tensor slot of an all-covariant batch tensor."""
    result = T
    for slot in range(1, T.ndim):
        moved = np.moveaxis(result, slot, -1)
        moved = np.einsum("z...p,zpq->z...q", moved, inverse)
        result = np.moveaxis(moved, -1, slot)
    return result


def tensor_norm_sq(T: np.ndarray, inverse: np.ndarray) -> np.ndarray:
    """Full metric contraction |T|^2 at each point."""
    if T.ndim == 1:
        return T * T
    return np.sum((T * raise_all(T, inverse)).reshape(T.shape[0], -1), axis=1)


def inner(A: np.ndarray, B: np.ndarray, inverse: np.ndarray) -> np.ndarray:
    return np.sum((A * raise_all(B, inverse)).reshape(A.shape[0], -1), axis=1)


def metric_trace(T: np.ndarray, inverse: np.ndarray) -> np.ndarray:
    return np.einsum("zij,zij->z", inverse, T)


def orthonormal_components(T: np.ndarray, g: np.ndarray) -> np.ndarray:
    """Components of a covariant tensor in the Cholesky orthonormal frame of g."""
    frame = np.linalg.inv(np.linalg.cholesky(g))
    result = T
    for slot in range(1, T.ndim):
        moved = np.moveaxis(result, slot, -1)
        moved = np.einsum("z...i,zai->z...a", moved, frame)
        result = np.moveaxis(moved, -1, slot)
    return result


def sectional_curvature(cache: GeometryCache, i: int, j: int) -> np.ndarray:
    g = cache.metric
    area = g[:, i, i] * g[:, j, j] - g[:, i, j] ** 2
    return cache.riemann[:, i, j, i, j] / area


# ---------------------------------------------------------------------------
# Covariant derivatives
# ---------------------------------------------------------------------------

def _with_slot(letters: str, slot: int, new: str) -> str:
    return letters[:slot] + new + letters[slot + 1:]


def _covariant(partials: Sequence[np.ndarray], gamma: np.ndarray, gamma_partials: Sequence[np.ndarray],
               order: int) -> np.ndarray:
    """
    Levi-Civita covariant derivative of an all-covariant field.

    Args:
        partials: [T, dT, d2T] with partial indices appended
        gamma: Christoffel symbols Gamma^k_{ij} as (N, k, i, j)
        gamma_partials: [dGamma] with the partial index appended
        order: 1 or 2

    Returns:
        nabla T (order 1) or nabla nabla T (order 2)
    """
    if len(partials) < order + 1:
        raise InsufficientJetOrderError(order, len(partials) - 1, what="field")
    T = partials[0]
    valence = T.ndim - 1
    slots = _SLOT_LETTERS[:valence]

    nabla = partials[1].copy()
    for s in range(valence):
        nabla -= np.einsum(f"z{_with_slot(slots, s, 'p')},zpm{slots[s]}->z{slots}m", T, gamma)
    if order == 1:
        return nabla

    d_nabla = partials[2].copy()
    for s in range(valence):
        d_nabla -= np.einsum(f"z{_with_slot(slots, s, 'p')},zpm{slots[s]}n->z{slots}mn", T, gamma_partials[0])
        d_nabla -= np.einsum(f"z{_with_slot(slots, s, 'p')}n,zpm{slots[s]}->z{slots}mn", partials[1], gamma)
    extended = slots + "m"
    for s in range(valence + 1):
        d_nabla -= np.einsum(f"z{_with_slot(extended, s, 'p')},zpn{extended[s]}->z{extended}n", nabla, gamma)
    return d_nabla


def covariant_derivative(partials: Sequence[np.ndarray], cache: GeometryCache, order: int) -> np.ndarray:
    """
    Covariant derivative of a tensor field given by its partials at the cache's points.

    Args:
        partials: [T, dT, ...] (see evaluate_tensor_field)
        cache: geometry at the same points
        order: 1 or 2

    Returns:
        Tensor of valence v + order
    """
    if order not in (1, 2):
        raise ValueError(f"covariant derivative order must be 1 or 2, got {order}")
    return _covariant(partials, cache.christoffel, cache.christoffel_partials, order)


# ---------------------------------------------------------------------------
# Curvature
# ---------------------------------------------------------------------------

def _christoffel_first_kind(dg_block: np.ndarray) -> np.ndarray:
    """Gamma_{kij} = 1/2 (d_i g_jk + d_j g_ik - d_k g_ij), extra partials carried along."""
    return 0.5 * (np.einsum("zjki...->zkij...", dg_block)
                  + np.einsum("zikj...->zkij...", dg_block)
                  - np.einsum("zijk...->zkij...", dg_block))


def _schouten_product(g: np.ndarray, S: np.ndarray) -> np.ndarray:
    """g_ik S_jl + g_jl S_ik - g_il S_jk - g_jk S_il; extra slots of S trail."""
    return (np.einsum("zik,zjl...->zijkl...", g, S)
            + np.einsum("zjl,zik...->zijkl...", g, S)
            - np.einsum("zil,zjk...->zijkl...", g, S)
            - np.einsum("zjk,zil...->zijkl...", g, S))


def geometry_cache(jet: MetricJet, derivative_order: int = 2) -> GeometryCache:
    """
    Build all curvature quantities from a metric jet.

    Args:
        jet: metric jet with at least derivative_order + 2 partials
        derivative_order: 0, 1 or 2 covariant derivatives of curvature

    Returns:
        Populated GeometryCache
    """
    needed = derivative_order + 2
    if jet.order < needed:
        raise InsufficientJetOrderError(needed, jet.order)
    validate_metric_jet(jet)

    gd = jet.derivative_list()
    g = gd[0]
    inverse = np.linalg.inv(g)
    inverse = 0.5 * (inverse + np.swapaxes(inverse, 1, 2))

    first_kind = [_christoffel_first_kind(gd[m + 1]) for m in range(needed)]
    second_kind = [np.einsum("zkl,zlij->zkij", inverse, first_kind[0])]
    for m in range(1, needed):
        rest = _leibniz(gd, second_kind + [None], "zlm", "zmij", "zlij", m, skip_undifferentiated_a=True)
        second_kind.append(np.einsum(f"zkl,zlij{_DERIV_LETTERS[:m]}->zkij{_DERIV_LETTERS[:m]}",
                                     inverse, first_kind[m] - rest))

    def riemann_partial(m: int) -> np.ndarray:
        letters = _DERIV_LETTERS[:m]
        shifted = first_kind[1:]
        value = (np.einsum(f"zrvsm{letters}->zrsmv{letters}", shifted[m])
                 - np.einsum(f"zrmsv{letters}->zrsmv{letters}", shifted[m]))
        value -= _leibniz(first_kind, second_kind, "zamr", "zavs", "zrsmv", m)
        value += _leibniz(first_kind, second_kind, "zavr", "zams", "zrsmv", m)
        return value

    riemann_partials = [riemann_partial(m) for m in range(derivative_order + 1)]
    riemann = riemann_partials[0]
    ricci = np.einsum("zik,zijkl->zjl", inverse, riemann)
    ricci = 0.5 * (ricci + np.swapaxes(ricci, 1, 2))
    scalar = metric_trace(ricci, inverse)
    schouten = 0.5 * (ricci - (scalar / 6.0)[:, None, None] * g)
    weyl = riemann - _schouten_product(g, schouten)

    cache = GeometryCache(
        metric=g,
        inverse=inverse,
        volume_density=np.sqrt(np.linalg.det(g)),
        christoffel=second_kind[0],
        christoffel_partials=second_kind[1:],
        riemann=riemann,
        ricci=ricci,
        scalar=scalar,
        schouten=schouten,
        weyl=weyl,
        derivative_order=derivative_order,
    )

    if derivative_order >= 1:
        nabla_riemann = _covariant(riemann_partials, cache.christoffel, cache.christoffel_partials, 1)
        cache.nabla_riemann = nabla_riemann
        cache.nabla_ricci = np.einsum("zik,zijklm->zjlm", inverse, nabla_riemann)
        cache.grad_scalar = np.einsum("zjl,zjlm->zm", inverse, cache.nabla_ricci)
        nabla_schouten = 0.5 * (cache.nabla_ricci - np.einsum("zm,zij->zijm", cache.grad_scalar, g) / 6.0)
        cache.nabla_weyl = nabla_riemann - _schouten_product(g, nabla_schouten)

    if derivative_order >= 2:
        nabla2_riemann = _covariant(riemann_partials, cache.christoffel, cache.christoffel_partials, 2)
        cache.nabla2_riemann = nabla2_riemann
        cache.nabla2_ricci = np.einsum("zik,zijklmn->zjlmn", inverse, nabla2_riemann)
        cache.hessian_scalar = np.einsum("zjl,zjlmn->zmn", inverse, cache.nabla2_ricci)
        cache.laplacian_ricci = np.einsum("zmn,zijmn->zij", inverse, cache.nabla2_ricci)
        cache.laplacian_scalar = metric_trace(cache.hessian_scalar, inverse)
        nabla2_schouten = 0.5 * (cache.nabla2_ricci - np.einsum("zmn,zij->zijmn", cache.hessian_scalar, g) / 6.0)
        cache.nabla2_weyl = nabla2_riemann - _schouten_product(g, nabla2_schouten)

    logger.debug(f"Geometry cache built for {cache.size} points at derivative order {derivative_order}")
    return cache


def potential_jet(f_partials: Sequence[np.ndarray], cache: GeometryCache) -> PotentialJet:
    """Covariant derivatives of the potential from its partials [f, df, d2f, d3f]."""
    if len(f_partials) < 3:
        raise InsufficientJetOrderError(2, len(f_partials) - 1, what="potential")
    df = f_partials[1]
    hessian = _covariant(f_partials[1:3], cache.christoffel, cache.christoffel_partials, 1)
    hessian = 0.5 * (hessian + np.swapaxes(hessian, 1, 2))
    third = None
    if len(f_partials) >= 4:
        third = _covariant(f_partials[1:4], cache.christoffel, cache.christoffel_partials, 2)
    return PotentialJet(
        f=f_partials[0],
        grad=df,
        hessian=hessian,
        third=third,
        laplacian=metric_trace(hessian, cache.inverse),
    )


def laplacians(cache: GeometryCache, u_partials: Sequence[np.ndarray],
               potential: Optional[PotentialJet] = None) -> Tuple[np.ndarray, Optional[np.ndarray]]:
    """
    Scalar Laplacian and drift Laplacian.

    Returns:
        (Delta u, Delta_f u) with Delta = +trace nabla^2 and
        Delta_f u = Delta u - <nabla u, nabla f>; the drift term is None without a potential.
    """
    if len(u_partials) < 3:
        raise InsufficientJetOrderError(2, len(u_partials) - 1, what="scalar field")
    hessian = _covariant(u_partials[1:3], cache.christoffel, cache.christoffel_partials, 1)
    delta = metric_trace(hessian, cache.inverse)
    if potential is None:
        return delta, None
    drift = np.einsum("zij,zi,zj->z", cache.inverse, u_partials[1], potential.grad)
    return delta, delta - drift


def lichnerowicz_apply(h_partials: Sequence[np.ndarray], cache: GeometryCache) -> np.ndarray:
    """
    (Delta_L h)_ij = -nabla^k nabla_k h_ij + 2 R_ikjl h^kl - R_i^k h_kj - R_j^k h_ki.
    """
    nabla2_h = covariant_derivative(h_partials, cache, 2)
    rough = -np.einsum("zmn,zijmn->zij", cache.inverse, nabla2_h)
    h_up = raise_all(h_partials[0], cache.inverse)
    curvature = 2.0 * np.einsum("zikjl,zkl->zij", cache.riemann, h_up)
    ricci_mixed = np.einsum("zia,zak->zik", cache.ricci, cache.inverse)
    twist = np.einsum("zik,zkj->zij", ricci_mixed, h_partials[0])
    result = rough + curvature - twist - np.swapaxes(twist, 1, 2)
    return 0.5 * (result + np.swapaxes(result, 1, 2))
