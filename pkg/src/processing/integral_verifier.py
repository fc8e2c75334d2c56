"""
Weighted quadrature over sublevel sets of the potential and verification of
the integral identities of gradient shrinking solitons with harmonic scalar
curvature.

Integrals over catalog solitons run on the model's symmetry reduction: the
sphere factors contribute exact volumes and only the flat directions are
sampled. Full-manifold limits are truncated where the Gaussian tail of the
weight e^{-cf} drops below the configured tolerance.
"""

import logging
import math
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np

from config import (
    DEFAULT_RESOLUTION,
    DEFAULT_TOLERANCE,
    IDENTITY_IDS,
    POINT_BATCH_SIZE,
    POINTWISE_TOLERANCE,
    RANDOM_SEED,
    REGULAR_VALUE_FLOOR,
    SAMPLE_POINTS,
    TAIL_POLY_DEGREE,
)
from ..geometry.chart_calculus import tensor_norm_sq
from ..geometry.curvature_tensors import (
    ParameterPair,
    bach_like,
    bach_tensor,
    d_tensor,
    raised_gradient,
    ricci_norm_sq,
    tensor_U,
    tensor_V,
)
from ..models.soliton_catalog import PointGeometry, SolitonModel
from ..utils.errors import (
    EmptyLevelSetError,
    HypothesisViolationError,
    IrregularValueError,
    NonCompactDomainError,
    NotASolitonError,
    UnknownIdentityError,
    VerificationError,
)
from ..utils.quadrature import (
    QuadratureSpec,
    deterministic_sum,
    gaussian_tail_radius,
    interval_rule,
    periodic_rule,
    tensor_grid,
)

logger = logging.getLogger(__name__)

Integrand = Callable[[PointGeometry], np.ndarray]

TWO_PI = 2.0 * math.pi
DOMAIN_KINDS = ("sublevel", "full", "box", "torus")
SERIES_ORDERS = (0, 1, 2, 3)


# ---------------------------------------------------------------------------
# Integrands
# ---------------------------------------------------------------------------

def _potential(geom: PointGeometry):
    if geom.potential is None:
        raise NotASolitonError("integrand needs the soliton potential")
    return geom.potential


def _pair(a: np.ndarray, b: np.ndarray, geom: PointGeometry) -> np.ndarray:
    return np.einsum("zi,zij,zj->z", a, geom.cache.inverse, b)


def grad_f_norm_sq(geom: PointGeometry) -> np.ndarray:
    grad = _potential(geom).grad
    return _pair(grad, grad, geom)


def grad_f_norm(geom: PointGeometry) -> np.ndarray:
    return np.sqrt(np.maximum(grad_f_norm_sq(geom), 0.0))


def grad_R_norm_sq(geom: PointGeometry) -> np.ndarray:
    grad = geom.cache.grad_scalar
    return _pair(grad, grad, geom)


def grad_R_dot_grad_f(geom: PointGeometry) -> np.ndarray:
    return _pair(geom.cache.grad_scalar, _potential(geom).grad, geom)


def on_grad_f(tensor: np.ndarray, geom: PointGeometry) -> np.ndarray:
    """T(nabla f, nabla f) for a covariant 2-tensor batch."""
    grad_up = raised_gradient(_potential(geom), geom.cache)
    return np.einsum("zij,zi,zj->z", tensor, grad_up, grad_up)


def d_norm_sq(geom: PointGeometry) -> np.ndarray:
    D = d_tensor(geom.cache, _potential(geom), route="soliton-formula")
    return tensor_norm_sq(D, geom.cache.inverse)


def constant_one(geom: PointGeometry) -> np.ndarray:
    return np.ones(geom.size)


# ---------------------------------------------------------------------------
# Domain and report types
# ---------------------------------------------------------------------------

@dataclass
class DomainSpec:
    """
    Integration domain bound to a model.

    kind:
        "sublevel"  Omega_r = {f <= r}
        "full"      the whole manifold (truncated Gaussian tail when non-compact)
        "box"       chart box given by `bounds`, tensor Gauss-Legendre
        "torus"     the periodic chart of a torus model
    """
    model: SolitonModel
    kind: str
    r: Optional[float] = None
    bounds: Optional[Tuple[Tuple[float, float], ...]] = None

    def __post_init__(self):
        if self.kind not in DOMAIN_KINDS:
            raise VerificationError(f"unknown domain kind '{self.kind}'")
        if self.kind == "sublevel" and self.r is None:
            raise VerificationError("sublevel domain needs r")
        if self.kind == "box" and (self.bounds is None or len(self.bounds) != 4):
            raise VerificationError("box domain needs four (low, high) bounds")

    @classmethod
    def sublevel(cls, model: SolitonModel, r: float) -> "DomainSpec":
        return cls(model=model, kind="sublevel", r=float(r))

    @classmethod
    def full(cls, model: SolitonModel) -> "DomainSpec":
        return cls(model=model, kind="full")

    @classmethod
    def torus(cls, model: SolitonModel) -> "DomainSpec":
        return cls(model=model, kind="torus")

    @classmethod
    def box(cls, model: SolitonModel, bounds: Sequence[Tuple[float, float]]) -> "DomainSpec":
        return cls(model=model, kind="box", bounds=tuple((float(lo), float(hi)) for lo, hi in bounds))

    @property
    def label(self) -> str:
        if self.kind == "sublevel":
            return f"sublevel(r={self.r:g})"
        return self.kind


@dataclass
class IntegrationResult:
    value: float
    empty_domain: bool = False
    nodes: int = 0


@dataclass
class IdentityReport:
    identity: str
    model: str
    params: Dict[str, object]
    lhs: float
    rhs: float
    residual: float
    tolerance: float
    verdict: str
    resolution: int
    empty_domain: bool = False
    extras: Dict[str, float] = field(default_factory=dict)
    notes: List[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return self.verdict in ("pass", "vacuous")


@dataclass
class DecayReport:
    model: str
    alpha: float
    r_values: List[float]
    values: List[float]
    nonincreasing: bool
    final_below_tolerance: bool
    tolerance: float
    verdict: str


@dataclass
class TorusEnergyReport:
    model: str
    resolutions: List[int]
    values: List[float]
    relative_change: float
    stable_digits: float
    verdict: str


@dataclass
class RigiditySeriesTerm:
    n: int
    lhs: float
    rhs: float
    residual: float
    verdict: str


@dataclass
class RigidityReport:
    model: str
    r: float
    c: float
    empty_domain: bool
    verdict: str
    kernel_scalar: Optional[float] = None
    kernel_gradient: Optional[float] = None
    kernel_d_printed: Optional[float] = None
    kernel_d: Optional[float] = None
    kernel_u: Optional[float] = None
    signs: Dict[str, int] = field(default_factory=dict)
    params: Optional[Dict[str, float]] = None
    combination_printed: Optional[float] = None
    combination: Optional[float] = None
    bach_like_kernel: Optional[float] = None
    series: List[RigiditySeriesTerm] = field(default_factory=list)
    u_vanishes: bool = False
    einstein: bool = False
    flat: bool = False
    narrative: List[str] = field(default_factory=list)


def judge(lhs: float, rhs: float, tolerance: float) -> Tuple[float, bool]:
    """Residual |lhs - rhs| and whether it is within tolerance * (1 + |lhs| + |rhs|)."""
    residual = abs(lhs - rhs)
    return residual, residual <= tolerance * (1.0 + abs(lhs) + abs(rhs))


@dataclass
class _NodeSet:
    points: np.ndarray
    weights: np.ndarray
    use_density: bool
    empty: bool = False


# ---------------------------------------------------------------------------
# Verifier
# ---------------------------------------------------------------------------

class IntegralVerifier:
    """
    Quadrature over soliton models with cached geometry per node set.

    Coordinates:
    1. Node generation from the model's symmetry reduction
    2. Batched geometry evaluation (curvature to second covariant derivatives)
    3. Weighted volume and level-set integrals with deterministic summation
    4. Identity assembly and verdicts
    """

    def __init__(self, quad: Optional[QuadratureSpec] = None, batch_size: int = POINT_BATCH_SIZE,
                 derivative_order: int = 2):
        """
        Args:
            quad: quadrature rule and resolution (defaults to DEFAULT_RESOLUTION Gauss-Legendre)
            batch_size: points per geometry evaluation
            derivative_order: covariant derivatives of curvature evaluated at the nodes
        """
        self.quad = quad or QuadratureSpec(resolution=DEFAULT_RESOLUTION)
        self.batch_size = batch_size
        self.derivative_order = derivative_order
        self._geometry_store: Dict[tuple, Tuple[SolitonModel, List[PointGeometry]]] = {}

    # -- nodes --------------------------------------------------------------

    def _sublevel_radius(self, model: SolitonModel, r: float) -> Optional[float]:
        """s_r with f = min f + s^2/4, None for an empty sublevel set."""
        if model.min_f is None:
            raise NotASolitonError(f"model '{model.name}' has no potential minimum")
        if math.isclose(r, model.min_f, rel_tol=0.0, abs_tol=1e-12):
            raise IrregularValueError(f"r = {r} is the minimum of f on '{model.name}', not a regular value")
        if r < model.min_f:
            return None
        return 2.0 * math.sqrt(r - model.min_f)

    def _nodes(self, domain: DomainSpec, c: float, quad: QuadratureSpec) -> _NodeSet:
        model = domain.model
        reduction = model.reduction

        if domain.kind == "box":
            rules = [interval_rule(lo, hi, quad) for lo, hi in domain.bounds]
            points, weights = tensor_grid(rules)
            return _NodeSet(points, weights, use_density=True)

        if reduction.kind == "periodic":
            if domain.kind == "sublevel":
                raise NotASolitonError(f"model '{model.name}' has no potential; sublevel sets are undefined")
            axes = reduction.active_axes
            grid, weights = tensor_grid([periodic_rule(quad.resolution) for _ in axes])
            points = np.zeros((weights.size, 4))
            for column, axis in enumerate(axes):
                points[:, axis] = grid[:, column]
            weights = weights * TWO_PI ** (4 - len(axes))
            return _NodeSet(points, weights, use_density=True)

        if domain.kind == "torus":
            raise VerificationError(f"model '{model.name}' is not a torus")

        base = np.asarray(reduction.base_point, dtype=float)[None, :]
        if reduction.kind == "homogeneous":
            if domain.kind == "sublevel" and self._sublevel_radius(model, domain.r) is None:
                return _NodeSet(np.zeros((0, 4)), np.zeros(0), use_density=False, empty=True)
            return _NodeSet(base, np.array([reduction.factor]), use_density=False)

        if domain.kind == "sublevel":
            radius = self._sublevel_radius(model, domain.r)
            if radius is None:
                return _NodeSet(np.zeros((0, 4)), np.zeros(0), use_density=False, empty=True)
        else:
            if c <= 0.0:
                raise NonCompactDomainError(
                    f"unweighted integral over the non-compact model '{model.name}' diverges")
            radius = gaussian_tail_radius(c, TAIL_POLY_DEGREE + reduction.dimension, quad.tail_tolerance)

        lower = 0.0 if reduction.kind == "radial" else -radius
        s, w = interval_rule(lower, radius, quad)
        return _NodeSet(reduction.points(s), w * reduction.measure(s), use_density=False)

    def _geometries(self, model: SolitonModel, points: np.ndarray, key: tuple) -> List[PointGeometry]:
        stored = self._geometry_store.get(key)
        if stored is not None and stored[0] is model:
            return stored[1]
        batches = [model.geometry(points[start:start + self.batch_size], derivative_order=self.derivative_order)
                   for start in range(0, points.shape[0], self.batch_size)]
        self._geometry_store[key] = (model, batches)
        logger.debug(f"Evaluated geometry of '{model.name}' at {points.shape[0]} nodes")
        return batches

    def _domain_key(self, domain: DomainSpec, c: float, quad: QuadratureSpec) -> tuple:
        truncation = c if domain.kind == "full" else None
        return (id(domain.model), domain.kind, domain.r, domain.bounds, truncation,
                quad.resolution, quad.rule, quad.tail_tolerance)

    def _evaluate(self, integrand: Integrand, model: SolitonModel, nodes: _NodeSet, key: tuple,
                  c: float) -> np.ndarray:
        values = []
        start = 0
        for geom in self._geometries(model, nodes.points, key):
            v = np.broadcast_to(np.asarray(integrand(geom), dtype=float), (geom.size,))
            if c != 0.0:
                v = v * np.exp(-c * _potential(geom).f)
            if nodes.use_density:
                v = v * geom.cache.volume_density
            values.append(v * nodes.weights[start:start + geom.size])
            start += geom.size
        return np.concatenate(values)

    # -- integration --------------------------------------------------------

    def integrate(self, integrand: Integrand, domain: DomainSpec, c: float = 0.0,
                  quad: Optional[QuadratureSpec] = None) -> IntegrationResult:
        """
        Integral of integrand * e^{-cf} dV over the domain.

        Args:
            integrand: pointwise scalar built from PointGeometry
            domain: DomainSpec bound to a model
            c: weight exponent (>= 0; 0 means unweighted)
            quad: overrides the verifier's quadrature

        Returns:
            IntegrationResult (value 0 with empty_domain set when Omega_r is empty)
        """
        if c < 0.0:
            raise VerificationError(f"weight exponent must be non-negative, got {c}")
        quad = quad or self.quad
        nodes = self._nodes(domain, c, quad)
        if nodes.empty:
            return IntegrationResult(0.0, empty_domain=True, nodes=0)
        values = self._evaluate(integrand, domain.model, nodes, self._domain_key(domain, c, quad), c)
        return IntegrationResult(deterministic_sum(values), nodes=nodes.weights.size)

    def maximum(self, integrand: Integrand, domain: DomainSpec, quad: Optional[QuadratureSpec] = None) -> float:
        """Largest |integrand| over the domain's quadrature nodes (0 on an empty domain)."""
        quad = quad or self.quad
        c = 1.0 if domain.kind == "full" else 0.0
        nodes = self._nodes(domain, c, quad)
        if nodes.empty:
            return 0.0
        key = self._domain_key(domain, c, quad)
        return float(max(np.max(np.abs(np.broadcast_to(np.asarray(integrand(geom), dtype=float), (geom.size,))))
                         for geom in self._geometries(domain.model, nodes.points, key)))

    def boundary_integrate(self, integrand: Integrand, model: SolitonModel, r: float, c: float = 0.0,
                           quad: Optional[QuadratureSpec] = None, allow_empty: bool = False) -> IntegrationResult:
        """
        Integral of integrand * e^{-cf} dS over the level set {f = r}.

        The level set is parameterized exactly: a round 3-sphere (gaussian),
        two slices S^3 x {+-x_r} (cyl-s3xr) or S^2 x circle (cyl-s2xr2).

        Raises:
            EmptyLevelSetError: {f = r} is empty and allow_empty is False
            IrregularValueError: |nabla f| vanishes on the level set
        """
        quad = quad or self.quad
        reduction = model.reduction
        if reduction.kind == "periodic":
            raise NotASolitonError(f"model '{model.name}' has no potential; level sets are undefined")
        radius = self._sublevel_radius(model, r)
        if radius is None or reduction.kind == "homogeneous":
            if not allow_empty:
                raise EmptyLevelSetError(f"level set f = {r} is empty on '{model.name}'")
            return IntegrationResult(0.0, empty_domain=True, nodes=0)

        s = np.array([radius]) if reduction.kind == "radial" else np.array([-radius, radius])
        nodes = _NodeSet(reduction.points(s), reduction.measure(s), use_density=False)
        key = ("boundary", id(model), float(r))
        geometries = self._geometries(model, nodes.points, key)
        smallest = min(float(np.min(grad_f_norm(geom))) for geom in geometries)
        if smallest <= REGULAR_VALUE_FLOOR:
            raise IrregularValueError(f"|grad f| = {smallest:.3e} on the level set f = {r}; r is not regular")
        values = self._evaluate(integrand, model, nodes, key, c)
        return IntegrationResult(deterministic_sum(values), nodes=s.size)

    # -- identities ---------------------------------------------------------

    def verify_identity(self, identity_id: str, model: SolitonModel, r: Optional[float] = None,
                        c: float = 1.0, tolerance: float = DEFAULT_TOLERANCE) -> IdentityReport:
        """
        Assemble both sides of an integral identity and judge them.

        Args:
            identity_id: one of IDENTITY_IDS
            model: soliton model
            r: sublevel value, or None for the full-manifold limit
            c: weight exponent for the dV_c identities (ignored by the others)
            tolerance: relative tolerance

        Returns:
            IdentityReport
        """
        if identity_id not in _IDENTITIES:
            raise UnknownIdentityError(f"unknown identity '{identity_id}'; expected one of {', '.join(IDENTITY_IDS)}")
        if not model.is_soliton:
            raise NotASolitonError(f"identity {identity_id} needs a soliton model, got '{model.name}'")
        assemble, uses_c = _IDENTITIES[identity_id]
        if uses_c and c <= 0.0:
            raise VerificationError(f"identity {identity_id} needs c > 0, got {c}")

        params: Dict[str, object] = {"r": "full" if r is None else r}
        if uses_c:
            params["c"] = c
        domain = DomainSpec.full(model) if r is None else DomainSpec.sublevel(model, r)
        terms = _Terms(self, domain)

        if terms.empty:
            logger.info(f"{identity_id} on {model.name} ({domain.label}): empty domain, vacuous")
            return IdentityReport(identity=identity_id, model=model.name, params=params, lhs=0.0, rhs=0.0,
                                  residual=0.0, tolerance=tolerance, verdict="vacuous",
                                  resolution=self.quad.resolution, empty_domain=True,
                                  notes=[f"Omega_r is empty (min f = {model.min_f})"])

        laplacian_R = self.maximum(lambda geom: geom.cache.laplacian_scalar, terms.volume_domain)
        if laplacian_R > POINTWISE_TOLERANCE:
            raise HypothesisViolationError(
                f"{identity_id} needs Delta R = 0; |Delta R| reaches {laplacian_R:.3e} on '{model.name}'")

        lhs, rhs, extras = assemble(terms, c)
        residual, ok = judge(lhs, rhs, tolerance)
        notes = []
        for name, (alt_lhs, alt_rhs, binding) in extras.items():
            alt_residual, alt_ok = judge(alt_lhs, alt_rhs, tolerance)
            if binding:
                residual = max(residual, alt_residual)
                ok = ok and alt_ok
            notes.append(f"{name}: rhs = {alt_rhs:.17g}, residual = {alt_residual:.3e}"
                         + ("" if binding else " (reported only)"))
        report = IdentityReport(
            identity=identity_id, model=model.name, params=params, lhs=lhs, rhs=rhs, residual=residual,
            tolerance=tolerance, verdict="pass" if ok else "fail", resolution=self.quad.resolution,
            extras={name: value[1] for name, value in extras.items()}, notes=notes,
        )
        log = logger.info if ok else logger.error
        log(f"{identity_id} on {model.name} ({domain.label}): lhs={lhs:.12g} rhs={rhs:.12g} -> {report.verdict}")
        return report

    # -- probes -------------------------------------------------------------

    def decay_probe(self, model: SolitonModel, alpha: float, r_values: Sequence[float],
                    tolerance: float = DEFAULT_TOLERANCE) -> DecayReport:
        """e^{-alpha r} * int_{Omega_r} |nabla R|^2 dV along an increasing list of r."""
        r_values = [float(r) for r in r_values]
        if alpha <= 0.0:
            raise VerificationError(f"decay exponent must be positive, got {alpha}")
        if any(b <= a for a, b in zip(r_values, r_values[1:])):
            raise VerificationError("decay probe needs an increasing r-list")
        values = [math.exp(-alpha * r) * self.integrate(grad_R_norm_sq, DomainSpec.sublevel(model, r)).value
                  for r in r_values]
        nonincreasing = all(b <= a + tolerance * (1.0 + abs(a)) for a, b in zip(values, values[1:]))
        final_ok = abs(values[-1]) <= tolerance if values else True
        return DecayReport(model=model.name, alpha=alpha, r_values=r_values, values=values,
                           nonincreasing=nonincreasing, final_below_tolerance=final_ok, tolerance=tolerance,
                           verdict="pass" if nonincreasing and final_ok else "fail")

    def torus_gradient_energy(self, model: SolitonModel, resolutions: Sequence[int] = (32, 48),
                              digits: float = 3.0) -> TorusEnergyReport:
        """int_{T^4} |nabla R|^2 dV at several resolutions and its self-convergence."""
        values = []
        for resolution in resolutions:
            quad = QuadratureSpec(resolution=resolution, rule=self.quad.rule, tail_tolerance=self.quad.tail_tolerance)
            values.append(self.integrate(grad_R_norm_sq, DomainSpec.torus(model), quad=quad).value)
        change = abs(values[-1] - values[-2]) / max(abs(values[-1]), 1e-300) if len(values) > 1 else 0.0
        stable = -math.log10(change) if change > 0.0 else math.inf
        return TorusEnergyReport(model=model.name, resolutions=list(resolutions), values=values,
                                 relative_change=change, stable_digits=stable,
                                 verdict="pass" if change < 10.0 ** (-digits) else "fail")

    # -- rigidity -----------------------------------------------------------

    def rigidity_series(self, model: SolitonModel, r: float, c: float = 1.0,
                        tolerance: float = DEFAULT_TOLERANCE) -> List[RigiditySeriesTerm]:
        """
        For n = 0..3, S_n + T_n against 4 int (n f^{n-1} - c f^n) U(nabla f, nabla f) dV_c, where
        S_n = int (n f^{n-1} - c f^n)(R^2 - R)|nabla f|^2 dV_c and
        T_n = int (r^n e^{-cr} - f^n e^{-cf}) |nabla R|^2 dV over Omega_r.
        """
        domain = DomainSpec.sublevel(model, r)
        decay = math.exp(-c * r)
        terms = []
        for n in SERIES_ORDERS:
            def factor(geom, n=n):
                f = _potential(geom).f
                return (n * f ** (n - 1) if n > 0 else 0.0) - c * f ** n

            S = self.integrate(lambda geom: factor(geom) * (geom.cache.scalar ** 2 - geom.cache.scalar)
                               * grad_f_norm_sq(geom), domain, c=c).value
            T = (r ** n * decay * self.integrate(grad_R_norm_sq, domain).value
                 - self.integrate(lambda geom: _potential(geom).f ** n * grad_R_norm_sq(geom), domain, c=c).value)
            U_term = 4.0 * self.integrate(
                lambda geom: factor(geom) * on_grad_f(tensor_U(geom.cache), geom), domain, c=c).value
            residual, ok = judge(S + T, U_term, tolerance)
            terms.append(RigiditySeriesTerm(n=n, lhs=S + T, rhs=U_term, residual=residual,
                                            verdict="pass" if ok else "fail"))
        return terms

    def _hypothesis_facts(self, model: SolitonModel) -> Tuple[bool, bool, bool]:
        rng = np.random.default_rng(RANDOM_SEED)
        geom = model.geometry(model.sample_points(min(SAMPLE_POINTS, self.batch_size), rng), derivative_order=2)
        cache = geom.cache
        scale = 1.0 + float(np.max(np.abs(cache.scalar)))
        u_max = float(np.max(np.sqrt(tensor_norm_sq(tensor_U(cache), cache.inverse))))
        traceless = cache.ricci - (cache.scalar / 4.0)[:, None, None] * cache.metric
        einstein = float(np.max(np.sqrt(tensor_norm_sq(traceless, cache.inverse))))
        riemann = float(np.max(np.sqrt(tensor_norm_sq(cache.riemann, cache.inverse))))
        return (u_max <= POINTWISE_TOLERANCE * scale, einstein <= POINTWISE_TOLERANCE * scale,
                riemann <= POINTWISE_TOLERANCE)

    def rigidity_integrand_report(self, model: SolitonModel, r: float, c: float = 1.0,
                                  params: Optional[ParameterPair] = None,
                                  tolerance: float = DEFAULT_TOLERANCE) -> RigidityReport:
        """
        Kernel integrals of the rigidity argument over Omega_r with r in (0, 1).

        kernel_scalar   = int (R^2 - R)|nabla f|^2 / (1-f)^2
        kernel_gradient = int (f - r) / ((1-f)(1-r)) |nabla R|^2
        kernel_d        = int |D|^2 / (1-f)^2,  kernel_d_printed = int |D|^2 / (1-f)^3
        kernel_u        = 4 int U(nabla f, nabla f) / (1-f)^2  (equals kernel_scalar - kernel_gradient)
        """
        if not 0.0 < r < 1.0:
            raise HypothesisViolationError(f"rigidity kernels need r in (0, 1), got r = {r}")
        if not model.is_soliton:
            raise NotASolitonError(f"rigidity kernels need a soliton model, got '{model.name}'")

        u_vanishes, einstein, flat = self._hypothesis_facts(model)
        domain = DomainSpec.sublevel(model, r)
        report = RigidityReport(model=model.name, r=r, c=c, empty_domain=False, verdict="pass",
                                u_vanishes=u_vanishes, einstein=einstein, flat=flat,
                                params=None if params is None else {"alpha": params.alpha, "beta": params.beta})
        narrative = [
            f"U vanishes on '{model.name}': {'yes' if u_vanishes else 'no'}",
            f"'{model.name}' is Einstein: {'yes' if einstein else 'no'}; flat: {'yes' if flat else 'no'}",
        ]

        probe = self.integrate(constant_one, domain)
        if probe.empty_domain:
            report.empty_domain = True
            report.verdict = "vacuous"
            narrative.append(f"Omega_r is empty for r = {r} (min f = {model.min_f})")
            if u_vanishes:
                narrative.append("U vanishes identically here while Omega_r is empty, so the kernel "
                                 "identities hold without constraining this model")
            report.narrative = narrative
            logger.info(f"Rigidity kernels on {model.name} at r={r}: empty domain")
            return report
        narrative.append(f"Omega_r is nonempty for r = {r}")

        def inv(geom, power):
            return 1.0 / (1.0 - _potential(geom).f) ** power

        report.kernel_scalar = self.integrate(
            lambda geom: (geom.cache.scalar ** 2 - geom.cache.scalar) * grad_f_norm_sq(geom) * inv(geom, 2),
            domain).value
        report.kernel_gradient = self.integrate(
            lambda geom: (_potential(geom).f - r) * inv(geom, 1) / (1.0 - r) * grad_R_norm_sq(geom), domain).value
        report.kernel_d_printed = self.integrate(lambda geom: d_norm_sq(geom) * inv(geom, 3), domain).value
        report.kernel_d = self.integrate(lambda geom: d_norm_sq(geom) * inv(geom, 2), domain).value
        report.kernel_u = 4.0 * self.integrate(
            lambda geom: on_grad_f(tensor_U(geom.cache), geom) * inv(geom, 2), domain).value
        report.signs = {name: int(np.sign(value)) for name, value in (
            ("kernel_scalar", report.kernel_scalar), ("kernel_gradient", report.kernel_gradient),
            ("kernel_d", report.kernel_d))}

        _, ok = judge(report.kernel_scalar - report.kernel_gradient, report.kernel_u, tolerance)
        if params is not None:
            alpha, beta = params.alpha, params.beta
            printed_kernels = report.kernel_scalar + report.kernel_gradient
            kernels = report.kernel_scalar - report.kernel_gradient
            report.combination_printed = -6.0 * beta * report.kernel_d_printed + 0.25 * (alpha - 3.0 * beta) * printed_kernels
            report.combination = -3.0 * beta * report.kernel_d + 0.25 * (alpha - 3.0 * beta) * kernels
            report.bach_like_kernel = self.integrate(
                lambda geom: on_grad_f(bach_like(params, geom.cache), geom) * inv(geom, 2), domain).value
            _, combined_ok = judge(report.combination, report.bach_like_kernel, tolerance)
            ok = ok and combined_ok
        report.series = self.rigidity_series(model, r, c, tolerance)
        ok = ok and all(term.verdict == "pass" for term in report.series)
        report.verdict = "pass" if ok else "fail"
        report.narrative = narrative
        logger.info(f"Rigidity kernels on {model.name} at r={r}: {report.verdict}")
        return report

    def stokes_selftest(self, quad: Optional[QuadratureSpec] = None):
        from .stokes_selftest import stokes_selftest
        return stokes_selftest(quad or self.quad, verifier=self if quad is None else None)


# ---------------------------------------------------------------------------
# Identity assembly
# ---------------------------------------------------------------------------

class _Terms:
    """Volume, boundary and e^{-cr} edge terms for one domain; limits drop the last two."""

    def __init__(self, verifier: IntegralVerifier, domain: DomainSpec):
        self.verifier = verifier
        self.domain = domain
        self.model = domain.model
        self.full = domain.kind == "full"
        self.empty = False
        if not self.full:
            self.empty = verifier._sublevel_radius(self.model, domain.r) is None

    @property
    def volume_domain(self) -> DomainSpec:
        if self.full and not self.model.compact:
            # any truncation radius works for a pointwise hypothesis check
            return DomainSpec.sublevel(self.model, self.model.min_f + 4.0)
        return self.domain

    def vol(self, integrand: Integrand, c: float = 0.0) -> float:
        return self.verifier.integrate(integrand, self.domain, c=c).value

    def bnd(self, integrand: Integrand, c: float = 0.0) -> float:
        if self.full:
            return 0.0
        return self.verifier.boundary_integrate(integrand, self.model, self.domain.r, c=c, allow_empty=True).value

    def edge_vol(self, integrand: Integrand, c: float) -> float:
        """e^{-cr} * int_{Omega_r} integrand dV; vanishes in the full-manifold limit."""
        if self.full:
            return 0.0
        return math.exp(-c * self.domain.r) * self.vol(integrand)

    def require_bounded(self, identity_id: str):
        if self.full and not self.model.compact:
            raise NonCompactDomainError(
                f"{identity_id} has no full-manifold form on the non-compact model '{self.model.name}'")


Extras = Dict[str, Tuple[float, float, bool]]


def _normal_flux(geom):
    return grad_R_dot_grad_f(geom) / grad_f_norm(geom)


def _l22_1(t: _Terms, c: float):
    t.require_bounded("L2.2-1")
    return t.bnd(_normal_flux), 0.0, {}


def _l22_2(t: _Terms, c: float):
    t.require_bounded("L2.2-2")
    return t.vol(grad_R_dot_grad_f), 0.0, {}


def _l22_3(t: _Terms, c: float):
    t.require_bounded("L2.2-3")
    lhs = t.vol(grad_R_norm_sq)
    rhs = t.bnd(lambda geom: geom.cache.scalar * _normal_flux(geom))
    alternate = -t.bnd(lambda geom: grad_f_norm(geom) * grad_R_dot_grad_f(geom))
    return lhs, rhs, {"rhs_gradient_form": (lhs, alternate, True)}


def _l22_4(t: _Terms, c: float):
    return t.vol(grad_R_dot_grad_f, 1.0), 0.0, {}


def _l22_5(t: _Terms, c: float):
    lhs = t.vol(lambda geom: geom.cache.scalar * on_grad_f(geom.cache.ricci, geom), 1.0)
    rhs = (0.5 * t.bnd(lambda geom: grad_f_norm(geom) * grad_R_dot_grad_f(geom), 1.0)
           + 0.5 * t.vol(grad_R_norm_sq, 1.0))
    return lhs, rhs, {}


def _l22_6(t: _Terms, c: float):
    return t.vol(lambda geom: _potential(geom).f * grad_R_dot_grad_f(geom), 1.0), 0.0, {}


def _l31(t: _Terms, c: float):
    lhs = t.vol(lambda geom: on_grad_f(geom.cache.hessian_scalar, geom), 1.0)
    rhs = -t.edge_vol(grad_R_norm_sq, 1.0) + 0.5 * t.vol(grad_R_norm_sq, 1.0)
    return lhs, rhs, {}


def _eq_vw(t: _Terms, c: float):
    lhs = t.vol(lambda geom: on_grad_f(tensor_V(geom.cache), geom), 1.0)
    rhs = (0.5 * t.edge_vol(grad_R_norm_sq, 1.0)
           - 0.25 * t.vol(lambda geom: geom.cache.scalar ** 2 * grad_f_norm_sq(geom), 1.0))
    return lhs, rhs, {}


def _bach_on_grad_f(geom):
    return on_grad_f(bach_tensor(geom.cache, route="weyl"), geom)


def _l51(t: _Terms, c: float):
    return t.vol(_bach_on_grad_f, 1.0), -0.5 * t.vol(d_norm_sq, 1.0), {}


def _l51_c(t: _Terms, c: float):
    lhs = t.vol(_bach_on_grad_f, c)
    d_integral = t.vol(d_norm_sq, c)
    return lhs, -0.5 * d_integral, {"rhs_c_scaled": (lhs, -0.5 * c * d_integral, False)}


def _l71_1(t: _Terms, c: float):
    return t.vol(grad_R_dot_grad_f, c), 0.0, {}


def _l71_2(t: _Terms, c: float):
    lhs = t.vol(lambda geom: geom.cache.scalar * grad_R_dot_grad_f(geom), c)
    rhs = t.vol(grad_R_norm_sq, c) / c - t.edge_vol(grad_R_norm_sq, c) / c
    return lhs, rhs, {}


def _l71_3(t: _Terms, c: float):
    return t.vol(lambda geom: _potential(geom).f * grad_R_dot_grad_f(geom), c), 0.0, {}


def _l73(t: _Terms, c: float):
    lhs = t.vol(lambda geom: on_grad_f(tensor_U(geom.cache), geom), c)
    rhs = 0.25 * t.vol(lambda geom: (geom.cache.scalar ** 2 - 2.0 * ricci_norm_sq(geom.cache))
                       * grad_f_norm_sq(geom), c)
    second = (0.25 * t.vol(lambda geom: (geom.cache.scalar ** 2 - geom.cache.scalar) * grad_f_norm_sq(geom)
                           + grad_R_norm_sq(geom) / c, c)
              - t.edge_vol(grad_R_norm_sq, c) / (4.0 * c))
    return lhs, rhs, {"rhs_second_form": (lhs, second, True)}


def _l74(t: _Terms, c: float):
    lhs = t.vol(lambda geom: on_grad_f(tensor_V(geom.cache), geom), c)
    rhs = (-t.vol(lambda geom: 0.25 * geom.cache.scalar ** 2 * grad_f_norm_sq(geom)
                  + 3.0 * (c - 1.0) / (2.0 * c) * grad_R_norm_sq(geom), c)
           + (4.0 * c - 3.0) / (2.0 * c) * t.edge_vol(grad_R_norm_sq, c))
    return lhs, rhs, {}


_IDENTITIES: Dict[str, Tuple[Callable[[_Terms, float], Tuple[float, float, Extras]], bool]] = {
    "L2.2-1": (_l22_1, False),
    "L2.2-2": (_l22_2, False),
    "L2.2-3": (_l22_3, False),
    "L2.2-4": (_l22_4, False),
    "L2.2-5": (_l22_5, False),
    "L2.2-6": (_l22_6, False),
    "L3.1": (_l31, False),
    "EQ-VW": (_eq_vw, False),
    "L5.1": (_l51, False),
    "L5.1-c": (_l51_c, True),
    "L7.1-1": (_l71_1, True),
    "L7.1-2": (_l71_2, True),
    "L7.1-3": (_l71_3, True),
    "L7.3": (_l73, True),
    "L7.4": (_l74, True),
}


def identity_uses_c(identity_id: str) -> bool:
    """Whether the identity is stated for the weighted measure dV_c."""
    if identity_id not in _IDENTITIES:
        raise UnknownIdentityError(f"unknown identity '{identity_id}'")
    return _IDENTITIES[identity_id][1]


# ---------------------------------------------------------------------------
# Module-level entry points
# ---------------------------------------------------------------------------

def integrate(integrand: Integrand, domain: DomainSpec, c: float = 0.0,
              quad: Optional[QuadratureSpec] = None) -> IntegrationResult:
    return IntegralVerifier(quad).integrate(integrand, domain, c)


def boundary_integrate(integrand: Integrand, model: SolitonModel, r: float, c: float = 0.0,
                       quad: Optional[QuadratureSpec] = None) -> IntegrationResult:
    return IntegralVerifier(quad).boundary_integrate(integrand, model, r, c)


def verify_identity(identity_id: str, model: SolitonModel, r: Optional[float] = None, c: float = 1.0,
                    tolerance: float = DEFAULT_TOLERANCE, quad: Optional[QuadratureSpec] = None) -> IdentityReport:
    return IntegralVerifier(quad).verify_identity(identity_id, model, r, c, tolerance)
