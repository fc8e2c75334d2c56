"""
Quadrature rules and deterministic reductions.
"""

import logging
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Tuple

import numpy as np
from scipy import special

from config import GL_PANEL_NODES, MAX_GRID_POINTS, MIN_RESOLUTION, TAIL_TOLERANCE
from .errors import ResolutionError

logger = logging.getLogger(__name__)

RULES = ("gauss-legendre", "composite-midpoint", "periodic-trapezoid")


@dataclass(frozen=True)
class QuadratureSpec:
    """
    Attributes:
        resolution: nodes per axis
        rule: rule for bounded intervals (periodic axes always use the trapezoid rule)
        tail_tolerance: relative size allowed for the truncated Gaussian tail
    """
    resolution: int = 64
    rule: str = "gauss-legendre"
    tail_tolerance: float = TAIL_TOLERANCE

    def __post_init__(self):
        validate_resolution(self.resolution)
        if self.rule not in RULES:
            raise ResolutionError(f"unknown quadrature rule '{self.rule}'")

    def doubled(self) -> "QuadratureSpec":
        return QuadratureSpec(self.resolution * 2, self.rule, self.tail_tolerance)


def validate_resolution(resolution: int):
    if resolution < MIN_RESOLUTION:
        raise ResolutionError(f"resolution {resolution} is below the floor of {MIN_RESOLUTION}")


@lru_cache(maxsize=None)
def gauss_legendre(npt: int) -> Tuple[np.ndarray, np.ndarray]:
    return special.roots_legendre(npt)


def interval_rule(a: float, b: float, quad: QuadratureSpec) -> Tuple[np.ndarray, np.ndarray]:
    """Nodes and weights on [a, b]; Gauss-Legendre is applied in composite panels."""
    n = quad.resolution
    if quad.rule == "composite-midpoint" or quad.rule == "periodic-trapezoid":
        h = (b - a) / n
        nodes = a + h * (np.arange(n) + 0.5)
        return nodes, np.full(n, h)
    per_panel = min(n, GL_PANEL_NODES)
    panels = max(1, n // per_panel)
    reference, reference_weights = gauss_legendre(per_panel)
    edges = np.linspace(a, b, panels + 1)
    nodes = []
    weights = []
    for lo, hi in zip(edges[:-1], edges[1:]):
        half = 0.5 * (hi - lo)
        nodes.append(lo + half * (reference + 1.0))
        weights.append(half * reference_weights)
    return np.concatenate(nodes), np.concatenate(weights)


def periodic_rule(resolution: int, period: float = 2.0 * math.pi) -> Tuple[np.ndarray, np.ndarray]:
    nodes = period * np.arange(resolution) / resolution
    return nodes, np.full(resolution, period / resolution)


def tensor_grid(axes_rules) -> Tuple[np.ndarray, np.ndarray]:
    """
    Tensor-product grid.

    Args:
        axes_rules: list of (nodes, weights) per axis

    Returns:
        (points of shape (M, d), weights of shape (M,))
    """
    total = int(np.prod([len(nodes) for nodes, _ in axes_rules])) if axes_rules else 1
    if total > MAX_GRID_POINTS:
        raise ResolutionError(f"tensor grid of {total} points exceeds the cap of {MAX_GRID_POINTS}")
    if not axes_rules:
        return np.zeros((1, 0)), np.ones(1)
    meshes = np.meshgrid(*[nodes for nodes, _ in axes_rules], indexing="ij")
    weight_meshes = np.meshgrid(*[weights for _, weights in axes_rules], indexing="ij")
    points = np.stack([m.ravel() for m in meshes], axis=1)
    weights = np.prod(np.stack([w.ravel() for w in weight_meshes], axis=1), axis=1)
    return points, weights


def deterministic_sum(values: np.ndarray) -> float:
    """Correctly rounded sum, independent of evaluation order."""
    return math.fsum(np.asarray(values, dtype=float).ravel().tolist())


def gaussian_tail_radius(c: float, degree: int, tolerance: float = TAIL_TOLERANCE) -> float:
    """
    Smallest radius S (on a 0.25 grid) with
        int_S^inf s^p exp(-c s^2/4) ds <= tolerance * int_0^inf s^p exp(-c s^2/4) ds,
    using the bound S^(p-1) exp(-c S^2/4) / (c/2 - (p-1)/S^2).
    """
    if c <= 0.0:
        raise ResolutionError("Gaussian tail bound needs a positive weight exponent")
    p = degree
    a = c / 4.0
    total = 0.5 * a ** (-(p + 1) / 2.0) * math.gamma((p + 1) / 2.0)
    radius = math.sqrt(max(2.0 * (p + 1) / c, 1.0)) + 1.0
    while True:
        denominator = c / 2.0 - (p - 1) / radius ** 2
        if denominator > 0.0:
            bound = radius ** (p - 1) * math.exp(-a * radius ** 2) / denominator
            if bound <= tolerance * total:
                return radius
        radius += 0.25
