"""
Forward-mode jet arithmetic in four chart variables.

A Jet stores the truncated multivariate Taylor expansion of a scalar field
about a batch of points: coefficient c_alpha for every multi-index alpha with
|alpha| <= order. Arithmetic propagates all partial derivatives exactly (up to
rounding), so nesting k forward-mode duals in symmetric directions and
reading off a single Jet of order k give the same numbers.

Partial derivatives are recovered as d^alpha u = alpha! * c_alpha.
"""

import math
from functools import lru_cache
from itertools import product
from typing import Callable, Dict, List, Sequence, Tuple, Union

import numpy as np

DIMENSION = 4

Scalar = Union[int, float, np.ndarray]


@lru_cache(maxsize=None)
def multi_indices(order: int) -> Tuple[Tuple[int, ...], ...]:
    """All multi-indices of total degree <= order, graded then lexicographic."""
    indices = []
    for degree in range(order + 1):
        level = [alpha for alpha in product(range(degree + 1), repeat=DIMENSION)
                 if sum(alpha) == degree]
        indices.extend(sorted(level, reverse=True))
    return tuple(indices)


@lru_cache(maxsize=None)
def _index_map(order: int) -> Dict[Tuple[int, ...], int]:
    return {alpha: position for position, alpha in enumerate(multi_indices(order))}


@lru_cache(maxsize=None)
def _product_table(order: int) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """
    Index arrays for truncated Taylor multiplication.

    Returns:
        (left, right, starts): terms x[left] * y[right] summed by np.add.reduceat
        at `starts` give the product coefficients in coefficient order.
    """
    indices = multi_indices(order)
    lookup = _index_map(order)
    triples = []
    for i, a in enumerate(indices):
        for j, b in enumerate(indices):
            if sum(a) + sum(b) <= order:
                target = tuple(p + q for p, q in zip(a, b))
                triples.append((lookup[target], i, j))
    triples.sort()
    out = np.array([t[0] for t in triples])
    left = np.array([t[1] for t in triples])
    right = np.array([t[2] for t in triples])
    starts = np.flatnonzero(np.r_[True, out[1:] != out[:-1]])
    return left, right, starts


@lru_cache(maxsize=None)
def _derivative_gather(order: int, m: int) -> Tuple[np.ndarray, np.ndarray]:
    """Coefficient positions and factorial weights for all ordered m-fold partials."""
    lookup = _index_map(order)
    positions = []
    weights = []
    for axes in product(range(DIMENSION), repeat=m):
        alpha = tuple(axes.count(axis) for axis in range(DIMENSION))
        positions.append(lookup[alpha])
        weights.append(float(np.prod([math.factorial(a) for a in alpha])))
    return np.array(positions), np.array(weights)


class Jet:
    """
    Truncated Taylor number batched over points.

    coeffs has shape (N, ncoef) where ncoef counts the multi-indices of
    degree <= order in four variables.
    """
    __slots__ = ("coeffs", "order")

    def __init__(self, coeffs: np.ndarray, order: int):
        self.coeffs = coeffs
        self.order = order

    @classmethod
    def variables(cls, points: np.ndarray, order: int) -> Tuple["Jet", ...]:
        """Coordinate jets x_0..x_3 expanded about each row of `points`."""
        points = np.atleast_2d(np.asarray(points, dtype=float))
        lookup = _index_map(order)
        ncoef = len(lookup)
        result = []
        for axis in range(DIMENSION):
            coeffs = np.zeros((points.shape[0], ncoef))
            coeffs[:, 0] = points[:, axis]
            if order >= 1:
                unit = tuple(1 if a == axis else 0 for a in range(DIMENSION))
                coeffs[:, lookup[unit]] = 1.0
            result.append(cls(coeffs, order))
        return tuple(result)

    @classmethod
    def constant(cls, value: Scalar, size: int, order: int) -> "Jet":
        coeffs = np.zeros((size, len(multi_indices(order))))
        coeffs[:, 0] = value
        return cls(coeffs, order)

    @property
    def size(self) -> int:
        return self.coeffs.shape[0]

    @property
    def value(self) -> np.ndarray:
        return self.coeffs[:, 0]

    def _coerce(self, other: Union["Jet", Scalar]) -> "Jet":
        if isinstance(other, Jet):
            if other.order != self.order:
                raise ValueError(f"jet order mismatch: {self.order} vs {other.order}")
            return other
        return Jet.constant(other, self.size, self.order)

    # arithmetic
    def __add__(self, other):
        if isinstance(other, Jet):
            return Jet(self.coeffs + self._coerce(other).coeffs, self.order)
        coeffs = self.coeffs.copy()
        coeffs[:, 0] += other
        return Jet(coeffs, self.order)

    __radd__ = __add__

    def __neg__(self):
        return Jet(-self.coeffs, self.order)

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, Jet):
            factor = np.asarray(other, dtype=float)
            if factor.ndim == 1:
                factor = factor[:, None]
            return Jet(self.coeffs * factor, self.order)
        other = self._coerce(other)
        left, right, starts = _product_table(self.order)
        terms = self.coeffs[:, left] * other.coeffs[:, right]
        return Jet(np.add.reduceat(terms, starts, axis=1), self.order)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, Jet):
            return self * other.reciprocal()
        return self * (1.0 / np.asarray(other, dtype=float))

    def __rtruediv__(self, other):
        return self.reciprocal() * other

    def __pow__(self, power: Scalar):
        if isinstance(power, (int, np.integer)) and power >= 0:
            result = Jet.constant(1.0, self.size, self.order)
            base = self
            exponent = int(power)
            while exponent:
                if exponent & 1:
                    result = result * base
                exponent >>= 1
                if exponent:
                    base = base * base
            return result
        p = float(power)
        u0 = self.value
        derivs = []
        falling = np.ones_like(u0)
        for n in range(self.order + 1):
            derivs.append(falling * u0 ** (p - n))
            falling = falling * (p - n)
        return self._compose(derivs)

    def reciprocal(self) -> "Jet":
        u0 = self.value
        if np.any(u0 == 0.0):
            raise ZeroDivisionError("jet division by zero")
        derivs = [(-1) ** n * math.factorial(n) / u0 ** (n + 1) for n in range(self.order + 1)]
        return self._compose(derivs)

    def _compose(self, derivs: Sequence[np.ndarray]) -> "Jet":
        """phi(u) = sum_n phi^(n)(u0)/n! (u - u0)^n, truncated at the jet order."""
        delta = Jet(self.coeffs.copy(), self.order)
        delta.coeffs[:, 0] = 0.0
        result = Jet.constant(0.0, self.size, self.order)
        result.coeffs[:, 0] = derivs[0]
        power = None
        for n in range(1, self.order + 1):
            power = delta if power is None else power * delta
            result = result + power * (derivs[n] / math.factorial(n))
        return result

    # derivatives
    def partials(self, m: int) -> np.ndarray:
        """All ordered m-fold partial derivatives, shape (N,) + (4,) * m."""
        if m > self.order:
            from .errors import InsufficientJetOrderError
            raise InsufficientJetOrderError(m, self.order, what="field")
        if m == 0:
            return self.value.copy()
        positions, weights = _derivative_gather(self.order, m)
        values = self.coeffs[:, positions] * weights
        return values.reshape((self.size,) + (DIMENSION,) * m)


def _unary(x, numpy_fn: Callable, derivative_sequence: Callable[[np.ndarray, int], List[np.ndarray]]):
    if not isinstance(x, Jet):
        return numpy_fn(x)
    return x._compose(derivative_sequence(x.value, x.order))


def exp(x):
    return _unary(x, np.exp, lambda u0, k: [np.exp(u0)] * (k + 1))


def sin(x):
    def sequence(u0, k):
        cycle = [np.sin(u0), np.cos(u0), -np.sin(u0), -np.cos(u0)]
        return [cycle[n % 4] for n in range(k + 1)]
    return _unary(x, np.sin, sequence)


def cos(x):
    def sequence(u0, k):
        cycle = [np.cos(u0), -np.sin(u0), -np.cos(u0), np.sin(u0)]
        return [cycle[n % 4] for n in range(k + 1)]
    return _unary(x, np.cos, sequence)


def log(x):
    def sequence(u0, k):
        return [np.log(u0)] + [(-1) ** (n - 1) * math.factorial(n - 1) / u0 ** n for n in range(1, k + 1)]
    return _unary(x, np.log, sequence)


def sqrt(x):
    if not isinstance(x, Jet):
        return np.sqrt(x)
    return x ** 0.5


def as_jet(value: Union[Jet, Scalar], size: int, order: int) -> Jet:
    if isinstance(value, Jet):
        return value
    return Jet.constant(value, size, order)
