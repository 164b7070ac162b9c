"""1D quadrature for integrands with algebraic endpoint singularities.

The default engine is a tanh-sinh (double exponential) transform: node
density increases double-exponentially toward the endpoints, which
absorbs any integrable algebraic singularity x^alpha, alpha > -1, without
scheme-specific weights.  A dyadically refined midpoint rule (with one
Richardson extrapolation step) is kept as an independent cross-check for
smooth integrands.

Precision note: nodes are generated as exact distances from the nearer
endpoint, so an integrand singular at an endpoint is sampled at full
relative accuracy only when that endpoint is exactly representable with a
negligible ulp-neighborhood (in practice: put the singularity at 0).
Callers in this package always arrange their integrands that way by
folding or reflecting the domain first.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import ConvergenceError, DomainError

__all__ = ["QuadratureSpec", "integrate_singular", "integral_sin_power"]

_SCHEMES = ("double_exponential", "midpoint_refined")

# Truncation of the tanh-sinh node range.  At |t| = 6 the distance from
# the endpoint is ~3e-276 and the node contribution of any integrable
# algebraic singularity is far below double precision.
_T_MAX = 6.0


@dataclass(frozen=True)
class QuadratureSpec:
    scheme: str = "double_exponential"
    level_or_nodes: int = 12
    abs_tol: float = 1e-10

    def __post_init__(self):
        if self.scheme not in _SCHEMES:
            raise DomainError(f"unknown scheme {self.scheme!r}; expected one of {_SCHEMES}")
        if self.level_or_nodes < 1:
            raise DomainError("level_or_nodes must be >= 1")
        if not (self.abs_tol > 0.0) or not math.isfinite(self.abs_tol):
            raise DomainError("abs_tol must be a positive finite real")


_DEFAULT_SPEC = QuadratureSpec()


def _eval_batch(f, x):
    values = np.asarray(f(x), dtype=np.float64)
    if values.shape != x.shape:
        raise DomainError("integrand must return one value per node")
    if not np.all(np.isfinite(values)):
        raise DomainError("integrand evaluated to a non-finite value at an interior node")
    return values


def _tanh_sinh_nodes(t, a, b):
    """Abscissas (as distance from each endpoint) and weights for t > 0."""
    length = b - a
    u = 0.5 * math.pi * np.sinh(t)
    q = np.exp(-2.0 * u)           # in (0, 1]; no overflow for t <= 6
    dist = length * q / (1.0 + q)  # distance from the nearer endpoint
    # dx/dt = (length/2) (pi/2) cosh(t) sech^2(u), sech^2(u) = 4q/(1+q)^2
    weight = 0.5 * length * (0.5 * math.pi) * np.cosh(t) * 4.0 * q / (1.0 + q) ** 2
    return dist, weight


def _ts_batch(f, t, a, b):
    """Contribution (before the h factor) of the symmetric node pair set t > 0."""
    dist, weight = _tanh_sinh_nodes(t, a, b)
    keep = dist > 0.0
    dist, weight = dist[keep], weight[keep]
    lower = _eval_batch(f, a + dist)
    upper = _eval_batch(f, b - dist)
    return float(np.sum(weight * (lower + upper)))


def _tanh_sinh_estimates(f, a, b, max_level):
    """Successive trapezoid-in-t estimates, one per refinement level.

    The step h = 2^-level halves each level, reusing every node already
    evaluated: each level only adds the odd multiples of the new h.
    """
    length = b - a
    center = _eval_batch(f, np.array([a + 0.5 * length]))[0] * (0.25 * math.pi * length)
    total = center + _ts_batch(f, np.arange(1.0, _T_MAX), a, b)
    yield total
    h = 1.0
    for _ in range(max_level):
        h *= 0.5
        t_new = np.arange(1.0, math.ceil(_T_MAX / h), 2.0) * h
        total = 0.5 * total + _ts_batch(f, t_new, a, b) * h
        yield total


def _tanh_sinh(f, a, b, max_level, abs_tol):
    previous = math.inf
    for level, total in enumerate(_tanh_sinh_estimates(f, a, b, max_level)):
        if level >= 3 and abs(total - previous) <= abs_tol:
            return total
        previous = total
    raise ConvergenceError(
        f"tanh-sinh quadrature did not reach abs_tol={abs_tol:g} within level {max_level}"
    )


def _midpoint_refined(f, a, b, max_level, abs_tol):
    length = b - a
    plain_prev = None
    extrap_prev = None
    for level in range(1, max_level + 1):
        m = 2 ** level
        h = length / m
        x = a + (np.arange(m) + 0.5) * h
        plain = float(np.sum(_eval_batch(f, x))) * h
        if plain_prev is not None:
            # midpoint error expands in even powers of h; one Richardson
            # step removes the h^2 term
            extrap = (4.0 * plain - plain_prev) / 3.0
            if extrap_prev is not None and abs(extrap - extrap_prev) <= abs_tol:
                return extrap
            extrap_prev = extrap
        plain_prev = plain
    raise ConvergenceError(
        f"refined midpoint rule did not reach abs_tol={abs_tol:g} within level {max_level}"
    )


def integrate_singular(
    f: Callable[[np.ndarray], np.ndarray],
    a: float,
    b: float,
    spec: QuadratureSpec | None = None,
) -> float:
    """Integrate f over (a, b) to within spec.abs_tol.

    f is called on numpy arrays of interior nodes and must be re-entrant;
    endpoint values are never requested.  The result is deterministic for
    a fixed spec.  Raises ConvergenceError when the tolerance is not met
    at the maximum refinement level, and propagates any exception raised
    by f.
    """
    if spec is None:
        spec = _DEFAULT_SPEC
    a = float(a)
    b = float(b)
    if not (math.isfinite(a) and math.isfinite(b)) or not a < b:
        raise DomainError(f"integration interval must satisfy a < b, got ({a!r}, {b!r})")
    if spec.scheme == "double_exponential":
        return _tanh_sinh(f, a, b, spec.level_or_nodes, spec.abs_tol)
    return _midpoint_refined(f, a, b, spec.level_or_nodes, spec.abs_tol)


def integral_sin_power(p: float, spec: QuadratureSpec | None = None) -> float:
    """The integral of (sin g)^(p-2) over g in (0, pi), for 1 < p <= 2.

    The integrand has endpoint singularities of exponent p - 2 in (-1, 0].
    Folding at pi/2 moves them both onto the endpoint 0, and subtracting
    the exactly integrable leading power g^(p-2) leaves a remainder that
    vanishes like g^p there.  The subtraction matters as p -> 1: the raw
    singularity then concentrates measurable mass at endpoint distances
    below the range of binary64, where no quadrature node can reach.
    """
    p = float(p)
    if not math.isfinite(p) or p <= 1.0:
        raise DomainError(f"integral diverges for p <= 1 (got p={p!r})")
    if p > 2.0:
        raise DomainError(f"p > 2 is outside the supported range (got p={p!r})")
    exponent = p - 2.0
    half_pi = 0.5 * math.pi

    def remainder(x):
        # sin(x)^(p-2) - x^(p-2), evaluated without cancellation
        return x**exponent * np.expm1(exponent * np.log(np.sin(x) / x))

    leading = half_pi ** (p - 1.0) / (p - 1.0)
    return 2.0 * (leading + integrate_singular(remainder, 0.0, half_pi, spec))
