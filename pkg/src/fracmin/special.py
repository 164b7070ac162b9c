"""Self-contained log-gamma, Beta, and digamma evaluation in binary64.

The production paths are shift-up recurrences into the asymptotic
(Stirling-type) regime.  The slowly converging series representations
``digamma_series`` and ``log2_series`` are kept alongside as independent
validators: they come with rigorous truncation bounds, so a partial sum
plus its tail bound brackets the true value.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError

__all__ = [
    "EULER_GAMMA",
    "SeriesTail",
    "log_gamma",
    "beta",
    "digamma",
    "digamma_series",
    "log2_series",
]

EULER_GAMMA = 0.5772156649015328606065

_HALF_LOG_TWO_PI = 0.5 * math.log(2.0 * math.pi)

# B_{2n} / (2n (2n-1)) for the Stirling series of log Gamma, n = 1..8.
# With the argument shifted up to >= 8 the first omitted term is < 1e-15.
_LGAMMA_STIRLING = (
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1260.0,
    -1.0 / 1680.0,
    1.0 / 1188.0,
    -691.0 / 360360.0,
    1.0 / 156.0,
    -3617.0 / 122400.0,
)

# B_{2n} / (2n) for the asymptotic series of digamma, n = 1..7.
_DIGAMMA_STIRLING = (
    1.0 / 12.0,
    -1.0 / 120.0,
    1.0 / 252.0,
    -1.0 / 240.0,
    1.0 / 132.0,
    -691.0 / 32760.0,
    1.0 / 12.0,
)

_SHIFT_THRESHOLD = 8.0


def log_gamma(x: float) -> float:
    """Natural log of the Gamma function for x > 0.

    Arguments below 8 are shifted up by the recurrence
    Gamma(x) = Gamma(x + k) / (x (x+1) ... (x+k-1)); the shifted value is
    evaluated by the Stirling series with Bernoulli-number corrections.
    """
    x = float(x)
    if not math.isfinite(x) or x <= 0.0:
        raise DomainError(f"log_gamma requires finite x > 0, got {x!r}")
    shift_product = 1.0
    y = x
    while y < _SHIFT_THRESHOLD:
        shift_product *= y
        y += 1.0
    # Stirling series at y >= 8; correction in powers of 1/y^2.
    r = 1.0 / (y * y)
    corr = 0.0
    for c in reversed(_LGAMMA_STIRLING):
        corr = corr * r + c
    value = (y - 0.5) * math.log(y) - y + _HALF_LOG_TWO_PI + corr / y
    if shift_product != 1.0:
        value -= math.log(shift_product)
    return value


def beta(a: float, b: float) -> float:
    """Euler Beta function B(a, b) = Gamma(a) Gamma(b) / Gamma(a + b)."""
    a = float(a)
    b = float(b)
    if not (math.isfinite(a) and math.isfinite(b)) or a <= 0.0 or b <= 0.0:
        raise DomainError(f"beta requires positive arguments, got ({a!r}, {b!r})")
    return math.exp(log_gamma(a) + log_gamma(b) - log_gamma(a + b))


def digamma(z: float) -> float:
    """Logarithmic derivative of Gamma for z > 0.

    Upward recurrence psi(z) = psi(z+1) - 1/z until the argument reaches 8,
    then the asymptotic expansion
    psi(y) ~ log y - 1/(2y) - sum B_{2n} / (2n y^{2n}).
    """
    z = float(z)
    if not math.isfinite(z) or z <= 0.0:
        raise DomainError(f"digamma requires finite z > 0, got {z!r}")
    recurrence = 0.0
    y = z
    while y < _SHIFT_THRESHOLD:
        recurrence += 1.0 / y
        y += 1.0
    r = 1.0 / (y * y)
    corr = 0.0
    for c in reversed(_DIGAMMA_STIRLING):
        corr = corr * r + c
    return math.log(y) - 0.5 / y - corr * r - recurrence


@dataclass(frozen=True)
class SeriesTail:
    """A partial sum together with a rigorous truncation bound.

    partial_sum +/- tail_bound brackets the limit of the series.
    """

    partial_sum: float
    terms_used: int
    tail_bound: float

    def __post_init__(self):
        if self.terms_used < 1:
            raise DomainError("terms_used must be >= 1")
        if not math.isfinite(self.partial_sum):
            raise DomainError("partial_sum must be finite")
        if self.tail_bound < 0.0:
            raise DomainError("tail_bound must be >= 0")

    def brackets(self, value: float) -> bool:
        return abs(value - self.partial_sum) <= self.tail_bound


def digamma_series(z: float, n_terms: int) -> SeriesTail:
    """Truncated series for digamma:
    -gamma + sum_{n < N} (z-1) / ((n+1)(n+z)), with tail bound |z-1| / N.

    The terms all carry the sign of (z - 1), so the partial sum approaches
    digamma(z) monotonically and the bound is rigorous for every z > 0.
    """
    z = float(z)
    if not math.isfinite(z) or z <= 0.0:
        raise DomainError(f"digamma_series requires finite z > 0, got {z!r}")
    n_terms = int(n_terms)
    if n_terms < 1:
        raise DomainError("n_terms must be >= 1")
    n = np.arange(n_terms, dtype=np.float64)
    terms = (z - 1.0) / ((n + 1.0) * (n + z))
    partial = -EULER_GAMMA + float(np.sum(terms))
    return SeriesTail(
        partial_sum=partial,
        terms_used=n_terms,
        tail_bound=abs(z - 1.0) / n_terms,
    )


def log2_series(n_terms: int) -> SeriesTail:
    """Partial sums of sum_{n >= 0} 1 / ((2n+1)(2n+2)), which converges
    (monotonically from below) to log 2.

    Each term is below 1 / (4 n (n+1)), so the tail after N terms is
    bounded by 1 / (4N).
    """
    n_terms = int(n_terms)
    if n_terms < 1:
        raise DomainError("n_terms must be >= 1")
    n = np.arange(n_terms, dtype=np.float64)
    terms = 1.0 / ((2.0 * n + 1.0) * (2.0 * n + 2.0))
    return SeriesTail(
        partial_sum=float(np.sum(terms)),
        terms_used=n_terms,
        tail_bound=0.25 / n_terms,
    )
