"""Circle-valued maps sampled on a uniform grid, and their winding numbers.

A map u from the circle to itself is stored through a lifted phase field:
node i at angle theta_i = 2*pi*i/n carries a real phase phi_i, and
u(theta_i) = (cos phi_i, sin phi_i).  Storing the lift keeps the winding
number exact integer arithmetic and leaves descent directions
unconstrained.

A map is "degree-admissible" when every cyclic neighbor gap, wrapped to
the principal interval, is strictly inside (-pi, pi); only then is the
discrete winding number well defined at this resolution.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass

import numpy as np

from .errors import AdmissibilityError, DomainError

__all__ = [
    "GridMap",
    "wrap_angle",
    "identity_map",
    "power_map",
    "moebius_map",
    "degree",
    "is_admissible",
    "perturb",
    "product_map",
    "rotated",
    "read_map_csv",
    "write_map_csv",
]

TWO_PI = 2.0 * math.pi

MIN_NODES = 8


def wrap_angle(x):
    """Wrap angles to the principal interval (-pi, pi]; ties at pi map to +pi."""
    w = np.mod(x, TWO_PI)
    return np.where(w > math.pi, w - TWO_PI, w)


@dataclass(frozen=True, eq=False)
class GridMap:
    """A circle-valued map on the uniform n-point grid, stored as lifted phases."""

    phases: np.ndarray

    def __post_init__(self):
        phases = np.asarray(self.phases, dtype=np.float64).copy()
        if phases.ndim != 1 or phases.size < MIN_NODES:
            raise DomainError(f"a grid map needs at least {MIN_NODES} nodes, got shape {phases.shape}")
        if not np.all(np.isfinite(phases)):
            raise DomainError("phases must all be finite")
        phases.setflags(write=False)
        object.__setattr__(self, "phases", phases)

    @property
    def n(self) -> int:
        return self.phases.size

    @property
    def theta(self) -> np.ndarray:
        """Grid angles theta_i = 2*pi*i/n."""
        return TWO_PI * np.arange(self.n) / self.n

    def gaps(self) -> np.ndarray:
        """Cyclic neighbor phase gaps wrapped to (-pi, pi]."""
        return wrap_angle(np.roll(self.phases, -1) - self.phases)


def is_admissible(u: GridMap) -> bool:
    """True when every wrapped neighbor gap is strictly inside (-pi, pi)."""
    return bool(np.all(np.abs(u.gaps()) < math.pi))


def degree(u: GridMap) -> int:
    """Discrete winding number: the wrapped neighbor gaps sum to 2*pi*d.

    Raises AdmissibilityError when some gap reaches pi in magnitude (the
    winding is then ill-defined at this resolution) or when the rounding
    residual of the gap sum exceeds 1e-9.
    """
    gaps = u.gaps()
    if not np.all(np.abs(gaps) < math.pi):
        raise AdmissibilityError(
            "map has a neighbor phase gap of magnitude >= pi; winding number undefined"
        )
    total = float(np.sum(gaps)) / TWO_PI
    d = round(total)
    if abs(total - d) >= 1e-9:
        raise AdmissibilityError(f"winding residual {total - d:.3e} exceeds 1e-9")
    return int(d)


def identity_map(n: int) -> GridMap:
    """phi_i = theta_i; winds once counterclockwise."""
    n = int(n)
    if n < MIN_NODES:
        raise DomainError(f"n must be >= {MIN_NODES}, got {n}")
    return GridMap(TWO_PI * np.arange(n) / n)


def power_map(n: int, d: int) -> GridMap:
    """phi_i = d * theta_i, the canonical degree-d representative.

    Admissibility of the d*2*pi/n gaps requires n > 2|d|.
    """
    n = int(n)
    d = int(d)
    if n < MIN_NODES:
        raise DomainError(f"n must be >= {MIN_NODES}, got {n}")
    if n <= 2 * abs(d):
        raise DomainError(f"degree {d} needs n > {2 * abs(d)} nodes, got n={n}")
    return GridMap(d * TWO_PI * np.arange(n) / n)


def moebius_map(n: int, a) -> GridMap:
    """Boundary trace of the disk automorphism z -> (z - a) / (1 - conj(a) z).

    a may be a complex number or an (x, y) pair with |a| < 1.  The phases
    are a continuous lift of the argument; the map has degree one (at
    resolutions where its gaps stay below pi).
    """
    n = int(n)
    if n < MIN_NODES:
        raise DomainError(f"n must be >= {MIN_NODES}, got {n}")
    a = complex(a[0], a[1]) if isinstance(a, (tuple, list)) else complex(a)
    if not (abs(a) < 1.0):
        raise DomainError(f"moebius parameter must lie in the open unit disk, got |a|={abs(a)!r}")
    z = np.exp(1j * TWO_PI * np.arange(n) / n)
    w = (z - a) / (1.0 - np.conj(a) * z)
    return GridMap(np.unwrap(np.angle(w)))


def perturb(u: GridMap, amplitude: float, seed: int) -> GridMap:
    """Add a smooth periodic phase field built from five random Fourier modes.

    Each cosine/sine coefficient is drawn uniformly from
    [-amplitude, amplitude]; the draw is deterministic for a fixed seed.
    """
    amplitude = float(amplitude)
    if amplitude < 0.0:
        raise DomainError("amplitude must be >= 0")
    rng = np.random.default_rng(int(seed) % 2**63)  # any integer seed is accepted
    coeffs = rng.uniform(-amplitude, amplitude, size=(5, 2))
    theta = u.theta
    delta = np.zeros(u.n)
    for m, (c, s) in enumerate(coeffs, start=1):
        delta += c * np.cos(m * theta) + s * np.sin(m * theta)
    return GridMap(u.phases + delta)


def product_map(u: GridMap, v: GridMap) -> GridMap:
    """Pointwise complex product of two maps; in phases, their sum."""
    if u.n != v.n:
        raise DomainError(f"grid sizes differ: {u.n} vs {v.n}")
    return GridMap(u.phases + v.phases)


def rotated(u: GridMap, angle: float) -> GridMap:
    """Rotate the target circle: add a constant to every phase."""
    return GridMap(u.phases + float(angle))


def write_map_csv(u: GridMap, path) -> None:
    """Write `theta,phase` rows in radians with 17 significant digits."""
    theta = u.theta
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["theta", "phase"])
        for t, phi in zip(theta, u.phases):
            writer.writerow([f"{t:.17g}", f"{phi:.17g}"])


def read_map_csv(path) -> GridMap:
    """Read a map written by write_map_csv.

    Validates the header, a strictly increasing uniform theta grid
    theta_i = 2*pi*i/n, finiteness, and degree admissibility.
    """
    with open(path, "r", newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None or [h.strip() for h in header] != ["theta", "phase"]:
            raise DomainError(f"expected header 'theta,phase', got {header!r}")
        rows = [row for row in reader if row]
    if len(rows) < MIN_NODES:
        raise DomainError(f"map file needs at least {MIN_NODES} rows, got {len(rows)}")
    try:
        theta = np.array([float(r[0]) for r in rows])
        phases = np.array([float(r[1]) for r in rows])
    except (IndexError, ValueError) as exc:
        raise DomainError(f"malformed map row: {exc}") from exc
    n = len(rows)
    expected = TWO_PI * np.arange(n) / n
    if np.any(np.diff(theta) <= 0.0):
        raise DomainError("theta grid must be strictly increasing")
    if np.max(np.abs(theta - expected)) > 1e-9:
        raise DomainError("theta grid is not the uniform grid 2*pi*i/n")
    u = GridMap(phases)
    if not is_admissible(u):
        raise AdmissibilityError("map file contains a phase gap of magnitude >= pi")
    return u
