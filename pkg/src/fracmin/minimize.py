"""Energy descent over a prescribed winding class.

The lift parametrization makes the circle constraint automatic, so the
minimization runs as plain gradient descent in phase coordinates.  The
winding number is locally constant under small phase moves; instead of a
constraint, every candidate step must keep the iterate admissible with
the target degree, and is halved until it does (or the run aborts).
Descent therefore certifies the degree of whatever it returns.

At p = 2 the continuum minimizers form the non-compact family of disk
automorphism traces; the finite grid regularizes the associated
concentration, and perturbed restarts guard against the slow plateaus
that family produces.  No attempt is made to resolve the concentration
limit itself.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from .energy import EnergyParams, degree_lower_bound, energy, energy_gradient, identity_energy_closed_form
from .errors import DomainError
from .maps import GridMap, degree, is_admissible, perturb, power_map

__all__ = ["MinimizeConfig", "MinimizeResult", "ScanRow", "descend_from", "minimize", "minimize_scan"]

_STEP_RULES = ("armijo_backtracking", "fixed")

_INITIAL_STEP = 1.0
_ARMIJO_SHRINK = 0.5
_ARMIJO_DECREASE = 1e-4
_MAX_HALVINGS = 40
# clamp on the spectral trial step; backtracking recovers from a bad trial
_TRIAL_STEP_RANGE = (1e-6, 1e3)

_RESTART_AMPLITUDE = 0.1


@dataclass(frozen=True)
class MinimizeConfig:
    p: float
    degree_target: int
    n: int
    max_iters: int = 1000
    grad_tol: float = 1e-5
    restarts: int = 3
    seed: int = 0
    step_rule: str = "armijo_backtracking"

    def __post_init__(self):
        if not (math.isfinite(self.p) and 1.0 < self.p <= 2.0):
            raise DomainError(f"minimization exponent must satisfy 1 < p <= 2, got {self.p!r}")
        if self.n < 8:
            raise DomainError(f"n must be >= 8, got {self.n}")
        if self.n <= 2 * abs(self.degree_target):
            raise DomainError(
                f"degree {self.degree_target} needs n > {2 * abs(self.degree_target)}, got n={self.n}"
            )
        if self.max_iters < 1:
            raise DomainError("max_iters must be >= 1")
        if not (self.grad_tol > 0.0):
            raise DomainError("grad_tol must be > 0")
        if self.restarts < 0:
            raise DomainError("restarts must be >= 0")
        if self.step_rule not in _STEP_RULES:
            raise DomainError(f"step_rule must be one of {_STEP_RULES}, got {self.step_rule!r}")


@dataclass(frozen=True)
class MinimizeResult:
    final_map: GridMap
    final_energy: float
    final_degree: int
    iterations: int
    grad_norm: float
    energy_trace: np.ndarray
    converged: bool


def _candidate_degree(phases: np.ndarray) -> int | None:
    """Winding number of a raw phase vector, or None when inadmissible."""
    candidate = GridMap(phases)
    if not is_admissible(candidate):
        return None
    return degree(candidate)


def descend_from(start: GridMap, config: MinimizeConfig) -> MinimizeResult:
    """One descent run from an explicit admissible starting map.

    Accepted steps must decrease the energy (with the Armijo sufficient
    decrease margin under the default step rule) and preserve the target
    degree; violating steps are halved up to 40 times, after which the
    run aborts as non-converged.  The returned energy trace is therefore
    non-increasing.

    The backtracking starts from a spectral (Barzilai-Borwein) trial step
    once two gradients are available; the landscape at p = 2 has a
    near-flat valley along the disk-automorphism family, and a constant
    trial step crawls there.
    """
    params = EnergyParams(config.p)
    target = config.degree_target
    if _candidate_degree(start.phases) != target:
        raise DomainError("starting map does not carry the target degree")
    armijo = config.step_rule == "armijo_backtracking"
    phases = start.phases.copy()
    current = energy(start, params)
    trace = [current]
    grad = energy_gradient(GridMap(phases), params)
    grad_norm = float(np.linalg.norm(grad))
    iterations = 0
    aborted = False
    trial_step = _INITIAL_STEP
    while grad_norm > config.grad_tol and iterations < config.max_iters and not aborted:
        grad_sq = grad_norm * grad_norm
        step = trial_step if armijo else _INITIAL_STEP
        for _ in range(_MAX_HALVINGS + 1):
            candidate = phases - step * grad
            if _candidate_degree(candidate) == target:
                trial = energy(GridMap(candidate), params)
                required = current - _ARMIJO_DECREASE * step * grad_sq if armijo else current
                if trial <= required:
                    break
            step *= _ARMIJO_SHRINK
        else:
            aborted = True
            break
        iterations += 1
        previous_grad = grad
        phases = candidate
        current = trial
        trace.append(current)
        grad = energy_gradient(GridMap(phases), params)
        grad_norm = float(np.linalg.norm(grad))
        grad_change = grad - previous_grad
        curvature = float(grad_change @ grad_change)
        slope = -step * float(previous_grad @ grad_change)
        if curvature > 0.0 and slope > 0.0:
            trial_step = min(max(slope / curvature, _TRIAL_STEP_RANGE[0]), _TRIAL_STEP_RANGE[1])
        else:
            trial_step = _INITIAL_STEP
    final_map = GridMap(phases)
    return MinimizeResult(
        final_map=final_map,
        final_energy=current,
        final_degree=degree(final_map),
        iterations=iterations,
        grad_norm=grad_norm,
        energy_trace=np.array(trace),
        converged=(grad_norm <= config.grad_tol) and not aborted,
    )


def minimize(config: MinimizeConfig) -> MinimizeResult:
    """Minimize the energy over the degree-d class on the n-grid.

    Runs descent from the canonical power map plus `restarts` perturbed
    copies.  Among converged runs the lowest energy wins (ties toward the
    earlier run); an unconverged run is reported only when nothing
    converged.  Deterministic for a fixed config.  Non-convergence is
    reported through MinimizeResult.converged, not an exception.

    For p < 2 the discrete energy rewards concentrating the whole winding
    into a few grid cells (the kernel mass a concentrated profile carries
    near the diagonal is exactly what the discrete sum omits), so a run
    that escapes the symmetric critical point descends toward the
    admissibility wall and aborts there rather than converging.  The
    converged results this returns are the regular critical points; the
    concentration limit itself is out of scope.
    """
    base = power_map(config.n, config.degree_target)
    starts = [base]
    for r in range(1, config.restarts + 1):
        starts.append(perturb(base, _RESTART_AMPLITUDE, config.seed + r))
    best_converged = None
    best_any = None
    for start in starts:
        if _candidate_degree(start.phases) != config.degree_target:
            continue  # a perturbed start broke admissibility; skip it
        result = descend_from(start, config)
        if best_any is None or result.final_energy < best_any.final_energy:
            best_any = result
        if result.converged and (
            best_converged is None or result.final_energy < best_converged.final_energy
        ):
            best_converged = result
    if best_any is None:
        raise DomainError("no admissible starting map with the target degree")
    return best_converged if best_converged is not None else best_any


@dataclass(frozen=True)
class ScanRow:
    p: float
    min_energy: float
    identity_energy: float
    lower_bound: float
    converged: bool


def minimize_scan(p_values, base_config: MinimizeConfig) -> list[ScanRow]:
    """One minimize run per exponent, tabulated against the closed-form
    identity energy (a feasible degree-one competitor) and the winding
    lower bound."""
    rows = []
    for p in p_values:
        config = replace(base_config, p=float(p))
        result = minimize(config)
        rows.append(
            ScanRow(
                p=float(p),
                min_energy=result.final_energy,
                identity_energy=identity_energy_closed_form(float(p)),
                lower_bound=degree_lower_bound(float(p), config.degree_target),
                converged=result.converged,
            )
        )
    return rows
