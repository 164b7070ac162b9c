"""Quadrature engine against closed-form antiderivatives and the Beta oracle."""

import math

import numpy as np
import pytest

from fracmin import (
    ConvergenceError,
    DomainError,
    QuadratureSpec,
    beta,
    integral_sin_power,
    integrate_singular,
)
from fracmin.quadrature import _tanh_sinh_estimates

MIDPOINT = QuadratureSpec(scheme="midpoint_refined")


class TestSpec:
    def test_defaults(self):
        spec = QuadratureSpec()
        assert spec.scheme == "double_exponential"
        assert spec.level_or_nodes == 12
        assert spec.abs_tol == 1e-10

    @pytest.mark.parametrize(
        "kwargs",
        [
            {"scheme": "gauss"},
            {"level_or_nodes": 0},
            {"abs_tol": 0.0},
            {"abs_tol": -1e-3},
        ],
    )
    def test_validation(self, kwargs):
        with pytest.raises(DomainError):
            QuadratureSpec(**kwargs)


class TestIntegrateSingular:
    def test_constant(self):
        value = integrate_singular(lambda x: np.ones_like(x), 0.0, math.pi)
        assert value == pytest.approx(math.pi, abs=1e-12)

    def test_inverse_sqrt(self):
        # antiderivative 2 sqrt(t)
        value = integrate_singular(lambda t: t**-0.5, 0.0, 1.0)
        assert value == pytest.approx(2.0, abs=1e-10)

    @pytest.mark.parametrize("alpha", [-0.9, -0.5, -0.1, 0.0, 0.5])
    def test_power_law(self, alpha):
        value = integrate_singular(lambda t: t**alpha, 0.0, 1.0)
        assert value == pytest.approx(1.0 / (alpha + 1.0), abs=1e-9)

    def test_interior_singularity_by_reflection(self):
        # |2t-1|^(p-2) on (0,1): each half reflected onto (0, 1/2) puts the
        # singular point at 0; the antiderivative gives 1/(p-1) in total
        for p in (1.2, 1.5, 1.8):
            halves = 2.0 * integrate_singular(lambda tau: (2.0 * tau) ** (p - 2.0), 0.0, 0.5)
            assert halves == pytest.approx(1.0 / (p - 1.0), abs=1e-9)

    def test_smooth_scheme_agreement(self):
        integrands = [
            (np.sin, 0.0, math.pi, 2.0),
            (np.exp, -1.0, 2.0, math.e**2 - math.exp(-1.0)),
            (lambda x: x**3 - 2.0 * x, 0.0, 2.0, 0.0),
            (lambda x: 1.0 / (1.0 + x * x), 0.0, 1.0, math.pi / 4.0),
        ]
        for f, a, b, exact in integrands:
            de = integrate_singular(f, a, b)
            mid = integrate_singular(f, a, b, MIDPOINT)
            assert abs(de - mid) <= 10.0 * 1e-10
            assert de == pytest.approx(exact, abs=1e-9)

    def test_midpoint_cannot_resolve_endpoint_singularity(self):
        with pytest.raises(ConvergenceError):
            integrate_singular(lambda t: t**-0.5, 0.0, 1.0, MIDPOINT)

    def test_nonconvergence_at_low_level(self):
        tight = QuadratureSpec(level_or_nodes=2, abs_tol=1e-14)
        with pytest.raises(ConvergenceError):
            integrate_singular(lambda t: np.cos(7.0 * t) * t**-0.3, 0.0, 1.0, tight)

    def test_callback_errors_propagate(self):
        class Boom(RuntimeError):
            pass

        def bad(_):
            raise Boom("integrand failure")

        with pytest.raises(Boom):
            integrate_singular(bad, 0.0, 1.0)

    def test_nonfinite_integrand_rejected(self):
        with pytest.raises(DomainError):
            integrate_singular(lambda t: np.full_like(t, np.inf), 0.0, 1.0)

    def test_bad_interval(self):
        with pytest.raises(DomainError):
            integrate_singular(np.sin, 1.0, 1.0)
        with pytest.raises(DomainError):
            integrate_singular(np.sin, 2.0, 1.0)

    def test_deterministic(self):
        spec = QuadratureSpec()
        values = {integrate_singular(lambda t: t**-0.25, 0.0, 2.0, spec) for _ in range(5)}
        assert len(values) == 1


class TestIntegralSinPower:
    def test_p2_is_pi(self):
        assert integral_sin_power(2.0) == pytest.approx(math.pi, abs=1e-12)

    def test_beta_oracle(self):
        # integral equals B((p-1)/2, 1/2)
        for p in (1.1, 1.3, 1.5, 1.7, 1.9, 1.99):
            assert integral_sin_power(p) == pytest.approx(beta(0.5 * (p - 1.0), 0.5), abs=1e-9)

    def test_beta_integral_consistency_small_exponents(self):
        # B(a, 1/2) = integral of sin^(2a-1); exercises a down to 0.05
        for a in (0.05, 0.1, 0.25, 0.5):
            p = 2.0 * a + 1.0
            assert integral_sin_power(p) == pytest.approx(beta(a, 0.5), rel=1e-9)

    def test_monotone_decreasing_in_p(self):
        ps = np.linspace(1.02, 2.0, 50)
        values = [integral_sin_power(float(p)) for p in ps]
        assert all(a > b for a, b in zip(values, values[1:]))

    def test_convergence_order(self):
        # each level halves h; the error against the Beta oracle must drop
        # by 10x or more per level until it is below 1e-10
        oracle = beta(0.1, 0.5)
        estimates = _tanh_sinh_estimates(
            lambda x: np.sin(x) ** (1.2 - 2.0), 0.0, 0.5 * math.pi, 6
        )
        errors = [abs(2.0 * est - oracle) for est in estimates]
        for coarse, fine in zip(errors, errors[1:]):
            if coarse <= 1e-10:
                break
            assert fine <= coarse / 10.0

    @pytest.mark.parametrize("bad", [0.5, 1.0, 2.5, math.nan])
    def test_domain(self, bad):
        with pytest.raises(DomainError):
            integral_sin_power(bad)
