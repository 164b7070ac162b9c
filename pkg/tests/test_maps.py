"""Grid maps: construction, winding numbers, perturbations, CSV round trips."""

import math

import numpy as np
import pytest

from fracmin import (
    AdmissibilityError,
    DomainError,
    GridMap,
    degree,
    identity_map,
    is_admissible,
    moebius_map,
    perturb,
    power_map,
    product_map,
    read_map_csv,
    rotated,
    wrap_angle,
    write_map_csv,
)


class TestWrap:
    def test_principal_interval(self):
        xs = np.array([0.0, 1.0, math.pi, -math.pi, 3.5, -3.5, 7.0, 100.0])
        w = wrap_angle(xs)
        assert np.all(w > -math.pi) and np.all(w <= math.pi)

    def test_tie_at_pi_maps_to_plus_pi(self):
        assert wrap_angle(np.array([math.pi]))[0] == math.pi
        assert wrap_angle(np.array([-math.pi]))[0] == math.pi

    def test_identity_on_interior(self):
        xs = np.array([-3.0, -0.5, 0.0, 0.5, 3.0])
        np.testing.assert_allclose(wrap_angle(xs), xs, atol=1e-15)


class TestGridMap:
    def test_minimum_size(self):
        with pytest.raises(DomainError):
            GridMap(np.zeros(7))

    def test_finiteness(self):
        phases = np.zeros(16)
        phases[3] = np.nan
        with pytest.raises(DomainError):
            GridMap(phases)

    def test_immutability(self):
        u = identity_map(16)
        with pytest.raises(ValueError):
            u.phases[0] = 1.0

    def test_theta_grid(self):
        u = identity_map(8)
        np.testing.assert_allclose(u.theta, 2.0 * math.pi * np.arange(8) / 8)


class TestConstructionsAndDegree:
    def test_identity(self):
        u = identity_map(8)
        np.testing.assert_allclose(u.phases, [k * math.pi / 4.0 for k in range(8)])
        assert degree(identity_map(64)) == 1

    @pytest.mark.parametrize("n,d", [(16, 0), (64, -3), (64, 2), (9, 4)])
    def test_power_map_degree(self, n, d):
        assert degree(power_map(n, d)) == d

    def test_power_map_size_guard(self):
        with pytest.raises(DomainError):
            power_map(8, 4)  # needs n > 8
        power_map(9, 4)  # boundary is admissible

    def test_degree_requires_gaps_below_pi(self):
        phases = np.zeros(8)
        phases[4:] = math.pi  # one gap of exactly pi
        with pytest.raises(AdmissibilityError):
            degree(GridMap(phases))
        assert not is_admissible(GridMap(phases))

    def test_degree_additivity_on_products(self):
        for d1, d2 in [(1, 1), (2, -3), (-1, -1), (0, 4)]:
            u, v = power_map(64, d1), power_map(64, d2)
            assert degree(product_map(u, v)) == d1 + d2

    def test_rotation_leaves_degree(self):
        u = power_map(64, 2)
        assert degree(rotated(u, 1.2345)) == 2

    def test_perturbed_identity_keeps_degree(self):
        u = perturb(identity_map(256), 0.3, 7)
        assert degree(u) == 1
        total = float(np.sum(u.gaps())) / (2.0 * math.pi)
        assert abs(total - 1.0) < 1e-9


class TestMoebius:
    def test_center_zero_is_identity(self):
        u = moebius_map(64, (0.0, 0.0))
        np.testing.assert_allclose(u.phases, identity_map(64).phases, atol=1e-12)

    @pytest.mark.parametrize("a", [(0.3, 0.0), (0.0, 0.5), (-0.4, 0.2), (0.6, -0.6)])
    def test_degree_one(self, a):
        assert degree(moebius_map(128, a)) == 1

    def test_accepts_complex(self):
        u = moebius_map(64, 0.3 + 0.1j)
        assert degree(u) == 1

    def test_boundary_rejected(self):
        with pytest.raises(DomainError):
            moebius_map(64, (1.0, 0.0))
        with pytest.raises(DomainError):
            moebius_map(64, (0.8, 0.8))

    def test_concentration_grows_with_radius(self):
        max_gaps = []
        for r in (0.0, 0.2, 0.4, 0.6):
            u = moebius_map(512, (r, 0.0))
            max_gaps.append(float(np.max(np.abs(u.gaps()))))
        assert all(a < b for a, b in zip(max_gaps, max_gaps[1:]))


class TestPerturb:
    def test_zero_amplitude_is_identity_operation(self):
        u = identity_map(32)
        v = perturb(u, 0.0, 123)
        assert np.array_equal(u.phases, v.phases)

    def test_deterministic(self):
        u = identity_map(32)
        a = perturb(u, 0.25, 9)
        b = perturb(u, 0.25, 9)
        assert np.array_equal(a.phases, b.phases)

    def test_different_seeds_differ(self):
        u = identity_map(32)
        assert not np.array_equal(perturb(u, 0.25, 1).phases, perturb(u, 0.25, 2).phases)

    def test_degree_stable_under_moderate_amplitude(self):
        u = perturb(power_map(256, 2), 0.2, 11)
        assert degree(u) == 2

    def test_negative_amplitude_rejected(self):
        with pytest.raises(DomainError):
            perturb(identity_map(32), -0.1, 0)


class TestCsv:
    def test_round_trip(self, tmp_path):
        u = perturb(moebius_map(64, (0.3, -0.1)), 0.05, 4)
        path = tmp_path / "map.csv"
        write_map_csv(u, path)
        v = read_map_csv(path)
        assert np.array_equal(u.phases, v.phases)

    def test_header_validation(self, tmp_path):
        path = tmp_path / "bad.csv"
        path.write_text("alpha,beta\n0,0\n")
        with pytest.raises(DomainError):
            read_map_csv(path)

    def test_grid_validation(self, tmp_path):
        path = tmp_path / "bad.csv"
        rows = ["theta,phase"] + [f"{0.1 * i},{0.0}" for i in range(16)]
        path.write_text("\n".join(rows) + "\n")
        with pytest.raises(DomainError):
            read_map_csv(path)

    def test_admissibility_validation(self, tmp_path):
        n = 8
        theta = 2.0 * math.pi * np.arange(n) / n
        phases = np.zeros(n)
        phases[4:] = math.pi
        path = tmp_path / "bad.csv"
        rows = ["theta,phase"] + [f"{t:.17g},{p:.17g}" for t, p in zip(theta, phases)]
        path.write_text("\n".join(rows) + "\n")
        with pytest.raises(AdmissibilityError):
            read_map_csv(path)

    def test_too_few_rows(self, tmp_path):
        path = tmp_path / "tiny.csv"
        path.write_text("theta,phase\n0,0\n")
        with pytest.raises(DomainError):
            read_map_csv(path)
