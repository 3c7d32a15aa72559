"""Critical locus of f/||f||: residual forms, projection Jacobian, searches."""

import math

import numpy as np
import pytest

from helpers import fd_direction_jacobian, off_variety_points, poly, polar_curve_angle_roots
from milnorfib import (
    MapGerm,
    OnVarietyError,
    Polynomial,
    critical_points_on_sphere,
    gram_residual,
    link_points,
    omega,
    parallel_residual,
    projection_jacobian,
    projection_jacobian_tangent_svals,
    tangential_residual,
)
from milnorfib.gallery import milnor_nonfibering_polar_radius


class TestParallelResidual:
    def test_nonfibering_tangential_form(self, germ_ex2):
        residual = parallel_residual(germ_ex2)
        # (x^2 + y^2)^2 - x^2 y
        assert residual == poly(2, {(4, 0): 1, (2, 2): 2, (0, 4): 1, (2, 1): -1})

    def test_square_germ_tangential_form(self, germ_a):
        # 2 (x^2 + y^2)^2: strictly positive off the origin, so no critical points
        assert parallel_residual(germ_a) == poly(2, {(4, 0): 2, (2, 2): 4, (0, 4): 2})

    def test_conjugate_product_gram_value(self, germ_d):
        g = gram_residual(germ_d)
        x = np.array([1.0, 0.0, 1.0, 0.0]) / math.sqrt(2.0)
        assert g.evaluate(x) == pytest.approx(0.25, abs=1e-14)

    def test_tangential_needs_two_variables(self, germ_d):
        with pytest.raises(ValueError):
            tangential_residual(germ_d)

    def test_gram_residual_nearly_nonnegative(self, germ_b, germ_d):
        rng = np.random.default_rng(21)
        for germ in (germ_b, germ_d):
            g = gram_residual(germ)
            w = omega(germ)
            for _ in range(100):
                x = rng.standard_normal(germ.num_vars)
                scale = max(
                    1.0,
                    float(np.linalg.norm(w.evaluate(x)) * np.linalg.norm(x)) ** 2,
                )
                assert g.evaluate(x) >= -1e-12 * scale

    def test_gram_and_minors_vanish_together(self, germ_ex2):
        # Cross-check: the single Gram equation carries the same zero set as
        # the full set of 2x2 minors of (omega(x), x).
        w = omega(germ_ex2)
        result = critical_points_on_sphere(germ_ex2, 0.2, n_starts=120, seed=5)
        for point in result.points:
            x = np.array(point)
            wx = w.evaluate(x)
            for i in range(2):
                for j in range(i + 1, 2):
                    minor = wx[i] * x[j] - wx[j] * x[i]
                    assert abs(minor) <= 1e-10


class TestProjectionJacobian:
    def test_square_germ_closed_form(self, germ_a):
        jac = projection_jacobian(germ_a, [1.0, 0.0])
        assert jac == pytest.approx(np.array([[0.0, 0.0], [0.0, 2.0]]), abs=1e-15)

    def test_zero_q_gives_zero_first_row(self, germ_b):
        # Q = x y^2 vanishes on the x-axis, so the first row factor -Q is 0.
        jac = projection_jacobian(germ_b, [0.8, 0.0])
        assert jac[0] == pytest.approx(np.zeros(2), abs=1e-15)

    def test_matches_finite_differences(self, germ_ex2):
        x = [0.5, 0.5]
        closed = projection_jacobian(germ_ex2, x)
        assert closed == pytest.approx(fd_direction_jacobian(germ_ex2, x), abs=1e-6)

    def test_matches_finite_differences_many_germs(self, germ_a, germ_b, germ_d, germ_ex2):
        for germ in (germ_a, germ_b, germ_d, germ_ex2):
            for k, x in enumerate(off_variety_points(germ, 0.75, 25, seed=31)):
                closed = projection_jacobian(germ, x)
                fd = fd_direction_jacobian(germ, x)
                assert closed == pytest.approx(fd, abs=1e-6), (germ, k)

    def test_on_variety_rejected(self, germ_d):
        with pytest.raises(OnVarietyError):
            projection_jacobian(germ_d, [1.0, 0.0, 0.0, 0.0])

    def test_ambient_matrix_has_rank_at_most_one(self, germ_a):
        jac = projection_jacobian(germ_a, [0.3, 0.4])
        svals = np.linalg.svd(jac, compute_uv=False)
        assert svals[-1] == pytest.approx(0.0, abs=1e-12)


class TestCriticalPoints:
    def test_nonfibering_germ_four_points(self, germ_ex2):
        result = critical_points_on_sphere(germ_ex2, 0.2, n_starts=200, seed=7)
        assert len(result.points) == 4
        expected = sorted(polar_curve_angle_roots(0.2))
        angles = sorted(math.atan2(p[1], p[0]) % (2 * math.pi) for p in result.points)
        assert angles == pytest.approx(expected, abs=1e-8)
        assert result.multistart_count == 200
        # every reported point sits on the sphere and on the critical curve
        residual_poly = parallel_residual(germ_ex2)
        for point in result.points:
            assert np.linalg.norm(point) == pytest.approx(0.2, abs=1e-10 * 0.2)
            assert abs(residual_poly.evaluate(point)) <= 1e-10
        assert not any(result.omega_zero_flags)

    def test_restricted_jacobian_vanishes_at_critical_points(self, germ_ex2):
        result = critical_points_on_sphere(germ_ex2, 0.2, n_starts=200, seed=7)
        for point in result.points:
            svals = projection_jacobian_tangent_svals(germ_ex2, point)
            assert svals.min() <= 1e-6
            assert svals.max() <= 1e-6  # the whole restricted row vanishes

    def test_square_germ_empty_at_all_radii(self, germ_a):
        for eps in (0.1, 0.5, 1.0):
            result = critical_points_on_sphere(germ_a, eps, n_starts=100, seed=3)
            assert result.points == ()

    def test_square_germ_direction_map_regular(self, germ_a):
        # With an empty critical set the restricted Jacobian keeps a positive
        # floor on the sphere (here its norm is exactly 2 everywhere).
        rng = np.random.default_rng(5)
        for _ in range(50):
            x = rng.standard_normal(2)
            x /= np.linalg.norm(x)
            svals = projection_jacobian_tangent_svals(germ_a, x)
            assert svals.max() > 1.0

    def test_conjugate_product_empty(self, germ_d):
        result = critical_points_on_sphere(germ_d, 1.0, n_starts=200, seed=5)
        assert result.points == ()

    def test_deterministic(self, germ_ex2):
        a = critical_points_on_sphere(germ_ex2, 0.2, n_starts=64, seed=9)
        b = critical_points_on_sphere(germ_ex2, 0.2, n_starts=64, seed=9)
        assert a == b

    def test_points_pairwise_separated(self, germ_ex2):
        result = critical_points_on_sphere(germ_ex2, 0.2, n_starts=200, seed=7)
        pts = [np.array(p) for p in result.points]
        for i in range(len(pts)):
            for j in range(i + 1, len(pts)):
                assert np.linalg.norm(pts[i] - pts[j]) > result.merge_radius


class TestLinkPoints:
    def test_square_germ_has_empty_link(self, germ_a):
        assert link_points(germ_a, 1.0, n=60, seed=1).points == ()

    def test_conjugate_product_link_is_two_circles(self, germ_d):
        sample = link_points(germ_d, 1.0, n=60, seed=1)
        assert sample.points
        scale = 1e-10 * 2.0  # coefficient scale of the germ at radius 1
        for point, f_norm in zip(sample.points, sample.f_norms):
            assert f_norm <= scale
            assert np.linalg.norm(point) == pytest.approx(1.0, abs=1e-10)
            z1 = math.hypot(point[0], point[1])
            z2 = math.hypot(point[2], point[3])
            assert min(z1, z2) <= 1e-8

    def test_nonfibering_link_empty_on_small_sphere(self, germ_ex2):
        assert link_points(germ_ex2, 0.5, n=60, seed=1).points == ()


class TestPolarRadius:
    def test_at_right_angle(self):
        assert milnor_nonfibering_polar_radius(math.pi / 2) == pytest.approx(0.0, abs=1e-16)

    def test_at_quarter_turn(self):
        assert milnor_nonfibering_polar_radius(math.pi / 4) == pytest.approx(
            math.sqrt(2.0) / 4.0, abs=1e-15
        )

    def test_maximum_radius(self):
        theta_star = math.asin(1.0 / math.sqrt(3.0))
        r_star = milnor_nonfibering_polar_radius(theta_star)
        assert r_star == pytest.approx(2.0 / (3.0 * math.sqrt(3.0)), abs=1e-15)
        thetas = np.linspace(0.0, 2.0 * math.pi, 2000)
        assert all(milnor_nonfibering_polar_radius(t) <= r_star + 1e-12 for t in thetas)

    def test_curve_satisfies_tangential_residual(self, germ_ex2):
        residual = parallel_residual(germ_ex2)
        for theta in np.linspace(0.1, math.pi - 0.1, 50):
            r = milnor_nonfibering_polar_radius(theta)
            x, y = r * math.cos(theta), r * math.sin(theta)
            assert abs(residual.evaluate([x, y])) <= 1e-14
