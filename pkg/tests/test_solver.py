from dataclasses import replace

import numpy as np
import pytest

from geodint import density, evaluation, generators, geometry, solver
from geodint.errors import DegenerateSegment, DimensionMismatch, InvalidConfig


class TestStraightZ:
    def test_three_points(self):
        curve = solver.straight_z(np.zeros(2), np.array([1.0, 1.0]), 3)
        assert np.allclose(curve.points, [[0, 0], [0.5, 0.5], [1, 1]], atol=0.0)

    def test_degenerate_endpoints(self):
        z = np.array([0.7, -0.2])
        curve = solver.straight_z(z, z, 5)
        assert np.allclose(curve.points, np.tile(z, (5, 1)), atol=0.0)

    def test_default_k_is_35(self):
        assert solver.SolverConfig().K == 35

    def test_dimension_mismatch(self):
        with pytest.raises(DimensionMismatch):
            solver.straight_z(np.zeros(2), np.zeros(3), 5)


class TestStep:
    def test_straight_curve_on_linear_generator_is_stationary(self, prior2):
        rng = np.random.default_rng(0)
        f = generators.LinearGenerator(rng.normal(size=(4, 2)))
        curve = solver.straight_z(np.array([-1.0, 0.5]), np.array([2.0, -0.3]), 9)
        cfg = solver.SolverConfig(K=9, mu=0.0)
        new_curve, max_norm = solver.step(f, prior2, curve, cfg)
        # a^k vanishes up to the last ulp of the linspace chords
        assert max_norm < 1e-15
        assert np.allclose(new_curve.points, curve.points, atol=1e-15)

    def test_energy_decreases_from_bent_initialization(self, warp, prior2):
        cfg = solver.SolverConfig(K=21, eta=1e-3, mu=0.0, init_bump=0.1)
        curve = solver.initial_curve(np.array([1.2, 0.0]), np.array([0.0, 1.2]), cfg)
        e0 = solver.discrete_energy(warp.forward_many(curve.points))
        new_curve, _ = solver.step(warp, prior2, curve, cfg)
        e1 = solver.discrete_energy(warp.forward_many(new_curve.points))
        assert e1 < e0

    def test_regularizer_only_update_in_closed_form(self, prior2):
        # identity generator: b = 0 on a straight curve, and the update
        # reduces to -eta * mu * z per interior point
        f = generators.LinearGenerator(np.eye(2))
        cfg = solver.SolverConfig(K=7, eta=0.01, mu=0.5)
        curve = solver.straight_z(np.array([-1.0, -1.0]), np.array([1.0, 1.0]), 7)
        new_curve, _ = solver.step(f, prior2, curve, cfg)
        expected = curve.points[1:-1] * (1.0 - cfg.eta * cfg.mu)
        assert np.allclose(new_curve.points[1:-1], expected, atol=1e-9)

    def test_degenerate_segment_raises(self, warp, prior2):
        pts = solver.straight_z(np.array([0.5, 0.5]), np.array([1.5, 0.5]), 5).points
        pts[2] = pts[1]  # collapse one ambient chord
        cfg = solver.SolverConfig(K=5)
        with pytest.raises(DegenerateSegment):
            solver.step(warp, prior2, solver.DiscreteCurve(pts), cfg)


class TestSolve:
    def test_flat_metric_keeps_straight_line(self, prior2):
        rng = np.random.default_rng(7)
        f = generators.LinearGenerator(rng.normal(size=(5, 2)))
        z_a, z_b = rng.normal(size=2), rng.normal(size=2)
        cfg = solver.SolverConfig(K=35, mu=0.0)
        curve, trace = solver.solve(f, prior2, z_a, z_b, cfg)
        straight = solver.straight_z(z_a, z_b, 35)
        assert trace.termination == "converged"
        assert np.abs(curve.points - straight.points).max() < 1e-6

    def test_endpoints_pinned_bit_identical(self, warp, prior2):
        z_a, z_b = np.array([-1.2, 0.0]), np.array([1.2, 0.0])
        cfg = solver.SolverConfig(K=21, eta=0.02, mu=0.05, max_iters=200,
                                  init_bump=0.1, resample_every=20)
        curve, _ = solver.solve(warp, prior2, z_a, z_b, cfg)
        assert np.array_equal(curve.points[0], z_a)
        assert np.array_equal(curve.points[-1], z_b)

    def test_degenerate_endpoints_return_constant_curve(self, warp, prior2):
        z = np.array([0.9, 0.1])
        curve, trace = solver.solve(warp, prior2, z, z, solver.SolverConfig(K=11))
        assert trace.termination == "converged"
        assert trace.iterations == 0
        assert np.allclose(curve.points, np.tile(z, (11, 1)), atol=0.0)
        assert solver.discrete_energy(warp.forward_many(curve.points)) == 0.0

    def test_monotone_energy_descent_small_eta(self, warp, prior2):
        cfg = solver.SolverConfig(K=35, eta=1e-3, mu=0.0, max_iters=400, tol=1e-9)
        _, trace = solver.solve(warp, prior2, np.array([1.2, 0.0]),
                                np.array([0.0, 1.2]), cfg)
        diffs = np.diff(trace.energy)
        assert np.all(diffs <= 1e-9)

    def test_reparametrization_invariance_of_final_length(self, warp, prior2):
        z_a, z_b = np.array([1.2, 0.0]), np.array([0.0, 1.2])
        cfg1 = solver.SolverConfig(K=35, eta=0.02, mu=0.0, max_iters=4000, tol=1e-7)
        cfg2 = replace(cfg1, eta=0.01, max_iters=8000)
        c1, _ = solver.solve(warp, prior2, z_a, z_b, cfg1)
        c2, _ = solver.solve(warp, prior2, z_a, z_b, cfg2)
        l1 = evaluation.curve_length(warp, c1)
        l2 = evaluation.curve_length(warp, c2)
        assert abs(l1 - l2) / l1 < 0.005

    def test_update_matches_geodesic_equation_residual(self, warp):
        # on a constant-speed curve, b^k = (z'' + Gamma(z', z')) dt^2 / c
        K = 35
        t = np.linspace(0.0, 1.0, 401)
        theta = (np.pi / 2) * t
        dense = 1.2 * np.stack([np.cos(theta), np.sin(theta)], axis=1)
        Z = dense[np.linspace(0, 400, K).astype(int)].copy()
        for _ in range(6):
            Z = solver.resample_uniform_chord(warp, Z)
        b, X = solver.pulled_back_acceleration(warp, Z, ridge=0.0)
        c = np.linalg.norm(np.diff(X, axis=0), axis=1).mean()
        dt = 1.0 / (K - 1)
        for i in range(1, K - 1):
            zdd = (Z[i + 1] - 2 * Z[i] + Z[i - 1]) / dt**2
            zd = (Z[i + 1] - Z[i - 1]) / (2 * dt)
            gamma = geometry.christoffel_fd(warp, Z[i], h=1e-4)
            residual = zdd + geometry.christoffel_contract(gamma, zd)
            err = np.linalg.norm(b[i - 1] * c / dt**2 - residual)
            assert err / (1.0 + np.linalg.norm(residual)) < 2e-3

    def test_trace_records_are_bounded_by_max_iters(self, warp, prior2):
        cfg = solver.SolverConfig(K=15, eta=0.02, mu=0.0, max_iters=37, tol=1e-12)
        _, trace = solver.solve(warp, prior2, np.array([1.2, 0.0]),
                                np.array([0.0, 1.2]), cfg)
        assert trace.iterations <= 37
        assert trace.termination == "max_iters"


class TestInterpolate:
    def test_straight_z_method_matches_op(self, warp, prior2):
        z_a, z_b = np.array([-1.0, 0.2]), np.array([0.8, 0.9])
        cfg = solver.SolverConfig(K=11)
        curve = solver.interpolate("straight_z", warp, prior2, z_a, z_b, cfg)
        assert np.array_equal(curve.points, solver.straight_z(z_a, z_b, 11).points)

    def test_geod_equals_solve_with_zero_mu(self, warp, prior2):
        z_a, z_b = np.array([1.2, 0.0]), np.array([0.0, 1.2])
        cfg = solver.SolverConfig(K=15, eta=0.02, mu=0.7, max_iters=300)
        via_method = solver.interpolate("geod", warp, prior2, z_a, z_b, cfg)
        direct, _ = solver.solve(warp, prior2, z_a, z_b, replace(cfg, mu=0.0))
        assert np.array_equal(via_method.points, direct.points)

    def test_geod_reg_requires_positive_mu(self, warp, prior2):
        cfg = solver.SolverConfig(K=11, mu=0.0)
        with pytest.raises(InvalidConfig):
            solver.interpolate("geod_reg", warp, prior2,
                               np.array([1.0, 0.0]), np.array([0.0, 1.0]), cfg)

    def test_unknown_method(self, warp, prior2):
        with pytest.raises(InvalidConfig, match="straight_z, geod, geod_reg"):
            solver.interpolate("spline", warp, prior2,
                               np.array([1.0, 0.0]), np.array([0.0, 1.0]),
                               solver.SolverConfig())

    def test_hyphenated_names_accepted(self, warp, prior2):
        cfg = solver.SolverConfig(K=9)
        curve = solver.interpolate("geod-reg", warp, prior2,
                                   np.array([1.2, 0.0]), np.array([0.0, 1.2]),
                                   replace(cfg, mu=0.01, max_iters=5))
        assert curve.K == 9


class TestSolverConfig:
    @pytest.mark.parametrize("kwargs", [
        {"K": 2}, {"eta": 0.0}, {"mu": -0.1}, {"tol": 0.0},
        {"max_iters": 0}, {"resample_every": -1}, {"init_bump": -0.5},
        {"max_step": 0.0},
    ])
    def test_invalid_configs_rejected(self, kwargs):
        with pytest.raises(InvalidConfig):
            solver.SolverConfig(**kwargs)
