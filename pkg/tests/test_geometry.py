import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from geodint import generators, geometry
from geodint.errors import SingularMetric

from conftest import fd_jacobian


class TestPullbackMetric:
    def test_identity_jacobian_is_isometry(self):
        g = geometry.pullback_metric(np.eye(2))
        assert np.array_equal(g, np.eye(2))

    def test_rectangular_diagonal(self):
        J = np.array([[2.0, 0.0], [0.0, 3.0], [0.0, 0.0]])
        g = geometry.pullback_metric(J)
        assert np.allclose(g, np.diag([4.0, 9.0]), atol=0.0)

    def test_matches_fd_metric_on_radial_warp(self, warp):
        g = geometry.pullback_metric(warp.jacobian(np.array([1.0, 0.0])))
        g_fd = geometry.metric_fd(warp, np.array([1.0, 0.0]))
        assert np.abs(g - g_fd).max() / np.abs(g).max() < 1e-5

    def test_fd_metric_agreement_100_random_points(self, warp, random_mlp):
        rng = np.random.default_rng(3)
        A = rng.normal(size=(5, 3))
        bundled = [
            generators.LinearGenerator(A, rng.normal(size=5)),
            warp,
            random_mlp,
            generators.make_lambertian(),
        ]
        for f in bundled:
            for _ in range(100):
                z = rng.normal(size=f.d_z)
                if f.kind == "radial_warp" and np.linalg.norm(z) < 0.3:
                    z = z + np.array([0.5, 0.5])
                g = geometry.pullback_metric(f.jacobian(z))
                g_fd = geometry.metric_fd(f, z)
                rel = np.abs(g - g_fd).max() / max(np.abs(g).max(), 1e-12)
                assert rel < 1e-5, f"{f.kind}: fd metric mismatch {rel}"


class TestMetricLogDet:
    def test_identity(self):
        assert geometry.metric_log_det(np.eye(2), ridge=0.0) == pytest.approx(0.0)

    def test_diagonal(self):
        val = geometry.metric_log_det(np.diag([4.0, 9.0]), ridge=0.0)
        assert val == pytest.approx(np.log(36.0), abs=1e-12)

    def test_matches_cofactor_oracle_on_toy_gan(self, toy_gan):
        # direct 2x2 determinant, the only case where expansion is trivial
        g = geometry.pullback_metric(toy_gan.jacobian(np.zeros(2)))
        g_r = g + 1e-9 * np.eye(2)
        det = g_r[0, 0] * g_r[1, 1] - g_r[0, 1] * g_r[1, 0]
        assert geometry.metric_log_det(g, ridge=1e-9) == pytest.approx(
            np.log(det), abs=1e-8
        )

    def test_singular_raises(self):
        with pytest.raises(SingularMetric):
            geometry.metric_log_det(np.diag([1.0, 0.0]), ridge=0.0)

    def test_invariant_under_ambient_rotation(self):
        rng = np.random.default_rng(9)
        for _ in range(20):
            J = rng.normal(size=(6, 3))
            Q, _ = np.linalg.qr(rng.normal(size=(6, 6)))
            a = geometry.metric_log_det(geometry.pullback_metric(J), ridge=0.0)
            b = geometry.metric_log_det(geometry.pullback_metric(Q @ J), ridge=0.0)
            assert abs(a - b) < 1e-8


class TestPullbackVector:
    def test_identity(self):
        b = geometry.pullback_vector(np.eye(2), np.array([1.0, 2.0]))
        assert np.allclose(b, [1.0, 2.0], atol=1e-14)

    def test_projects_onto_range(self):
        J = np.array([[2.0, 0.0], [0.0, 3.0], [0.0, 0.0]])
        b = geometry.pullback_vector(J, np.array([4.0, 9.0, 5.0]), ridge=0.0)
        # third ambient component is orthogonal to range(J) and is annihilated
        assert np.allclose(b, [2.0, 3.0], atol=1e-12)

    def test_singular_raises(self):
        J = np.array([[1.0, 1.0], [1.0, 1.0]])
        with pytest.raises(SingularMetric):
            geometry.pullback_vector(J, np.array([1.0, 0.0]), ridge=0.0)

    @settings(max_examples=60, deadline=None)
    @given(st.integers(min_value=0, max_value=2**32 - 1))
    def test_left_inverse_property(self, seed):
        # for any full-rank J and any v: pullback(J, J v) = v
        rng = np.random.default_rng(seed)
        J = rng.normal(size=(5, 2))
        if np.linalg.svd(J, compute_uv=False)[-1] < 1e-3:
            return
        v = rng.normal(size=2)
        b = geometry.pullback_vector(J, J @ v, ridge=0.0)
        assert np.linalg.norm(b - v) < 1e-9


class TestChristoffel:
    def test_linear_generator_is_flat(self):
        rng = np.random.default_rng(1)
        f = generators.LinearGenerator(rng.normal(size=(5, 3)))
        gamma = geometry.christoffel_fd(f, rng.normal(size=3), h=1e-4)
        assert np.abs(gamma).max() < 1e-6

    def test_pullback_identity_on_radial_warp(self, warp):
        # Gamma(v, v) equals the pullback of the second directional
        # difference of f, the embedded-submanifold identity
        rng = np.random.default_rng(42)
        for _ in range(50):
            z = rng.normal(size=2)
            r = np.linalg.norm(z)
            if r < 0.3:
                z = z / max(r, 1e-9) * (0.3 + rng.random())
            v = rng.normal(size=2)
            v /= np.linalg.norm(v)
            gamma = geometry.christoffel_fd(warp, z, h=1e-4)
            lhs = geometry.christoffel_contract(gamma, v)
            t = 1e-4
            H = (warp.forward(z + t * v) - 2 * warp.forward(z)
                 + warp.forward(z - t * v)) / t**2
            rhs = geometry.pullback_vector(warp.jacobian(z), H, ridge=0.0)
            assert np.linalg.norm(lhs - rhs) / (1.0 + np.linalg.norm(rhs)) < 1e-3

    def test_symmetric_in_lower_indices_on_toy_gan(self, toy_gan):
        rng = np.random.default_rng(5)
        for _ in range(100):
            z = rng.normal(size=2)
            gamma = geometry.christoffel_fd(toy_gan, z, h=1e-4)
            assert np.abs(gamma - np.swapaxes(gamma, 1, 2)).max() < 1e-8

    def test_singular_metric_raises(self):
        f = generators.LinearGenerator(np.array([[1.0, 1.0], [1.0, 1.0]]))
        with pytest.raises(SingularMetric):
            geometry.christoffel_fd(f, np.zeros(2))
