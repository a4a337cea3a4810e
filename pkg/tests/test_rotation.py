"""Rotation kernel tests against independent geometric oracles."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from sphericap.errors import NonFiniteError, NonUnitQuaternionError
from sphericap.rotation import (
    PHI_OPEN_EPS,
    Quaternion,
    RotationMatrix,
    SphericalAngles,
    ViewDirection,
    direction_from_angles,
    quat_from_view_angles,
    quat_to_dcm,
    relative_rotation,
    sat_phi,
    to_spherical,
    view_direction,
    wrap_theta,
)


def rodrigues_matrix(x, y, z, w):
    """Independent axis-angle construction of the same rotation."""
    vn = math.sqrt(x * x + y * y + z * z)
    if vn < 1e-15:
        return np.eye(3)
    angle = 2.0 * math.atan2(vn, w)
    ax, ay, az = x / vn, y / vn, z / vn
    K = np.array([[0.0, -az, ay], [az, 0.0, -ax], [-ay, ax, 0.0]])
    return np.eye(3) + math.sin(angle) * K + (1.0 - math.cos(angle)) * (K @ K)


def random_unit_quaternions(n, seed=0):
    rng = np.random.default_rng(seed)
    vecs = rng.normal(size=(n, 4))
    vecs /= np.linalg.norm(vecs, axis=1, keepdims=True)
    return [Quaternion(*row) for row in vecs]


class TestQuaternionIngest:
    def test_identity_accepted(self):
        q = Quaternion(0.0, 0.0, 0.0, 1.0)
        assert q.components() == (0.0, 0.0, 0.0, 1.0)

    def test_renormalizes_small_deviation(self):
        s = 1.0 + 5e-4
        q = Quaternion(0.0, 0.0, 0.0, s)
        assert q.w == pytest.approx(1.0, abs=1e-12)

    def test_rejects_large_deviation(self):
        with pytest.raises(NonUnitQuaternionError):
            Quaternion(0.0, 0.0, 0.0, 0.5)

    def test_rejects_non_finite(self):
        with pytest.raises(NonFiniteError):
            Quaternion(math.nan, 0.0, 0.0, 1.0)


class TestQuatToDcm:
    def test_identity_quaternion(self):
        R = quat_to_dcm(Quaternion(0.0, 0.0, 0.0, 1.0))
        np.testing.assert_array_equal(R.m, np.eye(3))

    def test_90deg_about_y_matches_rodrigues(self):
        s = math.sin(math.pi / 4)
        c = math.cos(math.pi / 4)
        R = quat_to_dcm(Quaternion(0.0, s, 0.0, c))
        np.testing.assert_allclose(R.m, rodrigues_matrix(0.0, s, 0.0, c), atol=1e-12)

    def test_1000_random_quaternions_match_rodrigues(self):
        worst = 0.0
        for q in random_unit_quaternions(1000, seed=7):
            R = quat_to_dcm(q)
            oracle = rodrigues_matrix(*q.components())
            worst = max(worst, float(np.abs(R.m - oracle).max()))
        assert worst < 1e-9

    def test_orthonormal_and_det_one(self):
        for q in random_unit_quaternions(200, seed=1):
            R = quat_to_dcm(q)
            np.testing.assert_allclose(R.m.T @ R.m, np.eye(3), atol=1e-9)
            assert abs(np.linalg.det(R.m) - 1.0) < 1e-9

    def test_double_cover(self):
        for q in random_unit_quaternions(100, seed=2):
            neg = Quaternion(-q.x, -q.y, -q.z, -q.w)
            np.testing.assert_allclose(
                quat_to_dcm(q).m, quat_to_dcm(neg).m, atol=1e-12
            )


class TestRelativeRotation:
    def test_self_alignment_is_identity(self):
        R0 = quat_to_dcm(random_unit_quaternions(1, seed=3)[0])
        np.testing.assert_allclose(relative_rotation(R0, R0).m, np.eye(3), atol=1e-12)

    def test_identity_baseline_passthrough(self):
        Rt = quat_to_dcm(random_unit_quaternions(1, seed=4)[0])
        np.testing.assert_allclose(
            relative_rotation(RotationMatrix.identity(), Rt).m, Rt.m, atol=1e-15
        )

    def test_reconstruction_identity(self):
        qs = random_unit_quaternions(100, seed=5)
        for qa, qb in zip(qs[::2], qs[1::2]):
            r0, rt = quat_to_dcm(qa), quat_to_dcm(qb)
            rel = relative_rotation(r0, rt)
            np.testing.assert_allclose(r0.m @ rel.m, rt.m, atol=1e-9)

    def test_recovers_right_factor(self):
        qs = random_unit_quaternions(100, seed=6)
        for qa, qb in zip(qs[::2], qs[1::2]):
            r0, x = quat_to_dcm(qa), quat_to_dcm(qb)
            composed = RotationMatrix(r0.m @ x.m)
            np.testing.assert_allclose(relative_rotation(r0, composed).m, x.m, atol=1e-9)


class TestViewDirection:
    def test_identity_gives_ez(self):
        v = view_direction(RotationMatrix.identity())
        assert (v.vx, v.vy, v.vz) == (0.0, 0.0, 1.0)

    def test_matches_matrix_vector_product(self):
        s = math.sin(math.pi / 4)
        c = math.cos(math.pi / 4)
        R = quat_to_dcm(Quaternion(s, 0.0, 0.0, c))
        v = view_direction(R)
        expected = R.m @ np.array([0.0, 0.0, 1.0])
        np.testing.assert_allclose([v.vx, v.vy, v.vz], expected, atol=1e-15)

    def test_unit_norm(self):
        for q in random_unit_quaternions(200, seed=8):
            v = view_direction(quat_to_dcm(q))
            assert abs(v.vx**2 + v.vy**2 + v.vz**2 - 1.0) < 1e-9


class TestToSpherical:
    def test_forward_axis(self):
        a = to_spherical(ViewDirection(0.0, 0.0, 1.0))
        assert (a.theta, a.phi) == (0.0, 0.0)

    def test_plus_x_axis(self):
        a = to_spherical(ViewDirection(1.0, 0.0, 0.0))
        assert a.theta == pytest.approx(math.pi / 2, abs=1e-15)
        assert a.phi == 0.0

    def test_round_trip_random_directions(self):
        rng = np.random.default_rng(9)
        vecs = rng.normal(size=(100_000, 3))
        vecs /= np.linalg.norm(vecs, axis=1, keepdims=True)
        for vx, vy, vz in vecs:
            if math.cos(math.asin(min(1.0, max(-1.0, vy)))) < 1e-6:
                continue
            a = to_spherical(ViewDirection(vx, vy, vz))
            r = direction_from_angles(a.theta, a.phi)
            assert max(abs(r.vx - vx), abs(r.vy - vy), abs(r.vz - vz)) < 1e-9

    def test_pole_theta_defined_as_zero(self):
        a = to_spherical(ViewDirection(0.0, 1.0, 0.0))
        assert a.theta == 0.0
        assert a.phi == pytest.approx(math.pi / 2)


class TestWrapTheta:
    def test_three_half_pi(self):
        assert wrap_theta(3 * math.pi / 2) == pytest.approx(-math.pi / 2, abs=1e-15)

    def test_zero_fixed_point(self):
        assert wrap_theta(0.0) == 0.0

    def test_pi_kept_at_upper_bound(self):
        assert wrap_theta(math.pi) == math.pi

    def test_minus_pi_folds_to_pi(self):
        assert wrap_theta(-math.pi) == math.pi

    def test_rejects_non_finite(self):
        with pytest.raises(NonFiniteError):
            wrap_theta(math.inf)

    @given(st.floats(min_value=-1e6, max_value=1e6))
    def test_range_and_congruence(self, theta):
        w = wrap_theta(theta)
        assert -math.pi < w <= math.pi
        # same angle modulo 2*pi
        assert math.isclose(
            math.fmod(w - theta, 2 * math.pi), 0.0, abs_tol=1e-6
        ) or math.isclose(abs(math.fmod(w - theta, 2 * math.pi)), 2 * math.pi, rel_tol=1e-9)

    @given(st.floats(min_value=-1e9, max_value=1e9))
    def test_idempotent_exactly(self, theta):
        w = wrap_theta(theta)
        assert wrap_theta(w) == w


class TestSatPhi:
    def test_in_range_passthrough(self):
        assert sat_phi(0.3) == 0.3

    def test_upper_clamp(self):
        assert sat_phi(2.0) == math.pi / 2

    def test_lower_clamp_is_open(self):
        v = sat_phi(-2.0)
        assert v == -math.pi / 2 + PHI_OPEN_EPS
        assert v > -math.pi / 2

    def test_rejects_non_finite(self):
        with pytest.raises(NonFiniteError):
            sat_phi(math.nan)

    @given(st.floats(min_value=-10.0, max_value=10.0))
    def test_range(self, phi):
        v = sat_phi(phi)
        assert -math.pi / 2 < v <= math.pi / 2


class TestQuatFromViewAngles:
    @settings(max_examples=200)
    @given(
        st.floats(min_value=-math.pi + 1e-9, max_value=math.pi),
        st.floats(min_value=-math.pi / 2 + 1e-6, max_value=math.pi / 2 - 1e-6),
    )
    def test_round_trip_through_pose_chain(self, theta, phi):
        q = quat_from_view_angles(theta, phi)
        v = view_direction(quat_to_dcm(q))
        a = to_spherical(v)
        assert abs(a.phi - phi) < 1e-9
        # longitude comparison is modular
        d = wrap_theta(a.theta - theta)
        assert abs(d) < 1e-9 or abs(abs(d) - 2 * math.pi) < 1e-9

    def test_unit_quaternion(self):
        q = quat_from_view_angles(1.0, 0.5)
        n = math.sqrt(q.x**2 + q.y**2 + q.z**2 + q.w**2)
        assert n == pytest.approx(1.0, abs=1e-12)
