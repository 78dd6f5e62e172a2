"""Tests for the world -> pixel projection chain."""

import math

import numpy as np
import pytest
from pydantic import ValidationError

from src.dynamics.base import VehicleState
from src.geometry.camera import CameraIntrinsics, CameraPose, PixelCoord
from src.geometry.mount import CameraMount
from src.geometry.projection import (
    composed_matrix,
    pose_from_rotation,
    project_points,
    project_trajectory,
    rotation_matrix,
    transform_matrix,
    world_to_pixel,
)

pytestmark = pytest.mark.unit


def _printed_rotation(phi, theta, psi):
    r_u = np.array([[1, 0, 0], [0, math.cos(phi), -math.sin(phi)], [0, math.sin(phi), math.cos(phi)]])
    r_v = np.array([[math.cos(theta), 0, math.sin(theta)], [0, 1, 0], [-math.sin(theta), 0, math.cos(theta)]])
    r_w = np.array([[math.cos(psi), -math.sin(psi), 0], [math.sin(psi), math.cos(psi), 0], [0, 0, 1]])
    return r_w @ r_v @ r_u


def _random_pose(rng, spread=10.0):
    roll, pitch, yaw = rng.uniform(-math.pi, math.pi, 3)
    x, y, z = rng.uniform(-spread, spread, 3)
    return CameraPose(roll=roll, pitch=pitch, yaw=yaw, position=(x, y, z))


def _points_ahead(rng, pose, n, min_depth=1.0):
    """World points with camera depth >= min_depth."""
    r = rotation_matrix(pose)
    robot = np.column_stack([rng.uniform(min_depth, 20.0, n), rng.uniform(-5, 5, n), rng.uniform(-5, 5, n)])
    return pose.position_array + robot @ r


class TestRotationMatrix:
    def test_zero_angles_is_identity(self):
        assert np.array_equal(rotation_matrix(CameraPose()), np.eye(3))

    def test_roll_only_rotates_about_u(self):
        r = rotation_matrix(CameraPose(roll=math.pi / 2))
        assert np.allclose(r @ np.array([0.0, 1.0, 0.0]), [0.0, 0.0, 1.0], atol=1e-15)

    def test_matches_independent_product(self):
        r = rotation_matrix(CameraPose(roll=0.1, pitch=0.2, yaw=0.3))
        assert np.allclose(r, _printed_rotation(0.1, 0.2, 0.3), rtol=0, atol=1e-15)

    def test_orthonormal_for_random_angles(self, rng):
        for roll, pitch, yaw in rng.uniform(-math.pi, math.pi, (1000, 3)):
            r = rotation_matrix(CameraPose(roll=roll, pitch=pitch, yaw=yaw))
            assert np.max(np.abs(r.T @ r - np.eye(3))) <= 1e-12
            assert abs(np.linalg.det(r) - 1.0) <= 1e-12

    def test_pose_from_rotation_round_trip(self, rng):
        for roll, yaw in rng.uniform(-3.0, 3.0, (200, 2)):
            pitch = rng.uniform(-1.5, 1.5)
            r = rotation_matrix(CameraPose(roll=roll, pitch=pitch, yaw=yaw))
            recovered = pose_from_rotation(r, (0.0, 0.0, 0.0))
            assert np.allclose(rotation_matrix(recovered), r, atol=1e-12)

    def test_pose_from_rotation_gimbal_lock(self):
        r = rotation_matrix(CameraPose(roll=0.0, pitch=math.pi / 2, yaw=0.4))
        recovered = pose_from_rotation(r, (1.0, 2.0, 3.0))
        assert np.allclose(rotation_matrix(recovered), r, atol=1e-12)
        assert recovered.position == (1.0, 2.0, 3.0)


class TestWorldToPixel:
    def test_reference_point(self, default_intrinsics):
        pixel = world_to_pixel((10.0, 0.0, 0.0), CameraPose(), default_intrinsics)
        assert pixel.u == 16.0
        assert pixel.v == 48.0
        assert pixel.in_frame
        assert not pixel.behind_camera

    def test_composed_matrix_reproduces_film_coordinates(self, default_intrinsics):
        t = composed_matrix(CameraPose(), default_intrinsics, depth=10.0)
        assert t.shape == (2, 4)
        assert t @ np.array([10.0, 0.0, 0.0, 1.0]) == pytest.approx([80.0, 64.0], abs=1e-12)

    def test_composed_matrix_agrees_with_projection(self, rng, default_intrinsics):
        for _ in range(100):
            pose = _random_pose(rng)
            point = _points_ahead(rng, pose, 1)[0]
            depth = (transform_matrix(pose) @ np.append(point, 1.0))[2]
            film = composed_matrix(pose, default_intrinsics, depth) @ np.append(point, 1.0)
            pixel = world_to_pixel(point, pose, default_intrinsics)
            assert pixel.u == pytest.approx(80.0 - film[1], abs=1e-9)
            assert pixel.v == pytest.approx(128.0 - film[0], abs=1e-9)

    def test_composed_matrix_rejects_zero_depth(self, default_intrinsics):
        with pytest.raises(ValueError):
            composed_matrix(CameraPose(), default_intrinsics, depth=0.0)

    def test_point_at_camera_is_degenerate(self, default_intrinsics):
        pixel = world_to_pixel((0.0, 0.0, 0.0), CameraPose(), default_intrinsics)
        assert pixel.behind_camera
        assert not pixel.in_frame
        assert math.isnan(pixel.u) and math.isnan(pixel.v)

    def test_point_behind_camera(self, default_intrinsics):
        pixel = world_to_pixel((-5.0, 0.0, 0.0), CameraPose(), default_intrinsics)
        assert pixel.behind_camera
        assert not pixel.in_frame

    def test_point_outside_film(self, default_intrinsics):
        pixel = world_to_pixel((10.0, 0.0, 20.0), CameraPose(), default_intrinsics)
        assert not pixel.behind_camera
        assert not pixel.in_frame

    def test_translation_equivariance(self, rng, default_intrinsics):
        for _ in range(1000):
            pose = _random_pose(rng)
            point = _points_ahead(rng, pose, 1)[0]
            shift = rng.uniform(-10, 10, 3)
            moved = CameraPose(
                roll=pose.roll, pitch=pose.pitch, yaw=pose.yaw, position=tuple(pose.position_array + shift)
            )
            a = world_to_pixel(point, pose, default_intrinsics)
            b = world_to_pixel(point + shift, moved, default_intrinsics)
            assert abs(a.u - b.u) <= 1e-9 and abs(a.v - b.v) <= 1e-9

    def test_perspective_homogeneity(self, rng, default_intrinsics):
        for _ in range(1000):
            pose = _random_pose(rng)
            point = _points_ahead(rng, pose, 1)[0]
            k = rng.uniform(0.5, 3.0)
            scaled = pose.position_array + k * (point - pose.position_array)
            a = world_to_pixel(point, pose, default_intrinsics)
            b = world_to_pixel(scaled, pose, default_intrinsics)
            assert abs(a.u - b.u) <= 1e-9 and abs(a.v - b.v) <= 1e-9

    def test_vectorized_matches_scalar(self, rng, default_intrinsics):
        pose = _random_pose(rng)
        points = rng.uniform(-20, 20, (50, 3))
        batch = project_points(points, pose, default_intrinsics)
        for i, point in enumerate(points):
            single = world_to_pixel(point, pose, default_intrinsics)
            assert batch.in_frame[i] == single.in_frame
            assert batch.behind_camera[i] == single.behind_camera
            if not single.behind_camera:
                assert batch.u[i] == single.u and batch.v[i] == single.v

    def test_project_points_keeps_leading_shape(self, default_intrinsics):
        pixels = project_points(np.ones((4, 5, 3)), CameraPose(), default_intrinsics)
        assert pixels.u.shape == (4, 5)
        assert pixels.in_frame.shape == (4, 5)


class TestProjectTrajectory:
    def test_length_preserved(self, rng, default_intrinsics):
        pose = CameraMount().pose_for(VehicleState())
        for n in (1, 7, 60):
            states = [VehicleState(x=x, y=y) for x, y in rng.uniform(-10, 10, (n, 2))]
            assert len(project_trajectory(states, pose, default_intrinsics)) == n

    def test_rejects_empty(self, default_intrinsics):
        with pytest.raises(ValueError):
            project_trajectory([], CameraPose(), default_intrinsics)

    def test_state_at_camera_position_is_degenerate(self, default_intrinsics):
        mount = CameraMount(pitch_deg=0.0)
        state = VehicleState(x=2.0, y=-1.0, yaw=0.7)
        pixels = project_trajectory([state], mount.pose_for(state), default_intrinsics)
        assert pixels[0].behind_camera
        assert not pixels[0].in_frame

    def test_straight_line_recedes_monotonically(self, default_intrinsics):
        pose = CameraMount().pose_for(VehicleState())
        states = [VehicleState(x=0.5 * i, v_x=5.0) for i in range(2, 40)]
        pixels = project_trajectory(states, pose, default_intrinsics)
        u = np.array([p.u for p in pixels])
        assert np.all(np.diff(u) < 0)
        assert all(p.v == pytest.approx(48.0) for p in pixels)

    def test_singleton_matches_world_to_pixel(self, default_intrinsics):
        pose = CameraMount().pose_for(VehicleState())
        [pixel] = project_trajectory([VehicleState(x=5.0)], pose, default_intrinsics)
        assert pixel == world_to_pixel((5.0, 0.0, 0.0), pose, default_intrinsics)

    def test_accepts_state_arrays(self, default_intrinsics):
        pose = CameraMount().pose_for(VehicleState())
        states = np.zeros((3, 7))
        states[:, 0] = [1.0, 2.0, 3.0]
        from_array = project_trajectory(states, pose, default_intrinsics)
        from_states = project_trajectory([VehicleState(x=x) for x in (1.0, 2.0, 3.0)], pose, default_intrinsics)
        assert from_array == from_states


class TestCameraMount:
    def test_level_mount_at_origin(self):
        pose = CameraMount(pitch_deg=0.0, height=0.0).pose_for(VehicleState())
        assert np.allclose(rotation_matrix(pose), np.eye(3))
        assert pose.position == (0.0, 0.0, 0.0)

    def test_pitch_is_extracted(self):
        pose = CameraMount().pose_for(VehicleState())
        assert pose.pitch == pytest.approx(math.radians(-10.0))
        assert pose.position == pytest.approx((0.0, 0.0, 0.3))

    def test_heading_follows_vehicle(self, default_intrinsics):
        state = VehicleState(x=2.0, y=3.0, yaw=math.pi / 2)
        pose = CameraMount().pose_for(state)
        pixel = world_to_pixel((2.0, 8.0, 0.0), pose, default_intrinsics)
        assert pixel.in_frame
        assert pixel.v == pytest.approx(48.0)

    def test_left_of_vehicle_projects_to_upper_rows(self, default_intrinsics):
        pose = CameraMount().pose_for(VehicleState())
        left = world_to_pixel((4.0, 0.5, 0.0), pose, default_intrinsics)
        right = world_to_pixel((4.0, -0.5, 0.0), pose, default_intrinsics)
        assert left.v < 48.0 < right.v

    def test_roll_ignored_by_default(self):
        state = VehicleState(roll=0.2)
        assert CameraMount().pose_for(state).roll == 0.0
        assert CameraMount(use_roll=True).pose_for(state).roll == pytest.approx(0.2)

    def test_forward_offset(self):
        pose = CameraMount(forward_offset=0.4).pose_for(VehicleState(x=1.0, yaw=math.pi))
        assert pose.position == pytest.approx((0.6, 0.0, 0.3))


class TestValidation:
    def test_non_finite_pose_rejected(self):
        with pytest.raises(ValidationError):
            CameraPose(roll=float("nan"))
        with pytest.raises(ValidationError):
            CameraPose(position=(0.0, float("inf"), 0.0))

    @pytest.mark.parametrize(
        "kwargs",
        [
            {"focal_length": 0.0},
            {"image_width": 0},
            {"image_height": -1},
            {"offset_x": 200.0},
            {"offset_y": -1.0},
        ],
    )
    def test_bad_intrinsics_rejected(self, kwargs):
        with pytest.raises(ValidationError):
            CameraIntrinsics(**kwargs)

    def test_degenerate_pixel(self):
        pixel = PixelCoord.degenerate()
        assert pixel.behind_camera and not pixel.in_frame
