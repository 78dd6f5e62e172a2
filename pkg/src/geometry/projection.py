"""World -> robot -> camera -> film -> pixel projection chain.

Matrices follow the printed forms literally:

    R      = R_W(psi) R_V(theta) R_U(phi)
    T_w->r = R T_tl
    T      = T_c->f->p(Z) T_r->c T_w->r        (2x4, homogeneous world input)

and the final flip ``[u, v] = [w/2, h] - [v', u']`` moves the origin to the
bottom centre of the image.
"""

import math
from typing import TYPE_CHECKING, Sequence, Union

import numpy as np

from src.geometry.camera import (
    EPS_DEPTH,
    CameraIntrinsics,
    CameraPose,
    CameraView,
    PixelArray,
    PixelCoord,
)

if TYPE_CHECKING:
    from src.dynamics.base import VehicleState

# Robot axes (depth, a, b) -> camera axes (X, Y, Z) with Z the depth.
ROBOT_TO_CAMERA = np.array(
    [
        [0.0, 1.0, 0.0],
        [0.0, 0.0, 1.0],
        [1.0, 0.0, 0.0],
    ]
)


def axis_rotations(roll: float, pitch: float, yaw: float) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Return (R_U, R_V, R_W), the rotations about the U, V and W axes."""
    cr, sr = math.cos(roll), math.sin(roll)
    cp, sp = math.cos(pitch), math.sin(pitch)
    cy, sy = math.cos(yaw), math.sin(yaw)

    r_u = np.array([[1.0, 0.0, 0.0], [0.0, cr, -sr], [0.0, sr, cr]])
    r_v = np.array([[cp, 0.0, sp], [0.0, 1.0, 0.0], [-sp, 0.0, cp]])
    r_w = np.array([[cy, -sy, 0.0], [sy, cy, 0.0], [0.0, 0.0, 1.0]])
    return r_u, r_v, r_w


def rotation_matrix(pose: CameraPose) -> np.ndarray:
    """R = R_W R_V R_U for the pose's (roll, pitch, yaw)."""
    r_u, r_v, r_w = axis_rotations(pose.roll, pose.pitch, pose.yaw)
    return r_w @ r_v @ r_u


def translation_matrix(position: Sequence[float]) -> np.ndarray:
    """T_tl: 3x4 translation by the negated camera position."""
    t = np.zeros((3, 4))
    t[:, :3] = np.eye(3)
    t[:, 3] = -np.asarray(position, dtype=float)
    return t


def transform_matrix(pose: CameraPose) -> np.ndarray:
    """T_r->c . T_w->r: maps homogeneous world points to camera coordinates."""
    return ROBOT_TO_CAMERA @ rotation_matrix(pose) @ translation_matrix(pose.position)


def composed_matrix(pose: CameraPose, intrinsics: CameraIntrinsics, depth: float) -> np.ndarray:
    """The full 2x4 T for a point whose camera-frame depth is ``depth``."""
    if not depth > EPS_DEPTH:
        raise ValueError(f"depth must exceed {EPS_DEPTH}, got {depth}")
    f = intrinsics.focal_length
    t_cfp = np.array(
        [
            [f / depth, 0.0, intrinsics.offset_x / depth],
            [0.0, f / depth, intrinsics.offset_y / depth],
        ]
    )
    return t_cfp @ transform_matrix(pose)


def pose_from_rotation(matrix: np.ndarray, position: Sequence[float]) -> CameraPose:
    """Find the pose whose rotation_matrix reproduces ``matrix``."""
    r = np.asarray(matrix, dtype=float)
    pitch = math.asin(max(-1.0, min(1.0, -r[2, 0])))
    if math.hypot(r[0, 0], r[1, 0]) > 1e-9:
        yaw = math.atan2(r[1, 0], r[0, 0])
        roll = math.atan2(r[2, 1], r[2, 2])
    else:
        # gimbal lock: only yaw - roll (or yaw + roll) is observable
        roll = 0.0
        yaw = math.atan2(-r[0, 1], r[1, 1])
    x, y, z = (float(c) for c in position)
    return CameraPose(roll=roll, pitch=pitch, yaw=yaw, position=(x, y, z))


def project_points(points: np.ndarray, pose: CameraPose, intrinsics: CameraIntrinsics) -> PixelArray:
    """Vectorized world_to_pixel over an array of shape (..., 3)."""
    pts = np.asarray(points, dtype=float)
    if pts.shape[-1] != 3:
        raise ValueError(f"points must have a trailing dimension of 3, got shape {pts.shape}")
    lead = pts.shape[:-1]
    flat = pts.reshape(-1, 3)

    # T_tl, then R, then T_r->c; subtracting first keeps large coordinates exact
    relative = flat - pose.position_array
    camera = relative @ (ROBOT_TO_CAMERA @ rotation_matrix(pose)).T
    x_cam, y_cam, z_cam = camera[:, 0], camera[:, 1], camera[:, 2]

    behind = ~(z_cam > EPS_DEPTH)
    safe_z = np.where(behind, 1.0, z_cam)
    f = intrinsics.focal_length
    u_film = f * x_cam / safe_z + intrinsics.offset_x
    v_film = f * y_cam / safe_z + intrinsics.offset_y

    width, height = intrinsics.image_width, intrinsics.image_height
    u = np.where(behind, np.nan, width / 2.0 - v_film)
    v = np.where(behind, np.nan, height - u_film)
    with np.errstate(invalid="ignore"):
        in_frame = ~behind & (u >= 0.0) & (u < width) & (v >= 0.0) & (v < height)

    return PixelArray(
        u=u.reshape(lead),
        v=v.reshape(lead),
        in_frame=in_frame.reshape(lead),
        behind_camera=behind.reshape(lead),
    )


def world_to_pixel(point: Sequence[float], pose: CameraPose, intrinsics: CameraIntrinsics) -> PixelCoord:
    """Project one world point; degenerate depths yield PixelCoord.degenerate()."""
    pixels = project_points(np.asarray(point, dtype=float).reshape(1, 3), pose, intrinsics)
    if pixels.behind_camera[0]:
        return PixelCoord.degenerate()
    return pixels[0]


def lift_to_ground(xy: np.ndarray) -> np.ndarray:
    """Planar (..., 2) positions -> (..., 3) points on the ground plane W = 0."""
    xy = np.asarray(xy, dtype=float)
    return np.concatenate([xy, np.zeros(xy.shape[:-1] + (1,))], axis=-1)


def project_positions(xy: np.ndarray, view: CameraView) -> PixelArray:
    """Project planar positions of any leading shape through a fixed camera."""
    return project_points(lift_to_ground(xy), view.pose, view.intrinsics)


def project_trajectory(
    states: Union[Sequence["VehicleState"], np.ndarray],
    pose: CameraPose,
    intrinsics: CameraIntrinsics,
) -> list[PixelCoord]:
    """Project each state's (x, y) into the camera frame held at ``pose``.

    Out-of-frame and behind-camera points are flagged, never dropped, so the
    output stays index-aligned with ``states``.
    """
    if isinstance(states, np.ndarray):
        xy = states[:, :2]
    else:
        if len(states) == 0:
            raise ValueError("states must be nonempty")
        xy = np.array([[s.x, s.y] for s in states], dtype=float)
    if xy.shape[0] == 0:
        raise ValueError("states must be nonempty")

    pixels = project_positions(xy, CameraView(pose=pose, intrinsics=intrinsics))
    return [
        PixelCoord.degenerate() if pixels.behind_camera[i] else pixels[i]
        for i in range(len(pixels))
    ]
