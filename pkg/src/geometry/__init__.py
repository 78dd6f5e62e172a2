"""World to pixel projection for image-space planning."""

from src.geometry.camera import (
    EPS_DEPTH,
    CameraIntrinsics,
    CameraPose,
    CameraView,
    PixelArray,
    PixelCoord,
)
from src.geometry.mount import CameraMount
from src.geometry.projection import (
    composed_matrix,
    lift_to_ground,
    pose_from_rotation,
    project_points,
    project_positions,
    project_trajectory,
    rotation_matrix,
    transform_matrix,
    world_to_pixel,
)

__all__ = [
    "EPS_DEPTH",
    "CameraIntrinsics",
    "CameraMount",
    "CameraPose",
    "CameraView",
    "PixelArray",
    "PixelCoord",
    "composed_matrix",
    "lift_to_ground",
    "pose_from_rotation",
    "project_points",
    "project_positions",
    "project_trajectory",
    "rotation_matrix",
    "transform_matrix",
    "world_to_pixel",
]
