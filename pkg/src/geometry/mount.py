"""Camera rigidly attached to the vehicle."""

import math
from typing import TYPE_CHECKING

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator

from src.geometry.camera import CameraIntrinsics, CameraPose, CameraView
from src.geometry.projection import axis_rotations, pose_from_rotation

if TYPE_CHECKING:
    from src.dynamics.base import VehicleState


class CameraMount(BaseModel):
    """Mounting of the driver-view camera on the vehicle body.

    ``pitch_deg`` is the elevation of the optical axis; negative values look
    down at the ground. Vehicle roll is ignored unless ``use_roll`` is set.
    """

    model_config = ConfigDict(frozen=True)

    height: float = Field(0.3, ge=0)
    pitch_deg: float = Field(-10.0, gt=-90.0, lt=90.0)
    forward_offset: float = 0.0
    use_roll: bool = False

    @field_validator("height", "forward_offset")
    @classmethod
    def _finite(cls, v: float) -> float:
        if not math.isfinite(v):
            raise ValueError("mount offsets must be finite")
        return v

    @property
    def pitch(self) -> float:
        return math.radians(self.pitch_deg)

    def camera_axes(self, yaw: float, roll: float = 0.0) -> np.ndarray:
        """Columns are the camera's (forward, left, up) axes in world coordinates."""
        r_u, _, r_w = axis_rotations(roll if self.use_roll else 0.0, 0.0, yaw)
        _, tilt, _ = axis_rotations(0.0, -self.pitch, 0.0)
        return r_w @ r_u @ tilt

    def position_for(self, x: float, y: float, yaw: float) -> tuple[float, float, float]:
        return (
            x + self.forward_offset * math.cos(yaw),
            y + self.forward_offset * math.sin(yaw),
            self.height,
        )

    def pose_for(self, state: "VehicleState") -> CameraPose:
        """Camera pose for the vehicle at ``state``."""
        world_to_robot = self.camera_axes(state.yaw, state.roll).T
        return pose_from_rotation(world_to_robot, self.position_for(state.x, state.y, state.yaw))

    def view_for(self, state: "VehicleState", intrinsics: CameraIntrinsics) -> CameraView:
        return CameraView(pose=self.pose_for(state), intrinsics=intrinsics)
