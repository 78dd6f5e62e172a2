"""Camera pose, intrinsics and pixel coordinate types."""

import math
from dataclasses import dataclass
from typing import Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

# Points closer than this to the image plane are flagged instead of projected.
EPS_DEPTH = 1e-6


class CameraPose(BaseModel):
    """Camera orientation and position in world coordinates.

    The angles parameterize the world->robot rotation R = R_W(yaw) R_V(pitch) R_U(roll).
    """

    model_config = ConfigDict(frozen=True)

    roll: float = 0.0
    pitch: float = 0.0
    yaw: float = 0.0
    position: Tuple[float, float, float] = (0.0, 0.0, 0.0)

    @field_validator("roll", "pitch", "yaw")
    @classmethod
    def _finite_angle(cls, v: float) -> float:
        if not math.isfinite(v):
            raise ValueError("camera angles must be finite")
        return v

    @field_validator("position")
    @classmethod
    def _finite_position(cls, v: Tuple[float, float, float]) -> Tuple[float, float, float]:
        if not all(math.isfinite(c) for c in v):
            raise ValueError("camera position must be finite")
        return v

    @property
    def position_array(self) -> np.ndarray:
        return np.asarray(self.position, dtype=float)


class CameraIntrinsics(BaseModel):
    """Pinhole intrinsics in pixels."""

    model_config = ConfigDict(frozen=True)

    focal_length: float = Field(100.0, gt=0)
    offset_x: float = 80.0
    offset_y: float = 64.0
    image_width: int = Field(160, gt=0)
    image_height: int = Field(128, gt=0)

    @model_validator(mode="after")
    def _offsets_in_image(self) -> "CameraIntrinsics":
        if not 0.0 <= self.offset_x <= self.image_width:
            raise ValueError(f"offset_x {self.offset_x} outside [0, {self.image_width}]")
        if not 0.0 <= self.offset_y <= self.image_height:
            raise ValueError(f"offset_y {self.offset_y} outside [0, {self.image_height}]")
        return self


@dataclass(frozen=True)
class PixelCoord:
    """Final (flipped) pixel coordinate of one projected point.

    ``u`` is bounded by the image width and ``v`` by the image height.
    Points at or behind the image plane carry NaN coordinates and
    ``behind_camera=True``.
    """
    u: float
    v: float
    in_frame: bool
    behind_camera: bool = False

    @classmethod
    def degenerate(cls) -> "PixelCoord":
        return cls(u=math.nan, v=math.nan, in_frame=False, behind_camera=True)


@dataclass(frozen=True)
class PixelArray:
    """Vectorized projection result; every field has the input's leading shape."""
    u: np.ndarray
    v: np.ndarray
    in_frame: np.ndarray
    behind_camera: np.ndarray

    def __len__(self) -> int:
        return int(self.u.shape[0])

    def __getitem__(self, index: int) -> PixelCoord:
        return PixelCoord(
            u=float(self.u[index]),
            v=float(self.v[index]),
            in_frame=bool(self.in_frame[index]),
            behind_camera=bool(self.behind_camera[index]),
        )

    def to_list(self) -> list[PixelCoord]:
        return [self[i] for i in range(len(self))]


@dataclass(frozen=True)
class CameraView:
    """Pose plus intrinsics: everything needed to project at one instant."""
    pose: CameraPose
    intrinsics: CameraIntrinsics
