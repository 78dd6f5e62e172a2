"""First-person binary costmaps rendered from track boundaries."""

import logging
from typing import Optional

import numpy as np

from src.costmap.image import CostmapImage, CostmapStage
from src.costmap.pipeline import round_half_away
from src.dynamics.base import VehicleState
from src.geometry.camera import CameraIntrinsics, CameraView
from src.geometry.mount import CameraMount
from src.geometry.projection import project_positions
from src.simworld.track import TrackWorld

logger = logging.getLogger(__name__)


def dilate3x3(mask: np.ndarray) -> np.ndarray:
    """Set every pixel whose 8-neighbourhood touches the mask."""
    padded = np.pad(mask, 1, mode="constant", constant_values=False)
    h, w = mask.shape
    out = np.zeros_like(mask)
    for di in range(3):
        for dj in range(3):
            out |= padded[di:di + h, dj:dj + w]
    return out


def render_view(world: TrackWorld, camera: CameraView) -> CostmapImage:
    """Binary costmap of the world's boundaries seen from a fixed camera."""
    intr = camera.intrinsics
    mask = np.zeros((intr.image_height, intr.image_width), dtype=bool)
    points = world.boundary_points()
    if len(points):
        pixels = project_positions(points, camera)
        visible = pixels.in_frame & ~pixels.behind_camera
        if visible.any():
            cols = np.clip(round_half_away(pixels.u[visible]).astype(int), 0, intr.image_width - 1)
            rows = np.clip(round_half_away(pixels.v[visible]).astype(int), 0, intr.image_height - 1)
            mask[rows, cols] = True
            mask = dilate3x3(mask)
    return CostmapImage(mask.astype(float), CostmapStage.BINARY)


def render_costmap(
    state: VehicleState,
    world: TrackWorld,
    intrinsics: Optional[CameraIntrinsics] = None,
    mount: Optional[CameraMount] = None,
) -> CostmapImage:
    """Driver-view costmap from the camera rigidly attached to the vehicle at ``state``."""
    view = (mount or CameraMount()).view_for(state, intrinsics or CameraIntrinsics())
    return render_view(world, view)
