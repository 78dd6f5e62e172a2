"""Built-in track worlds and the ambiguous-costmap scenario."""

import logging
import math
from dataclasses import dataclass
from typing import Callable, Dict, List

import numpy as np

from src.core.exceptions import EpisodeError
from src.costmap.image import MAP_HEIGHT, MAP_WIDTH, CostmapImage, CostmapStage
from src.dynamics.base import VehicleState
from src.geometry.camera import CameraIntrinsics, CameraView
from src.geometry.mount import CameraMount
from src.mppi.params import MppiParams
from src.simworld.track import TrackWorld

logger = logging.getLogger(__name__)

# Wide symmetric camera used for closed-loop driving.
DRIVING_INTRINSICS = CameraIntrinsics(focal_length=60.0, offset_x=64.0, offset_y=64.0)


def straight_corridor(length: float = 40.0, half_width: float = 1.0, curb_width: float = 0.3) -> TrackWorld:
    xs = np.linspace(0.0, length, int(length / 0.5) + 1)
    return TrackWorld(np.stack([xs, np.zeros_like(xs)], axis=1), half_width, closed=False, name="corridor", curb_width=curb_width)


def oval(straight: float = 10.0, radius: float = 6.0, half_width: float = 1.5, curb_width: float = 0.5, spacing: float = 0.25) -> TrackWorld:
    """Counter-clockwise stadium starting at the middle of the lower straight."""
    half = straight / 2.0
    n_straight = max(2, int(round(straight / spacing)))
    n_arc = max(8, int(round(math.pi * radius / spacing)))

    lower = np.stack([np.linspace(0.0, half, n_straight // 2, endpoint=False), np.full(n_straight // 2, -radius)], axis=1)
    angles = np.linspace(-math.pi / 2, math.pi / 2, n_arc, endpoint=False)
    right = np.stack([half + radius * np.cos(angles), radius * np.sin(angles)], axis=1)
    upper = np.stack([np.linspace(half, -half, n_straight, endpoint=False), np.full(n_straight, radius)], axis=1)
    left = np.stack([-half + radius * np.cos(angles + math.pi), radius * np.sin(angles + math.pi)], axis=1)
    closing = np.stack([np.linspace(-half, 0.0, n_straight // 2, endpoint=False), np.full(n_straight // 2, -radius)], axis=1)

    points = np.vstack([lower, right, upper, left, closing])
    return TrackWorld(points, half_width, closed=True, name="oval", curb_width=curb_width)


def complex_loop(radius: float = 12.0, lobe: float = 3.0, lobes: int = 3, half_width: float = 1.25, curb_width: float = 0.4, n_points: int = 240) -> TrackWorld:
    """Closed multi-turn loop whose bends alternate direction."""
    theta = np.linspace(0.0, 2.0 * math.pi, n_points, endpoint=False)
    r = radius + lobe * np.sin(lobes * theta)
    points = np.stack([r * np.cos(theta), r * np.sin(theta)], axis=1)
    return TrackWorld(points, half_width, closed=True, name="complex", curb_width=curb_width)


def zigzag_lane(
    length: float = 30.0,
    amplitude: float = 0.6,
    wavelength: float = 12.0,
    min_width: float = 0.5,
    max_width: float = 1.5,
    width_period: float = 10.0,
    curb_width: float = 0.3,
) -> TrackWorld:
    """Open weaving lane whose full width varies between min_width and max_width."""
    xs = np.linspace(0.0, length, int(length / 0.25) + 1)
    ys = amplitude * np.sin(2.0 * math.pi * xs / wavelength)
    mean = (min_width + max_width) / 4.0
    swing = (max_width - min_width) / 4.0
    half_width = mean + swing * np.sin(2.0 * math.pi * xs / width_period)
    return TrackWorld(np.stack([xs, ys], axis=1), half_width, closed=False, name="zigzag", curb_width=curb_width)


def unbounded_plane() -> TrackWorld:
    """Empty world: nothing to render and nowhere to crash."""
    points = np.array([[-1000.0, 0.0], [0.0, 0.0], [1000.0, 0.0]])
    return TrackWorld(points, math.inf, closed=False, name="plane")


BUILTIN_TRACKS: Dict[str, Callable[[], TrackWorld]] = {
    "corridor": straight_corridor,
    "oval": oval,
    "complex": complex_loop,
    "zigzag": zigzag_lane,
    "plane": unbounded_plane,
}


def list_builtin_tracks() -> List[str]:
    return sorted(BUILTIN_TRACKS)


def get_builtin_track(name: str) -> TrackWorld:
    factory = BUILTIN_TRACKS.get(name)
    if factory is None:
        raise EpisodeError(f"unknown built-in track {name!r}; available: {list_builtin_tracks()}")
    return factory()


def ambiguous_costmap(width: int = MAP_WIDTH, height: int = MAP_HEIGHT, wall_columns: int = 6) -> CostmapImage:
    """A dead end drawn across the far field of the image.

    Ground points in the first ``wall_columns`` columns lie tens of meters
    ahead with the driving camera, out of reach of any horizon-length
    rollout, so every sample sees the same (free) costs.
    """
    values = np.zeros((height, width))
    values[:, :wall_columns] = 1.0
    return CostmapImage(values, CostmapStage.BINARY)


@dataclass(frozen=True)
class MyopiaScenario:
    state: VehicleState
    costmap: CostmapImage
    camera: CameraView
    params: MppiParams


def myopia_scenario(num_samples: int = 400) -> MyopiaScenario:
    """Vehicle cruising toward a dead end it cannot see within its horizon.

    Off-road costs stay at their defaults; no rollout reaches the wall, so
    the plan matches the one on an empty map.
    """
    state = VehicleState(v_x=5.0)
    camera = CameraMount().view_for(state, DRIVING_INTRINSICS)
    params = MppiParams.offroad(num_samples=num_samples)
    return MyopiaScenario(state=state, costmap=ambiguous_costmap(), camera=camera, params=params)
