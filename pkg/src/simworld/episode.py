"""Closed-loop episodes: render -> optimize -> step -> shift."""

import logging
import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, List, Optional

import numpy as np

from src.costmap.image import CostmapImage
from src.costmap.pipeline import binomial_blur
from src.dynamics.base import Control, DynamicsModel, VehicleState, rollout_batch
from src.geometry.camera import CameraIntrinsics, CameraView, PixelArray
from src.geometry.mount import CameraMount
from src.geometry.projection import project_positions
from src.mppi.optimizer import MppiOptimizer, NoiseTransform, receding_horizon_step
from src.mppi.params import MppiParams
from src.mppi.sampling import step_seed
from src.simworld.render import render_view
from src.simworld.track import ProgressTracker, TrackWorld, crash_check

logger = logging.getLogger(__name__)

# Open tracks count as completed this close to their end, meters.
FINISH_MARGIN = 0.5

FrameHook = Callable[[int, CostmapImage, PixelArray], None]


class Termination(str, Enum):
    CRASH = "crash"
    COMPLETED = "completed"
    MAX_STEPS = "max_steps"
    DIVERGED = "diverged"


@dataclass
class EpisodeResult:
    """Outcome of one lap attempt."""
    distance_traveled: float
    laps_completed: float
    crashed: bool
    steps: int
    mean_speed: float
    seed: int
    direction: str = "ccw"
    termination: Termination = Termination.MAX_STEPS
    track: str = ""
    path: np.ndarray = field(default_factory=lambda: np.zeros((0, 2)), repr=False)
    step_records: List[dict] = field(default_factory=list, repr=False)

    def to_row(self) -> dict:
        return {
            "seed": self.seed,
            "track": self.track,
            "direction": self.direction,
            "termination": self.termination.value,
            "crashed": self.crashed,
            "steps": self.steps,
            "distance_traveled": self.distance_traveled,
            "laps_completed": self.laps_completed,
            "mean_speed": self.mean_speed,
        }


def run_episode(
    world: TrackWorld,
    start: VehicleState,
    p: MppiParams,
    model: DynamicsModel,
    seed: int,
    max_steps: int,
    *,
    mount: Optional[CameraMount] = None,
    intrinsics: Optional[CameraIntrinsics] = None,
    lap_target: float = 1.0,
    blur_radius: int = 0,
    direction: str = "ccw",
    noise_transform: Optional[NoiseTransform] = None,
    frame_hook: Optional[FrameHook] = None,
) -> EpisodeResult:
    """Drive ``world`` from ``start`` until crash, completion or ``max_steps``.

    Closed tracks complete after ``lap_target`` laps; open tracks complete at
    their far end. Non-finite states end the episode as ``diverged``.
    """
    if max_steps < 1:
        raise ValueError(f"max_steps must be >= 1, got {max_steps}")
    if not lap_target > 0:
        raise ValueError(f"lap_target must be positive, got {lap_target}")
    mount = mount or CameraMount()
    intrinsics = intrinsics or CameraIntrinsics()

    optimizer = MppiOptimizer(model, p, noise_transform=noise_transform)
    tracker = ProgressTracker(world, start)
    nominal = np.zeros((p.horizon, 2))
    state = start
    path = [(start.x, start.y)]
    records: List[dict] = []
    distance = 0.0
    steps = 0
    termination = Termination.MAX_STEPS
    logger.info(f"Episode start: track={world.name} direction={direction} seed={seed}")

    for step in range(max_steps):
        view: CameraView = mount.view_for(state, intrinsics)
        costmap = render_view(world, view)
        if blur_radius > 0:
            costmap = binomial_blur(costmap, blur_radius)

        controls, diagnostics = optimizer.optimize(state, nominal, costmap, view, step_seed(seed, step))
        diagnostics.step = step
        records.append(diagnostics.to_record())
        logger.debug(f"step {step}: {diagnostics.to_record()}")

        if frame_hook is not None:
            planned = rollout_batch(model, state.to_array(), controls[None, :, :], p.dt)[0]
            frame_hook(step, costmap, project_positions(planned[:, :2], view))

        nxt = model.step(state, Control(float(controls[0, 0]), float(controls[0, 1])), p.dt)
        if not nxt.is_finite():
            logger.warning(f"Episode diverged at step {step} (seed={seed}): {nxt}")
            termination = Termination.DIVERGED
            break

        distance += math.hypot(nxt.x - state.x, nxt.y - state.y)
        state = nxt
        steps += 1
        path.append((state.x, state.y))
        tracker.update(state)

        if crash_check(state, world):
            termination = Termination.CRASH
            break
        if world.closed and tracker.laps >= lap_target:
            termination = Termination.COMPLETED
            break
        if tracker.finished_open(FINISH_MARGIN):
            termination = Termination.COMPLETED
            break
        nominal = receding_horizon_step(controls)

    result = EpisodeResult(
        distance_traveled=distance,
        laps_completed=tracker.laps,
        crashed=termination is Termination.CRASH,
        steps=steps,
        mean_speed=distance / (steps * p.dt) if steps else 0.0,
        seed=seed,
        direction=direction,
        termination=termination,
        track=world.name,
        path=np.array(path),
        step_records=records,
    )
    logger.info(
        f"Episode end: track={world.name} direction={direction} seed={seed} "
        f"termination={termination.value} distance={distance:.2f}m laps={result.laps_completed:.2f}"
    )
    return result
