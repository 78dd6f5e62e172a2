"""Sampling-based MPC in image space.

Each iteration perturbs the nominal control sequence, rolls every sample
through the dynamics model, projects the predicted positions into the
current camera frame, reads the costmap there and replaces the nominal with
the exponentially cost-weighted average of the sampled sequences.
"""

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from typing import Callable, List, Optional

import numpy as np

from src.costmap.image import CostmapImage
from src.dynamics.base import (
    VX,
    ControlsLike,
    DynamicsModel,
    VehicleState,
    clamp_controls,
    controls_to_array,
    rollout_batch,
)
from src.geometry.camera import CameraView, PixelCoord
from src.geometry.projection import project_positions
from src.mppi.cost import indicator_values, trajectory_costs
from src.mppi.params import MppiParams
from src.mppi.sampling import sample_perturbations

logger = logging.getLogger(__name__)

# Samples are scored in fixed-size chunks; thread count only changes scheduling.
CHUNK_SIZE = 256

NoiseTransform = Callable[[np.ndarray, int], np.ndarray]


@dataclass
class RolloutResult:
    """One scored control sequence."""
    states: List[VehicleState]
    pixels: List[PixelCoord]
    total_cost: float
    perturbation: np.ndarray
    step_costs: np.ndarray = field(default_factory=lambda: np.zeros(0))


@dataclass
class WeightResult:
    weights: np.ndarray
    effective_sample_size: float
    degenerate: bool
    invalid: int


@dataclass
class MppiDiagnostics:
    """Per-call optimizer summary; the last iteration's weights are reported."""
    iterations: int
    num_samples: int
    min_cost: float
    mean_cost: float
    effective_sample_size: float
    degenerate: bool
    invalid_samples: int
    first_throttle: float
    first_steering: float
    step: int = 0

    @property
    def ess_fraction(self) -> float:
        return self.effective_sample_size / self.num_samples

    def to_record(self) -> dict:
        return asdict(self)


def compute_weights(costs: np.ndarray, lambda_: float) -> WeightResult:
    """Normalized exp(-(J - min J) / lambda) weights.

    Non-finite costs get weight 0. When every finite cost is equal, or no
    cost is finite, the weights fall back to uniform and ``degenerate`` is set.
    """
    if not lambda_ > 0:
        raise ValueError(f"lambda must be positive, got {lambda_}")
    costs = np.asarray(costs, dtype=float)
    finite = np.isfinite(costs)
    invalid = int(costs.size - np.count_nonzero(finite))

    if not finite.any():
        weights = np.full(costs.size, 1.0 / costs.size)
        return WeightResult(weights, float(costs.size), True, invalid)

    valid_costs = costs[finite]
    baseline = valid_costs.min()
    degenerate = bool(valid_costs.max() == baseline)
    raw = np.zeros(costs.size)
    raw[finite] = np.exp(-(valid_costs - baseline) / lambda_)
    weights = raw / raw.sum()
    ess = float(1.0 / np.sum(weights * weights))
    return WeightResult(weights, ess, degenerate, invalid)


def weighted_average(controls: np.ndarray, weights: np.ndarray) -> np.ndarray:
    """Weighted mean of (N, T, 2) sequences, reduced in sample order."""
    return (weights[:, None, None] * controls).sum(axis=0)


def receding_horizon_step(prev: ControlsLike) -> np.ndarray:
    """Drop the first control and hold the last one."""
    u = controls_to_array(prev)
    if len(u) == 0:
        raise ValueError("control sequence must be nonempty")
    return np.concatenate([u[1:], u[-1:]], axis=0)


class MppiOptimizer:
    """MPPI over a fixed dynamics model and parameter set.

    Not safe to share across concurrent optimize calls; create one per
    episode.
    """

    def __init__(self, model: DynamicsModel, params: MppiParams, noise_transform: Optional[NoiseTransform] = None):
        self.model = model
        self.params = params
        self.noise_transform = noise_transform

    def _check_inputs(self, nominal: np.ndarray, costmap: CostmapImage, camera: CameraView) -> None:
        if nominal.shape != (self.params.horizon, 2):
            raise ValueError(f"nominal must have shape ({self.params.horizon}, 2), got {nominal.shape}")
        intr = camera.intrinsics
        if costmap.shape != (intr.image_height, intr.image_width):
            raise ValueError(
                f"costmap is {costmap.width}x{costmap.height} but camera image is "
                f"{intr.image_width}x{intr.image_height}"
            )

    def _noise(self, seed: int, iteration: int, perturbations: Optional[np.ndarray]) -> np.ndarray:
        if perturbations is None:
            noise = sample_perturbations(seed, self.params, iteration)
        else:
            injected = np.asarray(perturbations, dtype=float)
            noise = injected[iteration] if injected.ndim == 4 else injected
            if noise.ndim != 3 or noise.shape[1:] != (self.params.horizon, 2):
                raise ValueError(f"perturbations must have shape (N, {self.params.horizon}, 2), got {noise.shape}")
        if self.noise_transform is not None:
            noise = self.noise_transform(noise, iteration)
        return noise

    def _score_chunk(self, start: np.ndarray, controls: np.ndarray, costmap: CostmapImage, camera: CameraView) -> np.ndarray:
        with np.errstate(invalid="ignore", over="ignore"):
            traj = rollout_batch(self.model, start, controls, self.params.dt)
            pixels = project_positions(traj[..., :2], camera)
        ind = indicator_values(costmap, pixels, self.params)
        return trajectory_costs(traj[..., VX], ind, self.params)

    def score(self, state: VehicleState, controls: np.ndarray, costmap: CostmapImage, camera: CameraView) -> np.ndarray:
        """Total cost of each (N, T, 2) control sequence."""
        start = state.to_array()
        chunks = [controls[i:i + CHUNK_SIZE] for i in range(0, len(controls), CHUNK_SIZE)]
        if self.params.workers > 1 and len(chunks) > 1:
            with ThreadPoolExecutor(max_workers=self.params.workers) as pool:
                parts = list(pool.map(lambda c: self._score_chunk(start, c, costmap, camera), chunks))
        else:
            parts = [self._score_chunk(start, c, costmap, camera) for c in chunks]
        return np.concatenate(parts)

    def evaluate(
        self,
        state: VehicleState,
        controls: ControlsLike,
        costmap: CostmapImage,
        camera: CameraView,
        perturbation: Optional[np.ndarray] = None,
    ) -> RolloutResult:
        """Roll out and score one control sequence in full detail."""
        u = clamp_controls(controls_to_array(controls))
        traj = rollout_batch(self.model, state.to_array(), u[None, :, :], self.params.dt)[0]
        pixels = project_positions(traj[:, :2], camera)
        ind = indicator_values(costmap, pixels, self.params)
        speed_error = self.params.v_desired - traj[:, VX]
        discount = self.params.gamma ** np.arange(len(u), dtype=float)
        step_costs = self.params.speed_cost * speed_error * speed_error + discount * self.params.crash_cost * ind
        total = float(trajectory_costs(traj[None, :, VX], ind[None, :], self.params)[0])
        return RolloutResult(
            states=[VehicleState.from_array(row) for row in traj],
            pixels=[PixelCoord.degenerate() if pixels.behind_camera[i] else pixels[i] for i in range(len(pixels))],
            total_cost=total,
            perturbation=np.zeros_like(u) if perturbation is None else np.asarray(perturbation, dtype=float),
            step_costs=step_costs,
        )

    def optimize(
        self,
        state: VehicleState,
        nominal: ControlsLike,
        costmap: CostmapImage,
        camera: CameraView,
        seed: int,
        perturbations: Optional[np.ndarray] = None,
    ) -> tuple[np.ndarray, MppiDiagnostics]:
        """Run K iterations from ``nominal``; returns the new nominal and diagnostics.

        ``perturbations`` replaces the sampler with fixed noise, shaped
        (N, T, 2) for every iteration or (K, N, T, 2) per iteration.
        """
        p = self.params
        current = controls_to_array(nominal)
        self._check_inputs(current, costmap, camera)

        for k in range(p.iterations):
            noise = self._noise(seed, k, perturbations)
            samples = clamp_controls(current[None, :, :] + noise)
            costs = self.score(state, samples, costmap, camera)
            result = compute_weights(costs, p.lambda_)
            current = weighted_average(samples, result.weights)

            finite = costs[np.isfinite(costs)]
            min_cost = float(finite.min()) if finite.size else float("nan")
            mean_cost = float(finite.mean()) if finite.size else float("nan")
            logger.debug(
                f"iteration {k}: min={min_cost:.4f} mean={mean_cost:.4f} "
                f"ess={result.effective_sample_size:.1f}/{len(costs)}"
            )
            if result.degenerate:
                logger.warning(f"Degenerate MPPI weights at iteration {k}: all sample costs equal")
            if result.invalid:
                logger.warning(f"{result.invalid} samples produced non-finite costs at iteration {k}")

        diagnostics = MppiDiagnostics(
            iterations=p.iterations,
            num_samples=len(costs),
            min_cost=min_cost,
            mean_cost=mean_cost,
            effective_sample_size=result.effective_sample_size,
            degenerate=result.degenerate,
            invalid_samples=result.invalid,
            first_throttle=float(current[0, 0]),
            first_steering=float(current[0, 1]),
        )
        return current, diagnostics


def optimize(
    state: VehicleState,
    nominal: ControlsLike,
    costmap: CostmapImage,
    camera: CameraView,
    model: DynamicsModel,
    p: MppiParams,
    seed: int,
    perturbations: Optional[np.ndarray] = None,
    noise_transform: Optional[NoiseTransform] = None,
) -> tuple[np.ndarray, MppiDiagnostics]:
    """Functional form of MppiOptimizer.optimize."""
    optimizer = MppiOptimizer(model, p, noise_transform=noise_transform)
    return optimizer.optimize(state, nominal, costmap, camera, seed, perturbations=perturbations)
