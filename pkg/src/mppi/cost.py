"""Image-space running cost: speed tracking plus a discounted crash indicator."""

import numpy as np

from src.costmap.image import CostmapImage, CostmapStage
from src.costmap.pipeline import cost_lookup, lookup_many
from src.dynamics.base import VehicleState
from src.geometry.camera import PixelArray, PixelCoord
from src.mppi.params import MppiParams


def _indicator_threshold(costmap: CostmapImage, p: MppiParams):
    costmap.require_stage(CostmapStage.BINARY, CostmapStage.BLURRED)
    if costmap.stage is CostmapStage.BLURRED and not p.soft_indicator:
        return p.indicator_threshold
    return None


def indicator(costmap: CostmapImage, pixel: PixelCoord, p: MppiParams) -> float:
    """I for one projected position."""
    value = cost_lookup(costmap, pixel)
    threshold = _indicator_threshold(costmap, p)
    if threshold is not None:
        return 1.0 if value >= threshold else 0.0
    return value


def indicator_values(costmap: CostmapImage, pixels: PixelArray, p: MppiParams) -> np.ndarray:
    """Vectorized indicator over projected positions of any shape."""
    return lookup_many(costmap, pixels, _indicator_threshold(costmap, p))


def running_cost(state: VehicleState, pixel: PixelCoord, t: int, costmap: CostmapImage, p: MppiParams) -> float:
    """C_s (v_desired - v_x)^2 + gamma^t C_c I; controls are not penalized."""
    if t < 0:
        raise ValueError(f"t must be non-negative, got {t}")
    speed_error = p.v_desired - state.v_x
    return p.speed_cost * speed_error * speed_error + p.gamma ** t * p.crash_cost * indicator(costmap, pixel, p)


def trajectory_costs(speeds: np.ndarray, indicators: np.ndarray, p: MppiParams) -> np.ndarray:
    """Total cost per sample from (N, T) speeds and indicator values.

    Summed step by step so each total matches adding running_cost over t.
    """
    speeds = np.asarray(speeds, dtype=float)
    indicators = np.asarray(indicators, dtype=float)
    totals = np.zeros(speeds.shape[0])
    with np.errstate(invalid="ignore", over="ignore"):
        for t in range(speeds.shape[1]):
            speed_error = p.v_desired - speeds[:, t]
            totals = totals + (p.speed_cost * speed_error * speed_error + p.gamma ** t * p.crash_cost * indicators[:, t])
    return totals
