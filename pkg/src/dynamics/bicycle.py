"""Kinematic bicycle model standing in for the learned vehicle dynamics."""

import logging
from typing import Optional

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from src.dynamics.base import (
    ROLL,
    STEERING,
    THROTTLE,
    VX,
    VY,
    X,
    Y,
    YAW,
    YAW_RATE,
    Control,
    DynamicsModel,
    VehicleState,
    clamp_controls,
    wrap_angles,
)

logger = logging.getLogger(__name__)


class BicycleParams(BaseModel):
    """Parameters of the kinematic bicycle (1/5-scale platform defaults)."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    wheelbase: float = Field(0.57, gt=0, description="L, meters")
    max_steer: float = Field(0.35, gt=0, lt=1.5707963267948966, description="delta_max, radians")
    max_accel: float = Field(4.0, gt=0, description="a_max, m/s^2")
    drag: float = Field(0.2, ge=0, description="c_drag, 1/s")
    substeps: int = Field(1, ge=1)


def bicycle_step_batch(states: np.ndarray, controls: np.ndarray, dt: float, params: BicycleParams) -> np.ndarray:
    """Explicit Euler update of (N, 7) states under (N, 2) controls."""
    if not dt > 0:
        raise ValueError(f"dt must be positive, got {dt}")
    u = clamp_controls(np.asarray(controls, dtype=float))
    delta = params.max_steer * u[:, STEERING]
    accel_cmd = params.max_accel * u[:, THROTTLE]
    curvature = np.tan(delta) / params.wheelbase

    h = dt / params.substeps
    s = np.array(states, dtype=float, copy=True)
    for _ in range(params.substeps):
        vx = s[:, VX]
        yaw = s[:, YAW]
        yaw_rate = vx * curvature
        nxt = np.empty_like(s)
        nxt[:, X] = s[:, X] + vx * np.cos(yaw) * h
        nxt[:, Y] = s[:, Y] + vx * np.sin(yaw) * h
        nxt[:, YAW] = wrap_angles(yaw + yaw_rate * h)
        nxt[:, ROLL] = 0.0
        nxt[:, VX] = vx + (accel_cmd - params.drag * vx) * h
        nxt[:, VY] = 0.0
        nxt[:, YAW_RATE] = yaw_rate
        s = nxt
    return s


def bicycle_step(state: VehicleState, control: Control, dt: float, params: BicycleParams) -> VehicleState:
    """Single-state bicycle update; see bicycle_step_batch."""
    nxt = bicycle_step_batch(state.to_array()[None, :], control.to_array()[None, :], dt, params)
    return VehicleState.from_array(nxt[0])


class KinematicBicycleModel(DynamicsModel):
    """DynamicsModel backed by bicycle_step_batch."""

    name = "bicycle"

    def __init__(self, params: Optional[BicycleParams] = None, **overrides):
        self.params = params or BicycleParams(**overrides)
        logger.debug(f"Bicycle model created with {self.params.model_dump()}")

    def step_batch(self, states: np.ndarray, controls: np.ndarray, dt: float) -> np.ndarray:
        return bicycle_step_batch(states, controls, dt, self.params)

    def describe(self) -> dict:
        return {"name": self.name, **self.params.model_dump()}
