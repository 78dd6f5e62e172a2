"""Vehicle state, controls and the dynamics model interface."""

import math
from abc import ABC, abstractmethod
from dataclasses import dataclass
from typing import Sequence, Union

import numpy as np

# Column layout of state arrays.
X, Y, YAW, ROLL, VX, VY, YAW_RATE = range(7)
STATE_DIM = 7

# Column layout of control arrays.
THROTTLE, STEERING = range(2)
CONTROL_DIM = 2


def wrap_angle(angle: float) -> float:
    """Normalize to (-pi, pi]; odd-symmetric away from the +-pi seam."""
    if not math.isfinite(angle):
        return angle
    if angle > math.pi:
        angle -= 2.0 * math.pi
    elif angle <= -math.pi:
        angle += 2.0 * math.pi
    if -math.pi < angle <= math.pi:
        return angle
    angle = math.fmod(angle + math.pi, 2.0 * math.pi)
    if angle <= 0.0:
        angle += 2.0 * math.pi
    return angle - math.pi


def wrap_angles(angles: np.ndarray) -> np.ndarray:
    """Vectorized wrap_angle."""
    a = np.asarray(angles, dtype=float)
    a = np.where(a > np.pi, a - 2.0 * np.pi, a)
    a = np.where(a <= -np.pi, a + 2.0 * np.pi, a)
    outside = np.isfinite(a) & ((a > np.pi) | (a <= -np.pi))
    if np.any(outside):
        folded = np.mod(a + np.pi, 2.0 * np.pi)
        folded = np.where(folded <= 0.0, folded + 2.0 * np.pi, folded) - np.pi
        a = np.where(outside, folded, a)
    return a


@dataclass(frozen=True)
class VehicleState:
    """World-frame vehicle state [x, y, yaw, roll, v_x, v_y, yaw_rate]."""
    x: float = 0.0
    y: float = 0.0
    yaw: float = 0.0
    roll: float = 0.0
    v_x: float = 0.0
    v_y: float = 0.0
    yaw_rate: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "yaw", wrap_angle(float(self.yaw)))

    def to_array(self) -> np.ndarray:
        return np.array(
            [self.x, self.y, self.yaw, self.roll, self.v_x, self.v_y, self.yaw_rate],
            dtype=float,
        )

    @classmethod
    def from_array(cls, values: Sequence[float]) -> "VehicleState":
        values = np.asarray(values, dtype=float)
        if values.shape != (STATE_DIM,):
            raise ValueError(f"state array must have shape ({STATE_DIM},), got {values.shape}")
        return cls(*(float(v) for v in values))

    def is_finite(self) -> bool:
        return all(math.isfinite(v) for v in self.to_array())

    @property
    def speed(self) -> float:
        return math.hypot(self.v_x, self.v_y)


@dataclass(frozen=True)
class Control:
    """[throttle, steering], each a dimensionless command in [-1, 1]."""
    throttle: float = 0.0
    steering: float = 0.0

    def clamped(self) -> "Control":
        return Control(
            throttle=min(1.0, max(-1.0, self.throttle)),
            steering=min(1.0, max(-1.0, self.steering)),
        )

    def to_array(self) -> np.ndarray:
        return np.array([self.throttle, self.steering], dtype=float)


ControlsLike = Union[Sequence[Control], np.ndarray]


def controls_to_array(controls: ControlsLike) -> np.ndarray:
    """A ControlSequence as a (T, 2) float array in [throttle, steering] order."""
    if isinstance(controls, np.ndarray):
        arr = np.asarray(controls, dtype=float)
    else:
        arr = np.array([[c.throttle, c.steering] for c in controls], dtype=float).reshape(-1, CONTROL_DIM)
    if arr.ndim != 2 or arr.shape[1] != CONTROL_DIM:
        raise ValueError(f"controls must have shape (T, {CONTROL_DIM}), got {arr.shape}")
    return arr


def array_to_controls(controls: np.ndarray) -> list[Control]:
    return [Control(throttle=float(t), steering=float(s)) for t, s in np.asarray(controls)]


def clamp_controls(controls: np.ndarray) -> np.ndarray:
    return np.clip(controls, -1.0, 1.0)


class DynamicsModel(ABC):
    """Discrete-time transition x_{t+1} = F(x_t, u_t).

    Implementations are immutable after construction and time-invariant.
    Subclasses only provide ``step_batch``; single-state stepping and the
    rollouts are built on it so every path produces identical numbers.
    """

    name: str = "base"

    @abstractmethod
    def step_batch(self, states: np.ndarray, controls: np.ndarray, dt: float) -> np.ndarray:
        """Advance (N, 7) states under (N, 2) controls by ``dt``."""
        pass

    def step(self, state: VehicleState, control: Control, dt: float) -> VehicleState:
        nxt = self.step_batch(state.to_array()[None, :], control.to_array()[None, :], dt)
        return VehicleState.from_array(nxt[0])

    def describe(self) -> dict:
        """Parameters for logs and metrics."""
        return {"name": self.name}


def _check_dt(dt: float) -> None:
    if not dt > 0:
        raise ValueError(f"dt must be positive, got {dt}")


def rollout(model: DynamicsModel, initial: VehicleState, controls: ControlsLike, dt: float) -> list[VehicleState]:
    """States after applying each control in turn; output[t] is F applied t+1 times."""
    u = controls_to_array(controls)
    if len(u) == 0:
        raise ValueError("controls must be nonempty")
    _check_dt(dt)
    traj = rollout_batch(model, initial.to_array(), u[None, :, :], dt)
    return [VehicleState.from_array(row) for row in traj[0]]


def rollout_batch(model: DynamicsModel, initial: np.ndarray, controls: np.ndarray, dt: float) -> np.ndarray:
    """Roll N control sequences forward from a shared (7,) or per-sample (N, 7) start.

    Returns an (N, T, 7) array of successor states.
    """
    _check_dt(dt)
    u = np.asarray(controls, dtype=float)
    if u.ndim != 3 or u.shape[2] != CONTROL_DIM or u.shape[1] == 0:
        raise ValueError(f"controls must have shape (N, T, {CONTROL_DIM}) with T >= 1, got {u.shape}")
    n, horizon, _ = u.shape

    start = np.asarray(initial, dtype=float)
    states = np.broadcast_to(start, (n, STATE_DIM)).copy() if start.ndim == 1 else start.copy()
    if states.shape != (n, STATE_DIM):
        raise ValueError(f"initial states must have shape ({n}, {STATE_DIM}), got {states.shape}")

    out = np.empty((n, horizon, STATE_DIM))
    for t in range(horizon):
        states = model.step_batch(states, u[:, t, :], dt)
        out[:, t, :] = states
    return out
