"""Table-driven dynamics: the drop-in point for a learned model.

Table file (JSON)::

    {
      "format": "airl-table v1",
      "vx_bins": [...],          # m/s, strictly increasing
      "steering_bins": [...],    # commands in [-1, 1], strictly increasing
      "throttle_bins": [...],    # commands in [-1, 1], strictly increasing
      "derivatives": [...]       # shape (n_vx, n_steering, n_throttle, 4)
    }

Each derivative vector is d/dt [roll, v_x, v_y, yaw] at that bin. The
nearest bin on every axis is used; the planar pose is integrated with the
body velocities rotated by yaw.
"""

import json
import logging
from pathlib import Path
from typing import Optional, Sequence, Union

import numpy as np

from src.core.exceptions import DynamicsError, ParseError
from src.dynamics.base import (
    ROLL,
    STATE_DIM,
    STEERING,
    THROTTLE,
    VX,
    VY,
    X,
    Y,
    YAW,
    YAW_RATE,
    DynamicsModel,
    clamp_controls,
    wrap_angles,
)

logger = logging.getLogger(__name__)

TABLE_FORMAT = "airl-table v1"
DERIVATIVE_DIM = 4


def _nearest_index(bins: np.ndarray, values: np.ndarray) -> np.ndarray:
    if len(bins) == 1:
        return np.zeros(values.shape, dtype=int)
    idx = np.clip(np.searchsorted(bins, values), 1, len(bins) - 1)
    left = bins[idx - 1]
    right = bins[idx]
    # ties go to the lower bin
    return np.where(values - left <= right - values, idx - 1, idx)


class TableDrivenModel(DynamicsModel):
    """DynamicsModel backed by a derivative lookup table."""

    name = "table"

    def __init__(
        self,
        vx_bins: Sequence[float],
        steering_bins: Sequence[float],
        throttle_bins: Sequence[float],
        derivatives: np.ndarray,
        source: Optional[str] = None,
    ):
        self.vx_bins = self._check_bins("vx_bins", vx_bins)
        self.steering_bins = self._check_bins("steering_bins", steering_bins)
        self.throttle_bins = self._check_bins("throttle_bins", throttle_bins)
        self.derivatives = np.array(derivatives, dtype=float)
        self.source = source

        expected = (len(self.vx_bins), len(self.steering_bins), len(self.throttle_bins), DERIVATIVE_DIM)
        if self.derivatives.shape != expected:
            raise DynamicsError(f"derivatives must have shape {expected}, got {self.derivatives.shape}")
        if not np.all(np.isfinite(self.derivatives)):
            raise DynamicsError("derivatives must be finite")
        self.derivatives.setflags(write=False)

    @staticmethod
    def _check_bins(name: str, bins: Sequence[float]) -> np.ndarray:
        arr = np.array(bins, dtype=float)
        if arr.ndim != 1 or arr.size == 0:
            raise DynamicsError(f"{name} must be a nonempty list")
        if not np.all(np.isfinite(arr)) or np.any(np.diff(arr) <= 0):
            raise DynamicsError(f"{name} must be finite and strictly increasing")
        arr.setflags(write=False)
        return arr

    def lookup(self, vx: np.ndarray, steering: np.ndarray, throttle: np.ndarray) -> np.ndarray:
        """(N, 4) derivative vectors at the nearest bins."""
        i = _nearest_index(self.vx_bins, np.asarray(vx, dtype=float))
        j = _nearest_index(self.steering_bins, np.asarray(steering, dtype=float))
        k = _nearest_index(self.throttle_bins, np.asarray(throttle, dtype=float))
        return self.derivatives[i, j, k]

    def step_batch(self, states: np.ndarray, controls: np.ndarray, dt: float) -> np.ndarray:
        if not dt > 0:
            raise ValueError(f"dt must be positive, got {dt}")
        s = np.asarray(states, dtype=float)
        u = clamp_controls(np.asarray(controls, dtype=float))
        d = self.lookup(s[:, VX], u[:, STEERING], u[:, THROTTLE])

        yaw = s[:, YAW]
        vx, vy = s[:, VX], s[:, VY]
        nxt = np.empty_like(s)
        nxt[:, X] = s[:, X] + (vx * np.cos(yaw) - vy * np.sin(yaw)) * dt
        nxt[:, Y] = s[:, Y] + (vx * np.sin(yaw) + vy * np.cos(yaw)) * dt
        nxt[:, YAW] = wrap_angles(yaw + d[:, 3] * dt)
        nxt[:, ROLL] = s[:, ROLL] + d[:, 0] * dt
        nxt[:, VX] = vx + d[:, 1] * dt
        nxt[:, VY] = vy + d[:, 2] * dt
        nxt[:, YAW_RATE] = d[:, 3]
        return nxt

    def describe(self) -> dict:
        return {
            "name": self.name,
            "source": self.source,
            "bins": [len(self.vx_bins), len(self.steering_bins), len(self.throttle_bins)],
        }

    def to_dict(self) -> dict:
        return {
            "format": TABLE_FORMAT,
            "vx_bins": self.vx_bins.tolist(),
            "steering_bins": self.steering_bins.tolist(),
            "throttle_bins": self.throttle_bins.tolist(),
            "derivatives": self.derivatives.tolist(),
        }

    def save(self, path: Union[str, Path]) -> None:
        Path(path).write_text(json.dumps(self.to_dict(), indent=1))
        logger.info(f"Wrote dynamics table to {path}")

    @classmethod
    def load(cls, path: Union[str, Path]) -> "TableDrivenModel":
        raw = Path(path).read_bytes()
        try:
            data = json.loads(raw)
        except json.JSONDecodeError as e:
            raise ParseError(str(path), e.pos, f"invalid JSON: {e.msg}")
        if not isinstance(data, dict) or data.get("format") != TABLE_FORMAT:
            raise ParseError(str(path), 0, f"expected format {TABLE_FORMAT!r}")
        missing = [k for k in ("vx_bins", "steering_bins", "throttle_bins", "derivatives") if k not in data]
        if missing:
            raise ParseError(str(path), 0, f"missing keys {missing}")
        try:
            return cls(
                data["vx_bins"],
                data["steering_bins"],
                data["throttle_bins"],
                np.array(data["derivatives"], dtype=float),
                source=str(path),
            )
        except (DynamicsError, ValueError) as e:
            raise ParseError(str(path), 0, str(e))


def tabulate(
    model: DynamicsModel,
    vx_bins: Sequence[float],
    steering_bins: Sequence[float],
    throttle_bins: Sequence[float],
    step_dt: float = 0.02,
) -> TableDrivenModel:
    """Sample ``model`` at every bin by a finite difference over ``step_dt``."""
    if not step_dt > 0:
        raise ValueError(f"step_dt must be positive, got {step_dt}")
    grid = np.array(np.meshgrid(vx_bins, steering_bins, throttle_bins, indexing="ij"), dtype=float)
    vx, steer, thr = (g.ravel() for g in grid)

    states = np.zeros((vx.size, STATE_DIM))
    states[:, VX] = vx
    controls = np.stack([thr, steer], axis=1)
    nxt = model.step_batch(states, controls, step_dt)

    deriv = np.stack(
        [
            (nxt[:, ROLL] - states[:, ROLL]) / step_dt,
            (nxt[:, VX] - states[:, VX]) / step_dt,
            (nxt[:, VY] - states[:, VY]) / step_dt,
            wrap_angles(nxt[:, YAW] - states[:, YAW]) / step_dt,
        ],
        axis=1,
    )
    shape = (len(vx_bins), len(steering_bins), len(throttle_bins), DERIVATIVE_DIM)
    logger.info(f"Tabulated {model.name} model over {shape[:3]} bins")
    return TableDrivenModel(vx_bins, steering_bins, throttle_bins, deriv.reshape(shape), source=f"tabulate:{model.name}")
