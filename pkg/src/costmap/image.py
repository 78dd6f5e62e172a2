"""Activation tensors and costmap images."""

from dataclasses import dataclass
from enum import Enum

import numpy as np

from src.core.exceptions import CostmapStageError

# Feature-map and planner resolutions.
DEFAULT_KERNELS = 128
DEFAULT_FEATURE_HEIGHT = 32
DEFAULT_FEATURE_WIDTH = 40
DEFAULT_CHANNELS = 3
MAP_WIDTH = 160
MAP_HEIGHT = 128


class CostmapStage(str, Enum):
    RAW = "raw"
    BINARY = "binary"
    BLURRED = "blurred"


def _frozen(values: np.ndarray) -> np.ndarray:
    arr = np.array(values, dtype=float, copy=True)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True)
class ActivationTensor:
    """Post-activation feature maps, shape (kernels, height, width, channels)."""
    values: np.ndarray

    def __post_init__(self):
        arr = _frozen(self.values)
        if arr.ndim != 4:
            raise ValueError(f"activation tensor must be 4-D (k, h, w, c), got shape {arr.shape}")
        if arr.size == 0 or min(arr.shape) <= 0:
            raise ValueError(f"activation tensor must be nonempty, got shape {arr.shape}")
        if not np.all(np.isfinite(arr)):
            raise ValueError("activation values must be finite")
        if np.any(arr < 0):
            raise ValueError("activation values must be non-negative")
        object.__setattr__(self, "values", arr)

    @classmethod
    def zeros(
        cls,
        kernels: int = DEFAULT_KERNELS,
        height: int = DEFAULT_FEATURE_HEIGHT,
        width: int = DEFAULT_FEATURE_WIDTH,
        channels: int = DEFAULT_CHANNELS,
    ) -> "ActivationTensor":
        return cls(np.zeros((kernels, height, width, channels)))

    @property
    def kernels(self) -> int:
        return self.values.shape[0]

    @property
    def height(self) -> int:
        return self.values.shape[1]

    @property
    def width(self) -> int:
        return self.values.shape[2]

    @property
    def channels(self) -> int:
        return self.values.shape[3]


@dataclass(frozen=True)
class CostmapImage:
    """Driver-view cost grid stored row-major as (height, width).

    Values are read-only after construction. Binary maps hold only 0 and 1;
    blurred maps stay within [0, 1].
    """
    values: np.ndarray
    stage: CostmapStage = CostmapStage.RAW

    def __post_init__(self):
        arr = _frozen(self.values)
        stage = CostmapStage(self.stage)
        if arr.ndim != 2 or arr.size == 0:
            raise ValueError(f"costmap must be a nonempty 2-D grid, got shape {arr.shape}")
        if not np.all(np.isfinite(arr)):
            raise ValueError("costmap values must be finite")
        if stage is CostmapStage.BINARY and not np.all((arr == 0.0) | (arr == 1.0)):
            raise ValueError("binary costmap values must be 0 or 1")
        if stage is CostmapStage.BLURRED and (arr.min() < 0.0 or arr.max() > 1.0):
            raise ValueError("blurred costmap values must lie in [0, 1]")
        object.__setattr__(self, "values", arr)
        object.__setattr__(self, "stage", stage)

    @classmethod
    def zeros(cls, width: int = MAP_WIDTH, height: int = MAP_HEIGHT, stage: CostmapStage = CostmapStage.BINARY) -> "CostmapImage":
        return cls(np.zeros((height, width)), stage)

    @property
    def width(self) -> int:
        return self.values.shape[1]

    @property
    def height(self) -> int:
        return self.values.shape[0]

    @property
    def shape(self) -> tuple[int, int]:
        return self.values.shape

    def require_stage(self, *allowed: CostmapStage) -> None:
        if self.stage not in allowed:
            names = ", ".join(s.value for s in allowed)
            raise CostmapStageError(f"expected a costmap in stage {names}, got {self.stage.value}")

    def occupied_fraction(self) -> float:
        return float(np.count_nonzero(self.values) / self.values.size)
