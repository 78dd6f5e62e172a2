"""Shared fixtures."""

import numpy as np
import pytest

from src.costmap.image import CostmapImage, CostmapStage
from src.dynamics.bicycle import KinematicBicycleModel
from src.geometry.camera import CameraIntrinsics
from src.mppi.params import MppiParams
from src.simworld.fixtures import DRIVING_INTRINSICS


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture
def bicycle():
    return KinematicBicycleModel()


@pytest.fixture
def default_intrinsics():
    return CameraIntrinsics()


@pytest.fixture
def driving_intrinsics():
    return DRIVING_INTRINSICS


@pytest.fixture
def small_params():
    """Cheap MPPI settings for unit tests."""
    return MppiParams(horizon=20, num_samples=64, iterations=1)


@pytest.fixture
def free_map():
    return CostmapImage.zeros()


@pytest.fixture
def left_of_heading_map():
    """Occupied left of the heading ray; with default intrinsics it projects to row 48."""
    values = np.zeros((128, 160))
    values[:48, :] = 1.0
    return CostmapImage(values, CostmapStage.BINARY)


@pytest.fixture
def write_config(tmp_path):
    """Write config text to tmp_path and return its path."""
    def _write(text: str, name: str = "experiment.ini"):
        path = tmp_path / name
        path.write_text(text)
        return path
    return _write
