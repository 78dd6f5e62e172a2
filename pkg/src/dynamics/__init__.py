"""Vehicle dynamics: state types, the model interface and rollouts."""

from src.dynamics.base import (
    CONTROL_DIM,
    STATE_DIM,
    Control,
    DynamicsModel,
    VehicleState,
    array_to_controls,
    clamp_controls,
    controls_to_array,
    rollout,
    rollout_batch,
    wrap_angle,
    wrap_angles,
)
from src.dynamics.bicycle import BicycleParams, KinematicBicycleModel, bicycle_step, bicycle_step_batch
from src.dynamics.registry import ModelRegistry, get_model_registry
from src.dynamics.table import TableDrivenModel, tabulate

__all__ = [
    "CONTROL_DIM",
    "STATE_DIM",
    "BicycleParams",
    "Control",
    "DynamicsModel",
    "KinematicBicycleModel",
    "ModelRegistry",
    "TableDrivenModel",
    "VehicleState",
    "array_to_controls",
    "bicycle_step",
    "bicycle_step_batch",
    "clamp_controls",
    "controls_to_array",
    "get_model_registry",
    "rollout",
    "rollout_batch",
    "tabulate",
    "wrap_angle",
    "wrap_angles",
]
