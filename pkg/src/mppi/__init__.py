"""Model predictive path integral control over image-space costmaps."""

from src.mppi.cost import indicator, indicator_values, running_cost, trajectory_costs
from src.mppi.optimizer import (
    MppiDiagnostics,
    MppiOptimizer,
    RolloutResult,
    WeightResult,
    compute_weights,
    optimize,
    receding_horizon_step,
    weighted_average,
)
from src.mppi.params import MppiParams
from src.mppi.sampling import sample_perturbations, step_seed

__all__ = [
    "MppiDiagnostics",
    "MppiOptimizer",
    "MppiParams",
    "RolloutResult",
    "WeightResult",
    "compute_weights",
    "indicator",
    "indicator_values",
    "optimize",
    "receding_horizon_step",
    "running_cost",
    "sample_perturbations",
    "step_seed",
    "trajectory_costs",
    "weighted_average",
]
