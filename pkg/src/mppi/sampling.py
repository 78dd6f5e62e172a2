"""Seeded Gaussian control perturbations."""

import numpy as np

from src.dynamics.base import CONTROL_DIM
from src.mppi.params import MppiParams


def iteration_generator(seed: int, iteration: int) -> np.random.Generator:
    """Counter-based Philox stream keyed by (seed, iteration)."""
    sequence = np.random.SeedSequence(int(seed), spawn_key=(int(iteration),))
    return np.random.Generator(np.random.Philox(sequence))


def sample_perturbations(seed: int, p: MppiParams, iteration: int = 0) -> np.ndarray:
    """(num_samples, T, 2) zero-mean noise in [throttle, steering] order.

    Row i depends only on (seed, iteration, i), so scoring order and thread
    count never change which noise a sample receives.
    """
    rng = iteration_generator(seed, iteration)
    noise = rng.standard_normal((p.num_samples, p.horizon, CONTROL_DIM))
    return noise * np.asarray(p.sigmas)


def step_seed(episode_seed: int, step: int) -> int:
    """Seed for the optimizer call at ``step`` of an episode."""
    return int(np.random.SeedSequence([int(episode_seed), int(step)]).generate_state(1)[0])
