"""Batch lap attempts over seeds and driving directions."""

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import List, Optional

from tqdm import tqdm

from src.core.config import get_app_config
from src.dynamics.base import DynamicsModel
from src.harness.config import ExperimentConfig
from src.harness.reporting import (
    FrameWriter,
    MetricsRecord,
    episodes_frame,
    plot_paths,
    steps_frame,
    summarize,
    write_metrics,
)
from src.simworld.episode import EpisodeResult, run_episode
from src.simworld.track import TrackWorld

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class EpisodeJob:
    direction: str
    seed: int
    world: TrackWorld


def plan_jobs(config: ExperimentConfig, world: TrackWorld) -> List[EpisodeJob]:
    """Jobs in output order: by direction, then seed base..base+n-1."""
    worlds = {"ccw": world, "cw": world.reversed()}
    return [
        EpisodeJob(direction=direction, seed=config.seed_base + i, world=worlds[direction])
        for direction in sorted(config.directions)
        for i in range(config.episodes)
    ]


def _run_job(job: EpisodeJob, config: ExperimentConfig, model: DynamicsModel, frames_dir: Optional[Path]) -> EpisodeResult:
    hook = FrameWriter(frames_dir / f"{job.direction}_seed{job.seed}") if frames_dir else None
    return run_episode(
        job.world,
        job.world.start_state(config.start_speed),
        config.mppi,
        model,
        job.seed,
        config.max_steps,
        mount=config.mount,
        intrinsics=config.intrinsics,
        lap_target=config.lap_target,
        blur_radius=config.costmap.effective_radius,
        direction=job.direction,
        frame_hook=hook,
    )


def run_experiment(
    config: ExperimentConfig,
    dump_frames: bool = False,
    plot: bool = False,
    progress: bool = True,
) -> MetricsRecord:
    """Run every configured episode and write metrics under config.output_dir.

    Rows come out in (direction, seed) order whatever order episodes finish in.
    """
    world = config.load_world()
    model = config.dynamics.build()
    jobs = plan_jobs(config, world)
    output_dir = Path(config.output_dir)
    frames_dir = output_dir / "frames" if dump_frames else None

    workers = max(config.workers, 1)
    settings_cap = get_app_config().max_workers
    if workers > settings_cap:
        logger.info(f"Limiting episode workers from {workers} to MAX_WORKERS={settings_cap}")
        workers = settings_cap

    logger.info(
        f"Running {len(jobs)} episodes on {world.name} "
        f"(directions={config.directions}, seeds={config.seed_base}..{config.seed_base + config.episodes - 1}, workers={workers})"
    )
    bar = tqdm(total=len(jobs), desc=world.name, unit="episode", disable=not progress)

    def run(job: EpisodeJob) -> EpisodeResult:
        result = _run_job(job, config, model, frames_dir)
        bar.update(1)
        return result

    try:
        if workers > 1:
            with ThreadPoolExecutor(max_workers=workers) as pool:
                results = list(pool.map(run, jobs))
        else:
            results = [run(job) for job in jobs]
    finally:
        bar.close()

    episodes = episodes_frame(results)
    record = MetricsRecord(
        episodes=episodes,
        steps=steps_frame(results),
        summary={"track": world.name, **summarize(episodes)},
        results=results,
    )
    record.files = write_metrics(record, output_dir)
    if plot:
        record.files.append(plot_paths(world, results, output_dir / "paths.png"))
    return record
