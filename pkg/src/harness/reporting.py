"""Metrics tables, summaries, frame dumps and path plots."""

import json
import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, List, Optional, Sequence

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402
import pandas as pd  # noqa: E402
from PIL import Image, ImageDraw  # noqa: E402

from src.costmap.image import CostmapImage  # noqa: E402
from src.costmap.io import to_grey  # noqa: E402
from src.geometry.camera import PixelArray  # noqa: E402
from src.simworld.episode import EpisodeResult, Termination  # noqa: E402
from src.simworld.track import TrackWorld  # noqa: E402

logger = logging.getLogger(__name__)

EPISODES_HEADER = "# airl-mppi episodes v1"
STEPS_HEADER = "# airl-mppi steps v1"
FLOAT_FORMAT = "%.9g"

EPISODE_COLUMNS = [
    "seed",
    "track",
    "direction",
    "termination",
    "crashed",
    "steps",
    "distance_traveled",
    "laps_completed",
    "mean_speed",
]
STEP_COLUMNS = [
    "seed",
    "direction",
    "step",
    "min_cost",
    "mean_cost",
    "effective_sample_size",
    "degenerate",
    "invalid_samples",
    "first_throttle",
    "first_steering",
]

# Grey level of the planned trajectory drawn over frame dumps.
TRAJECTORY_GREY = 128


@dataclass
class MetricsRecord:
    """Per-episode rows in (direction, seed) order plus per-step diagnostics."""
    episodes: pd.DataFrame
    steps: pd.DataFrame
    summary: Dict[str, object]
    files: List[Path] = field(default_factory=list)
    results: List[EpisodeResult] = field(default_factory=list, repr=False)


def episodes_frame(results: Sequence[EpisodeResult]) -> pd.DataFrame:
    return pd.DataFrame([r.to_row() for r in results], columns=EPISODE_COLUMNS)


def steps_frame(results: Sequence[EpisodeResult]) -> pd.DataFrame:
    rows = [
        {"seed": r.seed, "direction": r.direction, **record}
        for r in results
        for record in r.step_records
    ]
    return pd.DataFrame(rows, columns=STEP_COLUMNS) if rows else pd.DataFrame(columns=STEP_COLUMNS)


def _stats(frame: pd.DataFrame) -> Dict[str, float]:
    distance = frame["distance_traveled"].to_numpy(dtype=float)
    return {
        "episodes": int(len(frame)),
        "mean_distance": float(distance.mean()) if len(distance) else 0.0,
        "std_distance": float(distance.std(ddof=0)) if len(distance) else 0.0,
        "completion_rate": float((frame["termination"] == Termination.COMPLETED.value).mean()) if len(frame) else 0.0,
        "crash_rate": float(frame["crashed"].mean()) if len(frame) else 0.0,
        "mean_laps": float(frame["laps_completed"].mean()) if len(frame) else 0.0,
    }


def summarize(frame: pd.DataFrame) -> Dict[str, object]:
    """Overall and per-direction statistics; stddev is the population stddev."""
    summary: Dict[str, object] = _stats(frame)
    summary["by_direction"] = {
        direction: _stats(group) for direction, group in frame.groupby("direction", sort=True)
    }
    return summary


def _write_csv(frame: pd.DataFrame, path: Path, header: str) -> Path:
    with open(path, "w", newline="") as f:
        f.write(header + "\n")
        frame.to_csv(f, index=False, float_format=FLOAT_FORMAT, lineterminator="\n")
    return path


def write_metrics(record: MetricsRecord, output_dir: Path) -> List[Path]:
    output_dir.mkdir(parents=True, exist_ok=True)
    written = [
        _write_csv(record.episodes, output_dir / "episodes.csv", EPISODES_HEADER),
        _write_csv(record.steps, output_dir / "steps.csv", STEPS_HEADER),
    ]
    summary_path = output_dir / "summary.json"
    summary_path.write_text(json.dumps(record.summary, indent=2, sort_keys=True) + "\n")
    written.append(summary_path)
    logger.info(f"Wrote metrics for {len(record.episodes)} episodes to {output_dir}")
    return written


def read_episodes_csv(path: Path) -> pd.DataFrame:
    return pd.read_csv(path, comment="#")


def overlay_frame(costmap: CostmapImage, planned: Optional[PixelArray] = None) -> Image.Image:
    """Grey costmap image with the planned trajectory drawn over it."""
    image = Image.fromarray(to_grey(costmap))
    if planned is not None:
        draw = ImageDraw.Draw(image)
        visible = planned.in_frame & ~planned.behind_camera
        points = [(float(u), float(v)) for u, v in zip(planned.u[visible], planned.v[visible])]
        if len(points) > 1:
            draw.line(points, fill=TRAJECTORY_GREY, width=1)
        elif points:
            draw.point(points, fill=TRAJECTORY_GREY)
    return image


class FrameWriter:
    """Frame hook that dumps each step's costmap and plan as a PGM."""

    def __init__(self, directory: Path):
        self.directory = directory
        self.directory.mkdir(parents=True, exist_ok=True)
        self.count = 0

    def __call__(self, step: int, costmap: CostmapImage, planned: PixelArray) -> None:
        overlay_frame(costmap, planned).save(self.directory / f"step_{step:05d}.pgm", format="PPM")
        self.count += 1


def plot_paths(world: TrackWorld, results: Sequence[EpisodeResult], path: Path) -> Path:
    """Top-down view of the track boundaries and every driven path."""
    plt.figure(figsize=(8, 8))
    for line in world.boundary_polylines():
        closed = np.vstack([line, line[:1]]) if world.closed else line
        plt.plot(closed[:, 0], closed[:, 1], color="black", linewidth=1)
    plt.plot(world.centerline[:, 0], world.centerline[:, 1], color="grey", linestyle="--", linewidth=0.5)

    colors = {"ccw": "tab:blue", "cw": "tab:orange"}
    for r in results:
        style = "x" if r.crashed else ""
        plt.plot(r.path[:, 0], r.path[:, 1], color=colors.get(r.direction, "tab:green"), linewidth=0.8, alpha=0.7)
        if style:
            plt.plot(r.path[-1, 0], r.path[-1, 1], marker=style, color="red")
    plt.title(f"{world.name}: {len(results)} episodes")
    plt.xlabel("x (m)")
    plt.ylabel("y (m)")
    plt.axis("equal")
    plt.savefig(path, dpi=150, bbox_inches="tight")
    plt.close()
    return path
