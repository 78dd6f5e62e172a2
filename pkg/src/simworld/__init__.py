"""Synthetic closed-loop driving world."""

from src.simworld.episode import EpisodeResult, Termination, run_episode
from src.simworld.fixtures import (
    BUILTIN_TRACKS,
    DRIVING_INTRINSICS,
    MyopiaScenario,
    ambiguous_costmap,
    complex_loop,
    get_builtin_track,
    list_builtin_tracks,
    myopia_scenario,
    oval,
    straight_corridor,
    unbounded_plane,
    zigzag_lane,
)
from src.simworld.render import render_costmap, render_view
from src.simworld.track import ProgressTracker, TrackWorld, crash_check
from src.simworld.trackfile import format_track, parse_track_bytes, read_track_file, write_track_file

__all__ = [
    "BUILTIN_TRACKS",
    "DRIVING_INTRINSICS",
    "EpisodeResult",
    "MyopiaScenario",
    "ProgressTracker",
    "Termination",
    "TrackWorld",
    "ambiguous_costmap",
    "complex_loop",
    "crash_check",
    "format_track",
    "get_builtin_track",
    "list_builtin_tracks",
    "myopia_scenario",
    "oval",
    "parse_track_bytes",
    "read_track_file",
    "render_costmap",
    "render_view",
    "run_episode",
    "straight_corridor",
    "unbounded_plane",
    "write_track_file",
    "zigzag_lane",
]
