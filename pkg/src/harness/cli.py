"""Command-line entry point.

    python -m src.harness.cli run --config configs/oval.ini [--out DIR] [--seed N]
                                  [--episodes N] [--dump-frames] [--plot] [--blur 0|1]
    python -m src.harness.cli costmap ACTIVATION_FILE [--blur 0|1] [--out DIR]
    python -m src.harness.cli render --config configs/oval.ini [--x X --y Y --yaw YAW] [--out DIR]
    python -m src.harness.cli version

Exit codes: 0 success, 2 config error, 3 parse error, 4 runtime error,
1 anything unexpected.
"""

import argparse
import logging
import sys
from pathlib import Path
from typing import Optional, Sequence

from src.core.config import configure_logging, get_app_config
from src.core.exceptions import AirlError, ConfigError, ParseError
from src.costmap.io import write_pgm
from src.costmap.pipeline import binomial_blur
from src.dynamics.base import VehicleState
from src.harness import __version__
from src.harness.activation import process_activation_file
from src.harness.config import ExperimentConfig, load_config
from src.harness.experiment import run_experiment
from src.simworld.render import render_costmap

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_UNEXPECTED = 1
EXIT_CONFIG = 2
EXIT_PARSE = 3
EXIT_RUNTIME = 4


def _blur_flag(value: str) -> bool:
    if value not in ("0", "1"):
        raise argparse.ArgumentTypeError("--blur takes 0 or 1")
    return value == "1"


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="airl-mppi", description="Image-space MPPI simulator")
    parser.add_argument("--log-level", default=None, help="overrides LOG_LEVEL")
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run an experiment batch")
    run.add_argument("--config", required=True, type=Path)
    run.add_argument("--out", type=Path, help="output directory (overrides the config)")
    run.add_argument("--seed", type=int, help="seed base (overrides the config)")
    run.add_argument("--episodes", type=int, help="episodes per direction (overrides the config)")
    run.add_argument("--dump-frames", action="store_true", help="write per-step PGM frames")
    run.add_argument("--plot", action="store_true", help="write a top-down paths.png")
    run.add_argument("--blur", type=_blur_flag, help="blur rendered costmaps (0|1)")
    run.add_argument("--no-progress", action="store_true")

    costmap = sub.add_parser("costmap", help="process an activation file into a costmap")
    costmap.add_argument("path", type=Path)
    costmap.add_argument("--blur", type=_blur_flag, default=False)
    costmap.add_argument("--blur-radius", type=int, default=1)
    costmap.add_argument("--threshold", type=float, default=0.0)
    costmap.add_argument("--out", type=Path)

    render = sub.add_parser("render", help="render one driver-view costmap")
    render.add_argument("--config", required=True, type=Path)
    render.add_argument("--x", type=float)
    render.add_argument("--y", type=float)
    render.add_argument("--yaw", type=float)
    render.add_argument("--out", type=Path)
    render.add_argument("--blur", type=_blur_flag)

    sub.add_parser("version", help="print the version")
    return parser


def _apply_run_overrides(config: ExperimentConfig, args: argparse.Namespace) -> ExperimentConfig:
    config = config.with_overrides(output_dir=args.out, seed_base=args.seed, episodes=args.episodes)
    if args.blur is not None:
        config = config.with_overrides(costmap=config.costmap.model_copy(update={"blur": args.blur}).model_dump())
    return config


def cmd_run(args: argparse.Namespace) -> int:
    config = _apply_run_overrides(load_config(args.config), args)
    record = run_experiment(config, dump_frames=args.dump_frames, plot=args.plot, progress=not args.no_progress)
    summary = record.summary
    print(
        f"{summary['episodes']} episodes: mean distance {summary['mean_distance']:.2f} m "
        f"(std {summary['std_distance']:.2f}), completion {summary['completion_rate']:.0%}, "
        f"crashes {summary['crash_rate']:.0%}"
    )
    for path in record.files:
        print(path)
    return EXIT_OK


def cmd_costmap(args: argparse.Namespace) -> int:
    costmap = process_activation_file(
        args.path, args.blur, blur_radius=args.blur_radius, threshold=args.threshold, out_dir=args.out
    )
    print(f"{costmap.stage.value} costmap {costmap.width}x{costmap.height}, {costmap.occupied_fraction():.1%} non-zero")
    return EXIT_OK


def cmd_render(args: argparse.Namespace) -> int:
    config = load_config(args.config)
    world = config.load_world()
    start = world.start_state(config.start_speed)
    state = VehicleState(
        x=start.x if args.x is None else args.x,
        y=start.y if args.y is None else args.y,
        yaw=start.yaw if args.yaw is None else args.yaw,
        v_x=start.v_x,
    )
    costmap = render_costmap(state, world, config.intrinsics, config.mount)
    blur = config.costmap.blur if args.blur is None else args.blur
    if blur:
        costmap = binomial_blur(costmap, config.costmap.blur_radius)
    out_dir = args.out or Path(config.output_dir)
    path = write_pgm(costmap, out_dir / f"render_{world.name}.pgm")
    print(path)
    return EXIT_OK


COMMANDS = {"run": cmd_run, "costmap": cmd_costmap, "render": cmd_render}


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    if args.command == "version":
        print(f"airl-mppi {__version__}")
        return EXIT_OK

    settings = get_app_config()
    try:
        configure_logging(args.log_level or settings.log_level)
        return COMMANDS[args.command](args)
    except ConfigError as e:
        logger.error(f"Configuration error: {e}")
        return EXIT_CONFIG
    except ParseError as e:
        logger.error(f"Parse error: {e}")
        return EXIT_PARSE
    except (AirlError, ValueError, OSError) as e:
        logger.error(f"Runtime error: {e}")
        return EXIT_RUNTIME
    except Exception as e:
        logger.exception(f"Unexpected error: {e}")
        return EXIT_UNEXPECTED


if __name__ == "__main__":
    sys.exit(main())
