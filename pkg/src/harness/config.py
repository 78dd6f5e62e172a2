"""Experiment configuration files.

Flat ``key = value`` text with section headers::

    [experiment]
    track = builtin:oval          ; or a path to a .track file
    episodes = 20
    direction = both              ; cw | ccw | both
    seed_base = 0
    output_dir = runs/oval
    max_steps = 3000
    lap_target = 1.0
    start_speed = 0.0
    workers = 1

    [mppi]                        ; any MppiParams field, lambda as ``lambda``
    [dynamics]                    ; model = bicycle | table, plus model parameters
    [camera]                      ; CameraMount and CameraIntrinsics fields
    [costmap]                     ; blur, blur_radius, threshold

Relative paths resolve against the config file's directory. Environment
variables never override anything in here; MAX_WORKERS only caps the
``workers`` thread count, which never changes results.
"""

import configparser
import logging
from pathlib import Path
from typing import Any, Dict, Literal, Optional, Union

from pydantic import BaseModel, ConfigDict, Field, ValidationError

from src.core.exceptions import ConfigError
from src.dynamics.base import DynamicsModel
from src.dynamics.registry import get_model_registry
from src.geometry.camera import CameraIntrinsics
from src.geometry.mount import CameraMount
from src.mppi.params import MppiParams
from src.simworld.fixtures import get_builtin_track, list_builtin_tracks
from src.simworld.track import TrackWorld
from src.simworld.trackfile import read_track_file

logger = logging.getLogger(__name__)

BUILTIN_PREFIX = "builtin:"
SECTIONS = ("experiment", "mppi", "dynamics", "camera", "costmap")

_MOUNT_KEYS = set(CameraMount.model_fields)
_INTRINSIC_KEYS = set(CameraIntrinsics.model_fields)


class CostmapConfig(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")

    blur: bool = False
    blur_radius: int = Field(1, ge=1)
    threshold: float = Field(0.0, ge=0)

    @property
    def effective_radius(self) -> int:
        return self.blur_radius if self.blur else 0


class DynamicsConfig(BaseModel):
    model_config = ConfigDict(frozen=True)

    model: str = "bicycle"
    params: Dict[str, Any] = Field(default_factory=dict)

    def build(self) -> DynamicsModel:
        return get_model_registry().create(self.model, **self.params)


class ExperimentConfig(BaseModel):
    """A complete, validated experiment description."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    track: str = "builtin:oval"
    episodes: int = Field(20, ge=1)
    direction: Literal["cw", "ccw", "both"] = "both"
    seed_base: int = Field(0, ge=0)
    output_dir: Path = Path("runs")
    max_steps: int = Field(3000, ge=1)
    lap_target: float = Field(1.0, gt=0)
    start_speed: float = 0.0
    workers: int = Field(1, ge=1)

    mppi: MppiParams = Field(default_factory=MppiParams)
    dynamics: DynamicsConfig = Field(default_factory=DynamicsConfig)
    mount: CameraMount = Field(default_factory=CameraMount)
    intrinsics: CameraIntrinsics = Field(default_factory=CameraIntrinsics)
    costmap: CostmapConfig = Field(default_factory=CostmapConfig)

    @property
    def directions(self) -> list[str]:
        return ["ccw", "cw"] if self.direction == "both" else [self.direction]

    def load_world(self) -> TrackWorld:
        if self.track.startswith(BUILTIN_PREFIX):
            return get_builtin_track(self.track[len(BUILTIN_PREFIX):])
        return read_track_file(self.track)

    def with_overrides(self, **changes) -> "ExperimentConfig":
        """Validated copy with top-level fields replaced (used by CLI flags)."""
        data = self.model_dump()
        data.update({k: v for k, v in changes.items() if v is not None})
        try:
            return ExperimentConfig(**data)
        except ValidationError as e:
            raise _config_error(e, "experiment")


def _config_error(error: ValidationError, section: str) -> ConfigError:
    first = error.errors()[0]
    loc = ".".join(str(part) for part in first["loc"])
    return ConfigError(f"{section}.{loc}" if loc else section, first.get("input"), first["msg"])


def _resolve(value: str, base_dir: Path) -> Path:
    path = Path(value).expanduser()
    return path if path.is_absolute() else (base_dir / path).resolve()


def _build(model, section: str, values: Dict[str, Any]):
    try:
        return model(**values)
    except ValidationError as e:
        raise _config_error(e, section)


def parse_config(text: str, base_dir: Union[str, Path] = ".", source: Optional[str] = None) -> ExperimentConfig:
    """Parse and validate config text; raises ConfigError naming the bad field."""
    base = Path(base_dir).resolve()
    parser = configparser.ConfigParser(inline_comment_prefixes=(";", "#"), interpolation=None)
    try:
        parser.read_string(text, source=source or "<config>")
    except configparser.Error as e:
        raise ConfigError("file", source, f"malformed config: {e}")

    unknown = [s for s in parser.sections() if s not in SECTIONS]
    if unknown:
        raise ConfigError("section", unknown[0], f"unknown section; expected one of {list(SECTIONS)}")

    sections = {name: dict(parser.items(name)) if parser.has_section(name) else {} for name in SECTIONS}

    experiment = sections["experiment"]
    if "track" in experiment and not experiment["track"].startswith(BUILTIN_PREFIX):
        track_path = _resolve(experiment["track"], base)
        if not track_path.is_file():
            raise ConfigError("experiment.track", experiment["track"], "track file does not exist")
        experiment["track"] = str(track_path)
    elif "track" in experiment:
        name = experiment["track"][len(BUILTIN_PREFIX):]
        if name not in list_builtin_tracks():
            raise ConfigError("experiment.track", experiment["track"], f"unknown built-in track; available: {list_builtin_tracks()}")
    if "output_dir" in experiment:
        experiment["output_dir"] = str(_resolve(experiment["output_dir"], base))
    else:
        experiment["output_dir"] = str(_resolve("runs", base))

    dynamics = dict(sections["dynamics"])
    model_name = dynamics.pop("model", "bicycle")
    if model_name not in get_model_registry().list_models():
        raise ConfigError("dynamics.model", model_name, f"unknown model; available: {get_model_registry().list_models()}")
    if model_name == "table":
        if not dynamics.get("path"):
            raise ConfigError("dynamics.path", None, "table model requires a path")
        stray = sorted(set(dynamics) - {"path"})
        if stray:
            raise ConfigError(f"dynamics.{stray[0]}", dynamics[stray[0]], "unknown table model key")
        table_path = _resolve(dynamics["path"], base)
        if not table_path.is_file():
            raise ConfigError("dynamics.path", dynamics["path"], "table file does not exist")
        dynamics["path"] = str(table_path)
    else:
        # validate numeric parameters now so errors name the field
        from src.dynamics.bicycle import BicycleParams
        dynamics = _build(BicycleParams, "dynamics", dynamics).model_dump()

    camera = sections["camera"]
    stray = sorted(set(camera) - _MOUNT_KEYS - _INTRINSIC_KEYS)
    if stray:
        raise ConfigError(f"camera.{stray[0]}", camera[stray[0]], "unknown camera key")

    mppi_keys = set(MppiParams.model_fields) | {"lambda"}
    stray = sorted(set(sections["mppi"]) - mppi_keys)
    if stray:
        raise ConfigError(f"mppi.{stray[0]}", sections["mppi"][stray[0]], "unknown mppi key")

    mount = _build(CameraMount, "camera", {k: v for k, v in camera.items() if k in _MOUNT_KEYS})
    intrinsics = _build(CameraIntrinsics, "camera", {k: v for k, v in camera.items() if k in _INTRINSIC_KEYS})
    mppi = _build(MppiParams, "mppi", sections["mppi"])
    costmap = _build(CostmapConfig, "costmap", sections["costmap"])
    try:
        dyn = DynamicsConfig(model=model_name, params=dynamics)
    except ValidationError as e:
        raise _config_error(e, "dynamics")

    config = _build(
        ExperimentConfig,
        "experiment",
        {**experiment, "mppi": mppi, "dynamics": dyn, "mount": mount, "intrinsics": intrinsics, "costmap": costmap},
    )
    logger.debug(f"Parsed experiment config from {source or '<text>'}")
    return config


def load_config(path: Union[str, Path]) -> ExperimentConfig:
    target = Path(path)
    if not target.is_file():
        raise ConfigError("config", str(path), "config file does not exist")
    return parse_config(target.read_text(), base_dir=target.parent, source=str(target))


def serialize_config(config: ExperimentConfig) -> str:
    """INI text that parses back to an equal config."""
    parser = configparser.ConfigParser(interpolation=None)
    parser["experiment"] = {
        "track": config.track,
        "episodes": str(config.episodes),
        "direction": config.direction,
        "seed_base": str(config.seed_base),
        "output_dir": str(config.output_dir),
        "max_steps": str(config.max_steps),
        "lap_target": repr(config.lap_target),
        "start_speed": repr(config.start_speed),
        "workers": str(config.workers),
    }
    parser["mppi"] = {k: _format_value(v) for k, v in config.mppi.model_dump(by_alias=True).items()}
    parser["dynamics"] = {"model": config.dynamics.model, **{k: _format_value(v) for k, v in config.dynamics.params.items()}}
    parser["camera"] = {
        **{k: _format_value(v) for k, v in config.mount.model_dump().items()},
        **{k: _format_value(v) for k, v in config.intrinsics.model_dump().items()},
    }
    parser["costmap"] = {k: _format_value(v) for k, v in config.costmap.model_dump().items()}

    lines = []
    for section in parser.sections():
        lines.append(f"[{section}]")
        lines.extend(f"{key} = {value}" for key, value in parser[section].items())
        lines.append("")
    return "\n".join(lines)


def _format_value(value: Any) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)
    return str(value)
