"""Tests for experiment config parsing."""

from pathlib import Path

import pytest

from src.core.config import Settings
from src.core.exceptions import ConfigError
from src.harness.config import ExperimentConfig, load_config, parse_config, serialize_config
from src.simworld.fixtures import oval
from src.simworld.trackfile import write_track_file

pytestmark = pytest.mark.unit

CONFIG_DIR = Path(__file__).resolve().parents[1] / "configs"


class TestParseConfig:
    def test_defaults(self, tmp_path):
        config = parse_config("[experiment]\ntrack = builtin:oval\n", base_dir=tmp_path)
        assert config.episodes == 20
        assert config.direction == "both"
        assert config.directions == ["ccw", "cw"]
        assert config.mppi.horizon == 60 and config.mppi.lambda_ == 1.0
        assert config.dynamics.model == "bicycle"
        assert config.output_dir == tmp_path.resolve() / "runs"
        assert not config.costmap.blur and config.costmap.effective_radius == 0

    def test_sections_and_inline_comments(self, tmp_path):
        text = """
[experiment]
track = builtin:corridor   ; straight
episodes = 3               # three
direction = ccw

[mppi]
lambda = 0.5
v_desired = 2.5

[camera]
pitch_deg = -15
focal_length = 60

[costmap]
blur = true
blur_radius = 2
"""
        config = parse_config(text, base_dir=tmp_path)
        assert config.track == "builtin:corridor"
        assert config.episodes == 3
        assert config.directions == ["ccw"]
        assert config.mppi.lambda_ == 0.5 and config.mppi.v_desired == 2.5
        assert config.mount.pitch_deg == -15.0
        assert config.intrinsics.focal_length == 60.0
        assert config.costmap.effective_radius == 2

    def test_relative_paths_follow_the_config_file(self, tmp_path):
        (tmp_path / "tracks").mkdir()
        config_dir = tmp_path / "configs"
        config_dir.mkdir()
        track = write_track_file(oval(), tmp_path / "tracks" / "loop.track")
        path = config_dir / "loop.ini"
        path.write_text("[experiment]\ntrack = ../tracks/loop.track\noutput_dir = ../out\n")
        config = load_config(path)
        assert config.track == str(track.resolve())
        assert config.output_dir == (tmp_path / "out").resolve()
        assert config.load_world().name == "loop"

    @pytest.mark.parametrize(
        "text,field",
        [
            ("[experiment]\nepisodes = 0\n", "experiment.episodes"),
            ("[experiment]\ndirection = sideways\n", "experiment.direction"),
            ("[experiment]\ntrack = nowhere.track\n", "experiment.track"),
            ("[experiment]\ntrack = builtin:monza\n", "experiment.track"),
            ("[experiment]\nlaps = 2\n", "experiment.laps"),
            ("[weather]\nrain = true\n", "section"),
            ("[mppi]\nhorizon = -3\n", "mppi.horizon"),
            ("[mppi]\nsigma = 1\n", "mppi.sigma"),
            ("[camera]\nfocal_length = 0\n", "camera.focal_length"),
            ("[camera]\nzoom = 2\n", "camera.zoom"),
            ("[dynamics]\nmodel = learned\n", "dynamics.model"),
            ("[dynamics]\nwheelbase = -1\n", "dynamics.wheelbase"),
            ("[dynamics]\nmodel = table\npath = missing.json\n", "dynamics.path"),
            ("[dynamics]\nmodel = table\n", "dynamics.path"),
            ("[dynamics]\nmodel = bicycle\nwheelbse = 2.0\n", "dynamics.wheelbse"),
            ("[dynamics]\nmodel = bicycle\npath = table.json\n", "dynamics.path"),
            ("[dynamics]\nmodel = table\npath = t.json\nwheelbase = 1\n", "dynamics.wheelbase"),
            ("[costmap]\nblur_radius = 0\n", "costmap.blur_radius"),
            ("[costmap]\nsharpen = true\n", "costmap.sharpen"),
            ("episodes = 3\n", "file"),
        ],
    )
    def test_errors_name_the_field(self, tmp_path, text, field):
        with pytest.raises(ConfigError) as exc:
            parse_config(text, base_dir=tmp_path)
        assert exc.value.field == field

    def test_missing_file(self, tmp_path):
        with pytest.raises(ConfigError) as exc:
            load_config(tmp_path / "absent.ini")
        assert exc.value.field == "config"

    def test_environment_does_not_override(self, tmp_path, monkeypatch):
        monkeypatch.setenv("EPISODES", "99")
        config = parse_config("[experiment]\nepisodes = 4\n", base_dir=tmp_path)
        assert config.episodes == 4
        assert config.output_dir == tmp_path.resolve() / "runs"

    def test_output_directory_only_comes_from_the_config(self):
        assert "output_dir" not in Settings.model_fields
        assert "output_dir" in ExperimentConfig.model_fields

class TestSerializeConfig:
    def test_round_trip(self, tmp_path):
        text = "[experiment]\ntrack = builtin:zigzag\nepisodes = 3\nstart_speed = 1.5\n[mppi]\nlambda = 0.25\n[costmap]\nblur = true\n"
        config = parse_config(text, base_dir=tmp_path)
        assert parse_config(serialize_config(config), base_dir=tmp_path) == config

    def test_overrides_are_validated(self):
        config = ExperimentConfig()
        assert config.with_overrides(episodes=5, seed_base=None).episodes == 5
        with pytest.raises(ConfigError) as exc:
            config.with_overrides(episodes=0)
        assert exc.value.field == "experiment.episodes"


@pytest.mark.parametrize("name", ["oval", "zigzag", "corridor", "complex"])
def test_shipped_configs_load(name):
    config = load_config(CONFIG_DIR / f"{name}.ini")
    assert config.load_world().is_bounded
    assert config.intrinsics.focal_length == 60.0
