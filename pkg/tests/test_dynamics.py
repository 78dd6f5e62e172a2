"""Tests for the vehicle dynamics models."""

import json
import math

import numpy as np
import pytest
from pydantic import ValidationError

from src.core.exceptions import DynamicsError, ParseError
from src.dynamics.base import (
    Control,
    VehicleState,
    controls_to_array,
    rollout,
    rollout_batch,
    wrap_angle,
    wrap_angles,
)
from src.dynamics.bicycle import BicycleParams, KinematicBicycleModel, bicycle_step
from src.dynamics.registry import get_model_registry
from src.dynamics.table import TableDrivenModel, tabulate

pytestmark = pytest.mark.unit

DT = 0.02


class TestAngles:
    @pytest.mark.parametrize(
        "angle,expected",
        [
            (0.0, 0.0),
            (math.pi, math.pi),
            (-math.pi, math.pi),
            (1.5 * math.pi, -0.5 * math.pi),
            (5.0, 5.0 - 2 * math.pi),
            (-5.0, 2 * math.pi - 5.0),
        ],
    )
    def test_wrap_angle(self, angle, expected):
        assert wrap_angle(angle) == pytest.approx(expected, abs=1e-12)

    def test_far_angles_fold_into_range(self):
        for angle in (7.5 * math.pi, -9.25 * math.pi, 100.0):
            wrapped = wrap_angle(angle)
            assert -math.pi < wrapped <= math.pi
            assert math.sin(wrapped) == pytest.approx(math.sin(angle), abs=1e-9)

    def test_vectorized_matches_scalar(self, rng):
        angles = rng.uniform(-20, 20, 500)
        assert np.allclose(wrap_angles(angles), [wrap_angle(a) for a in angles], atol=1e-12)

    def test_state_yaw_is_normalized(self):
        assert VehicleState(yaw=1.5 * math.pi).yaw == pytest.approx(-0.5 * math.pi)


class TestBicycleStep:
    def test_at_rest_without_input_stays_put(self, bicycle):
        state = VehicleState(x=1.0, y=-2.0, yaw=0.4)
        assert bicycle.step(state, Control(), DT) == state

    def test_full_throttle_from_rest(self, bicycle):
        nxt = bicycle.step(VehicleState(), Control(throttle=1.0), DT)
        assert nxt.v_x == pytest.approx(0.08)
        assert nxt.yaw == 0.0
        assert nxt.x == 0.0

    def test_steering_sets_yaw_rate(self, bicycle):
        nxt = bicycle.step(VehicleState(v_x=5.0), Control(steering=0.5), DT)
        expected_rate = 5.0 * math.tan(0.175) / 0.57
        assert nxt.yaw == pytest.approx(expected_rate * DT, rel=1e-12)
        assert nxt.yaw_rate == pytest.approx(expected_rate, rel=1e-12)
        assert nxt.v_x == pytest.approx(5.0 - 0.2 * 5.0 * DT)

    def test_commands_are_clamped(self, bicycle):
        state = VehicleState(v_x=3.0)
        assert bicycle.step(state, Control(3.0, -7.0), DT) == bicycle.step(state, Control(1.0, -1.0), DT)

    @pytest.mark.parametrize("dt", [0.0, -0.02])
    def test_non_positive_dt_rejected(self, bicycle, dt):
        with pytest.raises(ValueError):
            bicycle.step(VehicleState(), Control(), dt)

    def test_substeps_refine_the_same_model(self):
        coarse = KinematicBicycleModel()
        fine = KinematicBicycleModel(substeps=4)
        state = VehicleState(v_x=4.0)
        a = coarse.step(state, Control(0.5, 0.8), DT)
        b = fine.step(state, Control(0.5, 0.8), DT)
        assert a.yaw == pytest.approx(b.yaw, rel=1e-2)
        assert a != b

    def test_free_function_matches_model(self, bicycle):
        state = VehicleState(x=1.0, v_x=2.0, yaw=0.3)
        control = Control(0.2, -0.4)
        assert bicycle_step(state, control, DT, BicycleParams()) == bicycle.step(state, control, DT)

    def test_invalid_params_rejected(self):
        with pytest.raises(ValidationError):
            BicycleParams(wheelbase=0.0)
        with pytest.raises(ValidationError):
            BicycleParams(max_steer=2.0)


class TestRollout:
    def test_horizon_one_equals_step(self, bicycle):
        state = VehicleState(v_x=3.0, yaw=0.1)
        control = Control(0.3, 0.2)
        assert rollout(bicycle, state, [control], DT) == [bicycle.step(state, control, DT)]

    def test_zero_controls_from_rest(self, bicycle):
        state = VehicleState(x=3.0, y=1.0, yaw=-1.0)
        assert rollout(bicycle, state, [Control()] * 10, DT) == [state] * 10

    def test_empty_controls_rejected(self, bicycle):
        with pytest.raises(ValueError):
            rollout(bicycle, VehicleState(), [], DT)

    def test_cruising_horizon_covers_six_meters(self, bicycle):
        # throttle 0.25 balances drag at 5 m/s
        states = rollout(bicycle, VehicleState(v_x=5.0), [Control(throttle=0.25)] * 60, DT)
        assert len(states) == 60
        assert states[-1].x == pytest.approx(6.0, rel=0.05)
        assert states[-1].y == pytest.approx(0.0, abs=1e-12)

    def test_semigroup(self, bicycle, rng):
        controls = rng.uniform(-1, 1, (30, 2))
        state = VehicleState(v_x=2.0, yaw=0.5)
        whole = rollout(bicycle, state, controls, DT)
        head = rollout(bicycle, state, controls[:12], DT)
        tail = rollout(bicycle, head[-1], controls[12:], DT)
        assert np.array_equal(whole[-1].to_array(), tail[-1].to_array())

    def test_mirror_symmetry(self, bicycle, rng):
        controls = rng.uniform(-1, 1, (40, 2))
        mirrored = controls * np.array([1.0, -1.0])
        state = VehicleState(v_x=3.0)
        for a, b in zip(rollout(bicycle, state, controls, DT), rollout(bicycle, state, mirrored, DT)):
            assert a.x == pytest.approx(b.x, abs=1e-12)
            assert a.y == pytest.approx(-b.y, abs=1e-12)
            assert a.yaw == pytest.approx(-b.yaw, abs=1e-12)

    def test_speed_decays_without_throttle(self, bicycle, rng):
        controls = np.column_stack([np.zeros(50), rng.uniform(-1, 1, 50)])
        speeds = [s.v_x for s in rollout(bicycle, VehicleState(v_x=4.0), controls, DT)]
        assert all(b <= a for a, b in zip(speeds, speeds[1:]))

    def test_batch_matches_single_rollouts(self, bicycle, rng):
        controls = rng.uniform(-1, 1, (5, 15, 2))
        state = VehicleState(v_x=2.5, yaw=-0.3)
        batch = rollout_batch(bicycle, state.to_array(), controls, DT)
        assert batch.shape == (5, 15, 7)
        for n in range(5):
            single = np.array([s.to_array() for s in rollout(bicycle, state, controls[n], DT)])
            assert np.allclose(batch[n], single, rtol=0, atol=1e-12)

    def test_batch_rejects_bad_shapes(self, bicycle):
        with pytest.raises(ValueError):
            rollout_batch(bicycle, np.zeros(7), np.zeros((3, 2)), DT)
        with pytest.raises(ValueError):
            rollout_batch(bicycle, np.zeros((2, 7)), np.zeros((3, 4, 2)), DT)

    def test_control_sequences_accept_dataclasses(self):
        arr = controls_to_array([Control(0.1, 0.2), Control(-0.3, 0.4)])
        assert arr.tolist() == [[0.1, 0.2], [-0.3, 0.4]]


class TestTableDrivenModel:
    @pytest.fixture
    def table(self, bicycle):
        return tabulate(bicycle, [0.0, 2.5, 5.0], [-1.0, -0.5, 0.0, 0.5, 1.0], [-1.0, 0.0, 0.25, 1.0])

    def test_matches_source_model_on_bins(self, bicycle, table):
        state = VehicleState(x=1.0, y=2.0, yaw=0.3, v_x=5.0)
        for control in (Control(0.0, 0.5), Control(0.25, -1.0), Control(1.0, 0.0)):
            a = table.step(state, control, DT).to_array()
            b = bicycle.step(state, control, DT).to_array()
            assert np.allclose(a, b, rtol=0, atol=1e-9)

    def test_nearest_bin_lookup(self, table):
        exact = table.lookup(np.array([5.0]), np.array([0.5]), np.array([0.25]))
        near = table.lookup(np.array([4.6]), np.array([0.6]), np.array([0.2]))
        assert np.array_equal(exact, near)

    def test_ties_pick_lower_bin(self, table):
        tie = table.lookup(np.array([1.25]), np.array([0.0]), np.array([0.0]))
        lower = table.lookup(np.array([0.0]), np.array([0.0]), np.array([0.0]))
        assert np.array_equal(tie, lower)

    def test_save_and_load(self, table, tmp_path):
        path = tmp_path / "table.json"
        table.save(path)
        loaded = TableDrivenModel.load(path)
        state = VehicleState(v_x=2.5, yaw=1.0)
        assert loaded.step(state, Control(0.25, 0.5), DT) == table.step(state, Control(0.25, 0.5), DT)

    def test_bad_shape_rejected(self):
        with pytest.raises(DynamicsError):
            TableDrivenModel([0.0], [0.0], [0.0, 1.0], np.zeros((1, 1, 1, 4)))

    def test_unsorted_bins_rejected(self):
        with pytest.raises(DynamicsError):
            TableDrivenModel([1.0, 0.0], [0.0], [0.0], np.zeros((2, 1, 1, 4)))

    def test_load_rejects_bad_json(self, tmp_path):
        path = tmp_path / "broken.json"
        path.write_text('{"format": ')
        with pytest.raises(ParseError):
            TableDrivenModel.load(path)

    def test_load_rejects_wrong_format(self, tmp_path):
        path = tmp_path / "other.json"
        path.write_text(json.dumps({"format": "something else"}))
        with pytest.raises(ParseError) as exc:
            TableDrivenModel.load(path)
        assert exc.value.offset == 0


class TestRegistry:
    def test_lists_builtin_models(self):
        assert get_model_registry().list_models() == ["bicycle", "table"]

    def test_creates_bicycle_with_params(self):
        model = get_model_registry().create("bicycle", wheelbase=0.5)
        assert model.describe()["wheelbase"] == 0.5

    def test_unknown_model(self):
        with pytest.raises(DynamicsError):
            get_model_registry().create("learned")

    def test_table_requires_path(self):
        with pytest.raises(DynamicsError):
            get_model_registry().create("table")

    def test_creates_table_from_file(self, bicycle, tmp_path):
        path = tmp_path / "t.json"
        tabulate(bicycle, [0.0, 1.0], [0.0], [0.0]).save(path)
        model = get_model_registry().create("table", path=str(path))
        assert isinstance(model, TableDrivenModel)
