import math

import pytest

from boxpush.errors import FormatError
from boxpush.scenario import (
    Scenario,
    default_scenario,
    format_scenario,
    load_scenario,
    parse_scenario,
    write_scenario,
)


def test_default_scenario_shape():
    sc = default_scenario()
    assert sc.arena_width == 800.0 and sc.arena_height == 600.0
    assert len(sc.walls) == 4
    assert sc.obstacles == ((400.0, 300.0, 50.0),)
    assert sc.goal == (650.0, 300.0, 30.0)
    assert sc.box_start == (150.0, 300.0)
    assert sc.box_side == 40.0
    assert sc.sensor_radius == 150.0
    assert sc.max_steps == 300


def test_roundtrip(tmp_path):
    sc = default_scenario()
    path = tmp_path / "arena.txt"
    write_scenario(sc, path)
    assert load_scenario(path) == sc


def test_parse_rejects_unknown_key():
    text = format_scenario(default_scenario()) + "frobnicate=1\n"
    with pytest.raises(FormatError) as err:
        parse_scenario(text)
    assert "unknown key" in str(err.value)


def test_parse_rejects_garbage_line():
    with pytest.raises(FormatError):
        parse_scenario("arena_width 800\n")


def test_parse_rejects_duplicate_scalar():
    text = "arena_width=800\narena_width=900\n"
    with pytest.raises(FormatError) as err:
        parse_scenario(text)
    assert err.value.line_no == 2


def test_parse_reports_missing_required():
    with pytest.raises(FormatError) as err:
        parse_scenario("arena_width=800\narena_height=600\ngoal=1,1,1\n")
    assert "box_start" in str(err.value)


def test_parse_bad_value_carries_line_number():
    with pytest.raises(FormatError) as err:
        parse_scenario("arena_width=800\narena_height=oops\ngoal=1,1,1\nbox_start=5,5\n")
    assert err.value.line_no == 2


def test_comments_and_blanks_allowed():
    text = "# test arena\n\n" + format_scenario(default_scenario())
    assert parse_scenario(text) == default_scenario()


def test_box_start_clearance_from_wall_enforced():
    with pytest.raises(ValueError, match="wall"):
        Scenario(
            arena_width=400, arena_height=400, goal=(300, 300, 20),
            box_start=(30, 200), walls=((0.0, 0.0, 0.0, 400.0),),
        )


def test_box_start_clearance_from_obstacle_enforced():
    with pytest.raises(ValueError, match="obstacle"):
        Scenario(
            arena_width=400, arena_height=400, goal=(300, 300, 20),
            box_start=(100, 200), obstacles=((140.0, 200.0, 10.0),),
        )


def test_boundary_clearance_is_allowed():
    # distance exactly box_side from the obstacle surface is legal
    Scenario(
        arena_width=400, arena_height=400, goal=(300, 300, 20),
        box_start=(100, 200), obstacles=((150.0, 200.0, 10.0),),
    )


def test_sensor_radius_must_exceed_box_side():
    with pytest.raises(ValueError, match="sensor_radius"):
        Scenario(
            arena_width=400, arena_height=400, goal=(300, 300, 20),
            box_start=(100, 200), sensor_radius=40.0,
        )


def test_max_steps_at_least_one():
    with pytest.raises(ValueError, match="max_steps"):
        Scenario(
            arena_width=400, arena_height=400, goal=(300, 300, 20),
            box_start=(100, 200), max_steps=0,
        )
