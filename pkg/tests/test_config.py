"""Config file parsing, canonical form, and the footer hash."""

import math

import pytest

from lambda_holonomy.config import (
    canonical_lines,
    config_hash,
    load_config,
    parse_assignments,
)


def test_assignments_strip_comments_and_blanks():
    raw = parse_assignments("omega = 2.5  # drive\n\n# full-line comment\ndelta=1\n")
    assert raw == {"omega": "2.5", "delta": "1"}


def test_assignments_reject_missing_equals():
    with pytest.raises(ValueError, match="line 2"):
        parse_assignments("omega = 1\njust words\n")


def test_assignments_reject_duplicate_keys():
    with pytest.raises(ValueError, match="assigned twice"):
        parse_assignments("omega = 1\nomega = 2\n")


def test_defaults_fill_missing_keys():
    cfg = load_config("spectrum", "")
    assert cfg == {"omega": 3.0, "delta": 4.0, "theta": 0.7, "phi": 0.3, "grid_n": 50}


def test_unknown_keys_list_the_accepted_vocabulary():
    with pytest.raises(ValueError, match="accepted keys.*theta"):
        load_config("spectrum", "loop = phi-circle\n")


def test_unknown_command_is_rejected():
    with pytest.raises(ValueError, match="unknown command"):
        load_config("transmogrify", "")


def test_bad_value_names_the_key():
    with pytest.raises(ValueError, match="'grid_n'"):
        load_config("spectrum", "grid_n = many\n")


def test_float_list_parsing():
    cfg = load_config("sweep", "delta_over_omega_list = 10, 30,100\n")
    assert cfg["delta_over_omega_list"] == (10.0, 30.0, 100.0)


def test_waypoint_parsing():
    cfg = load_config("holonomy", "loop = waypoints\nwaypoints = 0.5:0.0; 1.0:2.0; 1.2:4.2\n")
    assert cfg["waypoints"] == ((0.5, 0.0), (1.0, 2.0), (1.2, 4.2))
    with pytest.raises(ValueError, match="theta:phi"):
        load_config("holonomy", "waypoints = 0.5-0.0\n")


def test_loop_defaults_for_holonomy():
    cfg = load_config("holonomy", "")
    assert cfg["loop"] == "lissajous"
    assert cfg["loop_theta0"] == pytest.approx(math.pi / 3)
    assert cfg["variant"] == "exact"


def test_hash_is_stable_and_order_independent():
    a = load_config("spectrum", "omega = 2\ndelta = 1\n")
    b = load_config("spectrum", "delta = 1\nomega = 2\n")
    assert config_hash(a) == config_hash(b)
    assert len(config_hash(a)) == 12
    c = load_config("spectrum", "omega = 2.0001\ndelta = 1\n")
    assert config_hash(a) != config_hash(c)


def test_canonical_lines_are_sorted():
    cfg = load_config("spectrum", "")
    lines = canonical_lines(cfg)
    assert lines == sorted(lines)
    assert "omega = 3" in lines
