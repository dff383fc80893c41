"""Delimited output: cell formatting and table rendering."""

import numpy as np
import pytest

from lambda_holonomy.csvio import format_cell, render_table


def test_floats_carry_seventeen_significant_digits():
    cell = format_cell(1.0 / 3.0)
    assert cell == "3.3333333333333331e-01"
    assert float(cell) == 1.0 / 3.0  # round trip is exact


def test_format_cell_handles_the_non_float_cases():
    assert format_cell(True) == "true"
    assert format_cell(False) == "false"
    assert format_cell(7) == "7"
    assert format_cell("exact") == "exact"
    assert format_cell(np.float64(0.5)) == "5.0000000000000000e-01"


def test_render_table_layout():
    text = render_table(
        ["a", "b"], [[1.0, "x"], [2.0, "y"]], footer={"seed": 7}
    )
    lines = text.splitlines()
    assert lines[0] == "a,b"
    assert lines[1].startswith("1.0000000000000000e+00,")
    assert lines[-1] == "# seed = 7"


def test_render_table_rejects_ragged_rows():
    with pytest.raises(ValueError, match="header has 2"):
        render_table(["a", "b"], [[1.0]])
