"""Delimited output with full-precision floats and a provenance footer.

Floats are written as '%.16e' (17 significant digits) so a value read
back reproduces the double exactly; everything else goes through str.
The footer is '# key = value' lines after the data, carrying the
effective configuration, its hash, and whatever run metadata the caller
adds, so a table is self-describing without a sidecar file.
"""

from __future__ import annotations

import io
from typing import Any, Iterable, Sequence


def format_cell(value: Any) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return f"{value:.16e}"
    return str(value)


def render_table(
    header: Sequence[str],
    rows: Iterable[Sequence[Any]],
    footer: dict[str, Any] | None = None,
    sep: str = ",",
) -> str:
    buf = io.StringIO()
    buf.write(sep.join(header) + "\n")
    width = len(header)
    for i, row in enumerate(rows):
        if len(row) != width:
            raise ValueError(
                f"row {i} has {len(row)} cells, header has {width}"
            )
        buf.write(sep.join(format_cell(cell) for cell in row) + "\n")
    for key, value in (footer or {}).items():
        buf.write(f"# {key} = {format_cell(value)}\n")
    return buf.getvalue()


def write_table(
    path: str,
    header: Sequence[str],
    rows: Iterable[Sequence[Any]],
    footer: dict[str, Any] | None = None,
    sep: str = ",",
) -> None:
    text = render_table(header, rows, footer, sep)
    with open(path, "w") as fh:
        fh.write(text)
