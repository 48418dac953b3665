"""Deterministic CSV output.

Layout: a block of '#'-prefixed header comments echoing every run parameter (sorted by
key), one column-name line, then data rows. Floats use 17 significant digits so each
value round-trips exactly; identical inputs give byte-identical files.
"""

from __future__ import annotations

import csv
import io
import os
from collections.abc import Iterable, Mapping, Sequence
from typing import Any

from betactl import __version__
from betactl.util.formatting import format_sci


def _cell(value: Any) -> str:
    if isinstance(value, (int, float)):
        return format_sci(value)
    if value is None:
        return ""
    return str(value)


def _param(value: Any) -> str:
    if isinstance(value, (list, tuple)):
        return "[" + ", ".join(_param(v) for v in value) + "]"
    if isinstance(value, float):
        return repr(value)
    return str(value)


def render_csv(
    columns: Sequence[str],
    rows: Iterable[Sequence[Any]],
    parameters: Mapping[str, Any] | None = None,
    title: str | None = None,
) -> str:
    """Render rows to a CSV string with the parameter header block."""
    buf = io.StringIO()
    buf.write(f"# betactl {__version__}\n")
    if title:
        buf.write(f"# {title}\n")
    for key in sorted(parameters or {}):
        buf.write(f"# {key} = {_param(parameters[key])}\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([_cell(v) for v in row])
    return buf.getvalue()


def write_csv(path: str | None, text: str) -> None:
    """Write rendered CSV to path, or stdout when path is None or '-'."""
    if path is None or path == "-":
        print(text, end="")
        return
    parent = os.path.dirname(os.path.abspath(path))
    os.makedirs(parent, exist_ok=True)
    with open(path, "w", newline="") as f:
        f.write(text)
