"""Output formatting helpers."""

from __future__ import annotations

import json
import math
import sys
from typing import NoReturn


def truncate(s: str, max_length: int) -> str:
    """Truncate a string with ellipsis."""
    if not s or len(s) <= max_length:
        return s or ""
    return s[: max_length - 3] + "..."


def format_sci(value: float) -> str:
    """17 significant digits in scientific notation; round-trips every double."""
    if isinstance(value, bool):
        return str(int(value))
    if isinstance(value, int):
        return str(value)
    if math.isnan(value):
        return "nan"
    if math.isinf(value):
        return "inf" if value > 0 else "-inf"
    return f"{value:.16e}"


def format_short(value: float) -> str:
    """Compact human-readable number for tables and summaries."""
    if isinstance(value, int) and not isinstance(value, bool):
        return str(value)
    return f"{value:.10g}"


def format_table(headers: list[str], rows: list[list[str]], col_widths: list[int]) -> str:
    """Build a Unicode box-drawing bordered table.

    Args:
        headers: Column header labels.
        rows:     Data rows; each inner list must have the same length as headers.
        col_widths: Maximum display width for each column (content is truncated to fit).
    """
    n = len(headers)
    # Clamp widths to at least the header length so headers always fit.
    widths = [max(col_widths[i], len(headers[i])) for i in range(n)]

    def _cell(text: str, width: int) -> str:
        return truncate(str(text), width).ljust(width)

    def _border(left: str, sep: str, right: str) -> str:
        return left + sep.join("─" * (w + 2) for w in widths) + right

    def _row_line(cells: list[str]) -> str:
        return "│" + "│".join(f" {_cell(cells[i], widths[i])} " for i in range(n)) + "│"

    lines = [_border("┌", "┬", "┐"), _row_line(headers), _border("├", "┼", "┤")]
    lines.extend(_row_line(row) for row in rows)
    lines.append(_border("└", "┴", "┘"))
    return "\n".join(lines)


def _jsonable(obj: object) -> object:
    """Replace non-finite floats, which strict JSON cannot carry, with strings."""
    if isinstance(obj, dict):
        return {k: _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(item) for item in obj]
    if isinstance(obj, float) and not math.isfinite(obj):
        return format_sci(obj)
    return obj


def output(text: str, *, json_data: object = None, use_json: bool = False) -> None:
    """Print text output, or JSON if --json was passed."""
    if use_json and json_data is not None:
        print(json.dumps(_jsonable(json_data), indent=2, default=str))
    else:
        print(text)


def format_output(args: object, text: str, *, json_data: object = None) -> None:
    """Extract use_json from args and call output(). DRY wrapper for commands."""
    use_json = getattr(args, "json", False)
    output(text, json_data=json_data, use_json=use_json)


def die(msg: str, code: int = 1) -> NoReturn:
    """Print error and exit."""
    print(f"Error: {msg}", file=sys.stderr)
    sys.exit(code)
