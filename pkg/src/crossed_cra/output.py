"""Deterministic table writers (CSV, JSON) and static SVG plots."""

from __future__ import annotations

import io
import json
import math
from typing import Iterable, Mapping, Sequence

FLOAT_FORMAT = ".17g"


def format_value(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return str(int(value))
    if isinstance(value, int):
        return str(value)
    if isinstance(value, float):
        if not math.isfinite(value):
            return "nan" if math.isnan(value) else ("inf" if value > 0 else "-inf")
        return format(value, FLOAT_FORMAT)
    return str(value)


def _to_builtin(value):
    # numpy scalars -> python scalars
    if hasattr(value, "item") and not isinstance(value, (str, bytes)):
        return value.item()
    return value


def render_csv(header: Mapping[str, object], columns: Sequence[str], rows: Iterable[Mapping], notes: Sequence[str] = ()) -> str:
    buf = io.StringIO()
    for key, value in header.items():
        buf.write(f"# {key} = {format_value(_to_builtin(value))}\n")
    for note in notes:
        buf.write(f"# note: {note}\n")
    buf.write(",".join(columns) + "\n")
    for row in rows:
        buf.write(",".join(format_value(_to_builtin(row.get(c))) for c in columns) + "\n")
    return buf.getvalue()


def _json_value(value) -> str:
    value = _to_builtin(value)
    if isinstance(value, float):
        return format(value, FLOAT_FORMAT) if math.isfinite(value) else "null"
    if isinstance(value, Mapping):
        items = (f"{json.dumps(str(k))}: {_json_value(v)}" for k, v in value.items())
        return "{" + ", ".join(items) + "}"
    if isinstance(value, (list, tuple)):
        return "[" + ", ".join(_json_value(v) for v in value) + "]"
    return json.dumps(value)


def render_json(header: Mapping[str, object], columns: Sequence[str], rows: Iterable[Mapping], notes: Sequence[str] = ()) -> str:
    """One object with ``config``, ``notes`` and ``rows``; floats at 17 significant digits."""
    row_objs = [{c: row.get(c) for c in columns} for row in rows]
    lines = [
        "{",
        f'  "config": {_json_value(dict(header))},',
        f'  "notes": {_json_value(list(notes))},',
        '  "rows": [',
    ]
    lines.append(",\n".join("    " + _json_value(r) for r in row_objs))
    lines += ["  ]", "}"]
    return "\n".join(lines) + "\n"


def render(fmt: str, header, columns, rows, notes=()) -> str:
    if fmt == "csv":
        return render_csv(header, columns, rows, notes)
    if fmt == "json":
        return render_json(header, columns, rows, notes)
    raise ValueError(f"unknown output format {fmt!r}")


def write_svg(path, x, series: Mapping[str, Sequence[float]], *, xlabel="E", ylabel="", title=""):
    """Static line plot; bytes are reproducible for identical input."""
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    with matplotlib.rc_context({"svg.hashsalt": "crossed-cra", "svg.fonttype": "none"}):
        fig, ax = plt.subplots(figsize=(6.4, 4.0))
        for label, values in series.items():
            ax.plot(x, values, label=label, linewidth=1.2)
        ax.set_xlabel(xlabel)
        ax.set_ylabel(ylabel)
        if title:
            ax.set_title(title)
        ax.legend(frameon=False)
        fig.tight_layout()
        fig.savefig(path, format="svg", metadata={"Date": None})
        plt.close(fig)
