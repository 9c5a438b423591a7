"""CSV / JSON emission with a fixed schema version and lossless float text."""

from __future__ import annotations

import json
import math
from typing import IO, Any, Iterable, Mapping, Sequence

SCHEMA_VERSION = "1"


def fmt(value: Any) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if value is None:
        return ""
    if isinstance(value, int):
        return str(value)
    if isinstance(value, float):
        if math.isnan(value) or math.isinf(value):
            return repr(value)
        return format(value, ".17g")
    return str(value)


def _header_comment(command: str, parameters: Mapping[str, Any]) -> str:
    parts = [f"schema_version={SCHEMA_VERSION}", f"command={command}"]
    parts += [f"{k}={fmt(v)}" for k, v in parameters.items()]
    return "# " + " ".join(parts)


def write_csv(
    stream: IO[str],
    command: str,
    parameters: Mapping[str, Any],
    columns: Sequence[str],
    rows: Iterable[Sequence[Any]],
    notes: Sequence[str] = (),
) -> None:
    """Write one comment line carrying the schema, optional notes, header and rows."""
    lines = [_header_comment(command, parameters)]
    lines += [f"# {note}" for note in notes]
    lines.append(",".join(columns))
    lines += [",".join(_csv_field(fmt(v)) for v in row) for row in rows]
    stream.write("\n".join(lines) + "\n")


def _csv_field(text: str) -> str:
    if any(ch in text for ch in ',"\n'):
        return '"' + text.replace('"', '""') + '"'
    return text


def _json_value(value: Any) -> str:
    if isinstance(value, bool) or value is None:
        return json.dumps(value)
    if isinstance(value, int):
        return str(value)
    if isinstance(value, float):
        if not math.isfinite(value):
            return json.dumps(str(value))
        return format(value, ".17g")
    if isinstance(value, Mapping):
        return "{" + ", ".join(f"{json.dumps(str(k))}: {_json_value(v)}" for k, v in value.items()) + "}"
    if isinstance(value, (list, tuple)):
        return "[" + ", ".join(_json_value(v) for v in value) + "]"
    return json.dumps(str(value))


def write_json(
    stream: IO[str],
    command: str,
    parameters: Mapping[str, Any],
    columns: Sequence[str],
    rows: Iterable[Sequence[Any]],
    notes: Sequence[str] = (),
) -> None:
    """Same record as :func:`write_csv`, with rows as objects keyed by column."""
    record = {
        "schema_version": SCHEMA_VERSION,
        "command": command,
        "parameters": dict(parameters),
        "payload": [dict(zip(columns, row)) for row in rows],
    }
    if notes:
        record["notes"] = list(notes)
    stream.write(_json_value(record) + "\n")


def writer(fmt_name: str):
    return write_json if fmt_name == "json" else write_csv
