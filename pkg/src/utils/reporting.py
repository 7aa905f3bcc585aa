"""CSV and JSON rendering of command results."""
import csv
import io
import json
import math
import sys
from pathlib import Path
from typing import Any, Dict, Iterable, List, Optional, Sequence

TOOL_NAME = "mtee-lab"
SCHEMA_VERSION = 1


def format_value(value: Any) -> str:
    """17 significant digits for floats; empty string for missing values."""
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        if math.isinf(value):
            return "inf" if value > 0 else "-inf"
        return f"{value:.17g}"
    return str(value)


def render_csv(
    schema: str,
    header: Sequence[str],
    rows: Iterable[Sequence[Any]],
    meta: Optional[Dict[str, Any]] = None,
) -> str:
    buffer = io.StringIO()
    buffer.write(f"# {TOOL_NAME} v{SCHEMA_VERSION} schema={schema}\r\n")
    for key, value in (meta or {}).items():
        buffer.write(f"# {key}={format_value(value)}\r\n")
    writer = csv.writer(buffer, lineterminator="\r\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([format_value(v) for v in row])
    return buffer.getvalue()


def render_json(
    schema: str,
    payload_key: str,
    payload: Any,
    meta: Optional[Dict[str, Any]] = None,
) -> str:
    document = {
        "schema": schema,
        "version": SCHEMA_VERSION,
        "meta": meta or {},
        payload_key: payload,
    }
    return json.dumps(document, indent=2) + "\n"


def rows_as_dicts(header: Sequence[str], rows: Iterable[Sequence[Any]]) -> List[Dict[str, Any]]:
    return [dict(zip(header, row)) for row in rows]


def emit(text: str, path: Optional[str] = None) -> None:
    """Write ``text`` to ``path`` or to stdout."""
    if path:
        Path(path).write_text(text, encoding="utf-8", newline="")
    else:
        sys.stdout.write(text)
        sys.stdout.flush()
