"""Report assembly and serialization (JSON and CSV).

Floats are written with 17 significant digits, which round-trips every
double exactly, so serialize -> parse -> serialize is byte-identical.
Non-finite floats are written as the strings "inf", "-inf" and "nan";
complex numbers as {"re": ..., "im": ...}.
"""

from __future__ import annotations

import csv
import dataclasses
import enum
import io
import json
import math
from typing import Any, Iterable

import numpy as np

from .core import Point

REPORT_KEYS = ("command", "config", "inputs", "results", "warnings", "wall_ms")


def fmt_float(x: float) -> str:
    x = float(x)
    if math.isnan(x):
        return "nan"
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    if x == 0 and math.copysign(1.0, x) < 0:
        return "-0.0"  # "-0" would read back as the integer 0
    return format(x, ".17g")


def to_plain(obj: Any) -> Any:
    """Convert dataclasses, Points, enums, numpy scalars and arrays into
    dicts, lists and Python scalars."""
    if obj is None or isinstance(obj, (bool, str)):
        return obj
    if isinstance(obj, enum.Enum):
        return obj.value
    if isinstance(obj, (np.bool_,)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        return float(obj)
    if isinstance(obj, (complex, np.complexfloating)):
        return {"re": float(obj.real), "im": float(obj.imag)}
    if isinstance(obj, Point):
        return {"x": obj.x, "y": obj.y}
    if dataclasses.is_dataclass(obj) and not isinstance(obj, type):
        return {f.name: to_plain(getattr(obj, f.name)) for f in dataclasses.fields(obj)}
    if isinstance(obj, dict):
        return {str(k): to_plain(v) for k, v in obj.items()}
    if isinstance(obj, np.ndarray):
        return [to_plain(v) for v in obj.tolist()]
    if isinstance(obj, (list, tuple)):
        return [to_plain(v) for v in obj]
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def _emit(v, indent: int, out: list):
    pad = "  " * indent
    if v is None:
        out.append("null")
    elif v is True:
        out.append("true")
    elif v is False:
        out.append("false")
    elif isinstance(v, int):
        out.append(str(v))
    elif isinstance(v, float):
        s = fmt_float(v)
        out.append(s if math.isfinite(v) else json.dumps(s))
    elif isinstance(v, str):
        out.append(json.dumps(v))
    elif isinstance(v, dict):
        if not v:
            out.append("{}")
            return
        out.append("{\n")
        for k, (key, item) in enumerate(v.items()):
            out.append(f"{pad}  {json.dumps(key)}: ")
            _emit(item, indent + 1, out)
            out.append(",\n" if k < len(v) - 1 else "\n")
        out.append(pad + "}")
    elif isinstance(v, list):
        if not v:
            out.append("[]")
            return
        out.append("[\n")
        for k, item in enumerate(v):
            out.append(pad + "  ")
            _emit(item, indent + 1, out)
            out.append(",\n" if k < len(v) - 1 else "\n")
        out.append(pad + "]")
    else:
        raise TypeError(f"cannot emit {type(v).__name__}")


def dumps(obj: Any) -> str:
    out: list[str] = []
    _emit(to_plain(obj), 0, out)
    return "".join(out) + "\n"


def loads(text: str) -> Any:
    return json.loads(text)


def make_report(command: str, config: dict, inputs: dict, results: Any, warnings: Iterable[str] = ()) -> dict:
    # wall time is left null so that reruns are byte-identical
    return {
        "command": command,
        "config": config,
        "inputs": inputs,
        "results": to_plain(results),
        "warnings": list(warnings),
        "wall_ms": None,
    }


def _cell(v) -> str:
    if v is None:
        return ""
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return fmt_float(v)
    if isinstance(v, (dict, list)):
        return dumps(v).strip()
    return str(v)


def flatten(row: dict, prefix: str = "") -> dict:
    """Nested dicts become dotted columns; lists stay JSON cells."""
    out = {}
    for k, v in row.items():
        key = f"{prefix}{k}"
        if isinstance(v, dict):
            out.update(flatten(v, key + "."))
        else:
            out[key] = v
    return out


def to_csv(rows: list[dict]) -> str:
    """RFC 4180 CSV (CRLF line ends, minimal quoting) with a header row."""
    flat = [flatten(to_plain(r)) for r in rows]
    header: list[str] = []
    for r in flat:
        for k in r:
            if k not in header:
                header.append(k)
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\r\n")
    w.writerow(header)
    for r in flat:
        w.writerow([_cell(r.get(k)) for k in header])
    return buf.getvalue()
