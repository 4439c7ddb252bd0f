"""Deterministic report emission: canonical JSON, CSV summaries, JSONL traces.

Every machine-readable artifact goes through one normalization pass so that
identical computations yield byte-identical files regardless of thread
count, dict construction order, or numpy scalar types:

- dict keys are emitted in sorted order,
- exact rationals appear as two-element integer arrays ``[num, den]``,
- floats are rounded to 12 significant digits (reports that compare floats
  also carry the tolerance used for the comparison),
- numpy scalars and arrays are converted to plain Python values,
- no timestamps, hostnames, or other environment data are ever included.

Round-tripping a report through :func:`parse_report` and re-emitting it
reproduces the same bytes.
"""

from __future__ import annotations

import csv
import io
import json
from fractions import Fraction
from typing import Any, Iterable, Optional

import numpy as np

# ---------------------------------------------------------------------------
# normalization
# ---------------------------------------------------------------------------


def normalize(obj: Any) -> Any:
    """Convert to plain JSON types with deterministic float formatting."""
    if isinstance(obj, Fraction):
        return [obj.numerator, obj.denominator]
    if isinstance(obj, bool):
        return obj
    if isinstance(obj, (int, str)) or obj is None:
        return obj
    if isinstance(obj, float):
        return float(f"{obj:.12g}")
    if isinstance(obj, complex):
        return {"im": float(f"{obj.imag:.12g}"), "re": float(f"{obj.real:.12g}")}
    if isinstance(obj, np.bool_):
        return bool(obj)
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, np.floating):
        return float(f"{float(obj):.12g}")
    if isinstance(obj, np.complexfloating):
        return normalize(complex(obj))
    if isinstance(obj, np.ndarray):
        return [normalize(x) for x in obj.tolist()]
    if isinstance(obj, dict):
        items = sorted(obj.items(), key=lambda kv: str(kv[0]))
        return {str(k): normalize(v) for k, v in items}
    if isinstance(obj, (list, tuple, set, frozenset)):
        seq = sorted(obj) if isinstance(obj, (set, frozenset)) else obj
        return [normalize(x) for x in seq]
    if hasattr(obj, "as_dict"):
        return normalize(obj.as_dict())
    raise TypeError(f"cannot normalize {type(obj).__name__} for a report")


def canonical_json(obj: Any) -> str:
    """Canonical JSON text: sorted keys, two-space indent, trailing newline."""
    return json.dumps(normalize(obj), sort_keys=True, indent=2) + "\n"


def canonical_json_line(obj: Any) -> str:
    """One-line canonical JSON (for traces): sorted keys, compact separators."""
    return json.dumps(normalize(obj), sort_keys=True, separators=(",", ":")) + "\n"


def parse_report(text: str) -> Any:
    """Inverse of :func:`canonical_json` up to normalization."""
    return json.loads(text)


# ---------------------------------------------------------------------------
# CSV summaries
# ---------------------------------------------------------------------------


def _flatten(prefix: str, obj: Any, out: dict) -> None:
    if isinstance(obj, dict):
        for k in sorted(obj):
            _flatten(f"{prefix}.{k}" if prefix else str(k), obj[k], out)
    elif (
        isinstance(obj, list)
        and len(obj) == 2
        and all(isinstance(x, int) and not isinstance(x, bool) for x in obj)
    ):
        out[prefix] = f"{obj[0]}/{obj[1]}"
    elif isinstance(obj, list):
        cells = []
        for x in obj:
            nx = normalize(x)
            if isinstance(nx, (dict, list)):
                cells.append(json.dumps(nx, sort_keys=True, separators=(",", ":")))
            else:
                cells.append(str(nx))
        out[prefix] = ";".join(cells)
    else:
        out[prefix] = normalize(obj)


def csv_rows(rows: Iterable[Any]) -> str:
    """Flatten normalized dicts into a CSV table with a sorted union header.

    Two-element integer lists render as ``num/den``; other lists are joined
    with semicolons. Missing keys become empty cells.
    """
    flat: list[dict] = []
    for row in rows:
        cells: dict = {}
        _flatten("", normalize(row), cells)
        flat.append(cells)
    header = sorted({k for row in flat for k in row})
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=header, lineterminator="\n")
    writer.writeheader()
    for row in flat:
        writer.writerow({k: row.get(k, "") for k in header})
    return buf.getvalue()


# ---------------------------------------------------------------------------
# emission
# ---------------------------------------------------------------------------


def emit_report(obj: Any, *, path: Optional[str] = None, fmt: str = "json") -> str:
    """Render ``obj`` (dict or list of dicts) and optionally write it."""
    if fmt == "json":
        text = canonical_json(obj)
    elif fmt == "csv":
        rows = obj if isinstance(obj, list) else [obj]
        text = csv_rows(rows)
    else:
        raise ValueError(f"unknown report format: {fmt!r}")
    if path is not None:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)
    return text


def write_trace(records: Iterable[Any], path: str) -> None:
    """Write a JSONL trace: one canonical record per line, in order."""
    with open(path, "w", encoding="utf-8") as fh:
        for rec in records:
            fh.write(canonical_json_line(rec))
