"""Deterministic CSV/JSON report emission.

CSV rules: '.' decimal point, no locale, LF line endings, stable column
order, floats printed with repr (shortest round-trip form).  Metadata
travels in leading '# key=value' comment lines; a timestamp line appears
only when stamping is requested, so unstamped reports are byte-identical
across runs.
"""

from __future__ import annotations

import json
from datetime import datetime, timezone
from pathlib import Path

import numpy as np

from .sieve import fnv1a64


def fmt_value(x) -> str:
    """Render a cell: integers plainly, floats via repr, text as-is."""
    if isinstance(x, (bool, np.bool_)):
        return "true" if x else "false"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    if isinstance(x, (float, np.floating)):
        return repr(float(x))
    return str(x)


def render_csv(meta: dict, columns: list[str], rows, stamp: bool = False) -> str:
    lines = [f"# {key}={fmt_value(meta[key])}" for key in sorted(meta)]
    if stamp:
        lines.append(f"# timestamp={datetime.now(timezone.utc).isoformat()}")
    lines.append(",".join(columns))
    for row in rows:
        lines.append(",".join(fmt_value(cell) for cell in row))
    return "\n".join(lines) + "\n"


def write_csv(path: str | Path, meta: dict, columns: list[str], rows, stamp: bool = False) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="ascii", newline="\n") as fh:
        fh.write(render_csv(meta, columns, rows, stamp=stamp))
    return path


def csv_body(text: str) -> str:
    """The body of a CSV report: every line that is not a '#' comment."""
    return "\n".join(line for line in text.splitlines() if not line.startswith("#")) + "\n"


def write_json(path: str | Path, obj) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="ascii", newline="\n") as fh:
        fh.write(json.dumps(obj, sort_keys=True, indent=2))
        fh.write("\n")
    return path


def write_spectrum_export(
    base: str | Path, values: np.ndarray, source_function: str, meta: dict, stamp: bool = False
) -> tuple[Path, Path]:
    """Spectrum CSV with columns (xi, re, im, abs2) plus a JSON sidecar
    recording n, the transform convention, the source function, and an
    FNV-1a checksum of the full CSV bytes."""
    from .transform import FORWARD_CONVENTION

    base = Path(base)
    rows = (
        (xi, v.real, v.imag, abs(v) ** 2)
        for xi, v in enumerate(values)
    )
    csv_path = write_csv(
        base.with_suffix(".csv"), meta, ["xi", "re", "im", "abs2"], rows, stamp=stamp
    )
    digest = fnv1a64(csv_path.read_bytes())
    sidecar = {
        "n": int(values.shape[0]),
        "convention": FORWARD_CONVENTION,
        "source_function": source_function,
        "checksum": f"fnv1a64:{digest:016x}",
    }
    json_path = write_json(base.with_suffix(".json"), sidecar)
    return csv_path, json_path
