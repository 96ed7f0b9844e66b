"""Serialization and file emission for the command-line front end.

Documents carry a schema version, the run configuration that produced
them, the payload, and method notes.  Rational numbers serialize as
{"numerator": "...", "denominator": "..."} decimal strings so they
round-trip exactly; floats serialize as 17-significant-digit strings,
which round-trip bit-exactly through repr parsing.  JSON output is
key-sorted so identical runs emit identical bytes.  Files are written
whole via a temporary file and an atomic replace, never partially.
"""

from __future__ import annotations

import csv
import io
import json
import os
import tempfile
from fractions import Fraction
from typing import Optional, Sequence

from .series import EnergySeries, TruncatedSeries

SCHEMA_VERSION = "1"


def format_float(x) -> str:
    # +0.0 normalizes a negative zero without touching any other value.
    return f"{float(x) + 0.0:.17g}"


def encode_number(x):
    """JSON encoding: Fraction -> numerator/denominator decimal strings,
    float -> 17-digit string, int stays int."""
    if isinstance(x, Fraction):
        return {"numerator": str(x.numerator), "denominator": str(x.denominator)}
    if isinstance(x, bool) or isinstance(x, int):
        return x
    return format_float(x)


def decode_number(obj):
    if isinstance(obj, dict):
        return Fraction(int(obj["numerator"]), int(obj["denominator"]))
    if isinstance(obj, str):
        return float(obj)
    return obj


def csv_number(x) -> str:
    """CSV cell encoding: rationals as 'p/q' literals, floats 17-digit."""
    if isinstance(x, Fraction):
        return f"{x.numerator}/{x.denominator}" if x.denominator != 1 else str(x.numerator)
    if isinstance(x, bool) or isinstance(x, int):
        return str(x)
    if x is None:
        return ""
    return format_float(x)


def encode_series(series: TruncatedSeries) -> dict:
    return {
        "variable": series.variable,
        "domain": series.domain,
        "order": series.order,
        "coefficients": [encode_number(c) for c in series.coeffs],
    }


def decode_series(obj: dict) -> TruncatedSeries:
    coeffs = [decode_number(c) for c in obj["coefficients"]]
    return TruncatedSeries(coeffs, obj.get("variable", "lambda"))


def encode_energy_series(es: EnergySeries) -> dict:
    doc = encode_series(es.series)
    if es.label:
        doc["label"] = es.label
    return doc


def result_document(command: str, config: dict, payload: dict, notes: Optional[dict] = None) -> dict:
    return {
        "schema_version": SCHEMA_VERSION,
        "command": command,
        "config": config,
        "payload": payload,
        "notes": notes or {},
    }


def dump_json(doc: dict) -> str:
    return json.dumps(doc, sort_keys=True, indent=2) + "\n"


def load_document(path: str) -> dict:
    with open(path, "r", encoding="utf-8") as handle:
        doc = json.load(handle)
    if not isinstance(doc, dict) or doc.get("schema_version") != SCHEMA_VERSION:
        raise ValueError(f"unsupported document (expected schema_version {SCHEMA_VERSION!r})")
    return doc


def series_from_document(doc: dict) -> TruncatedSeries:
    payload = doc.get("payload", {})
    for key in ("energy_series", "series"):
        if key in payload:
            return decode_series(payload[key])
    raise ValueError("the document carries no series payload")


def dump_csv(header: Sequence[str], rows: Sequence[Sequence]) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(list(header))
    for row in rows:
        writer.writerow([csv_number(cell) if not isinstance(cell, str) else cell for cell in row])
    return buffer.getvalue()


def write_text_atomic(path: str, text: str) -> None:
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".wellpert-")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as handle:
            handle.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def write_bytes_atomic(path: str, blob: bytes) -> None:
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".wellpert-")
    try:
        with os.fdopen(fd, "wb") as handle:
            handle.write(blob)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def gnuplot_script(csv_name: str, column_names: Sequence[str]) -> str:
    """Plain-text plot script referencing the emitted CSV by name."""
    lines = [
        "# ground-state energy comparison; render with: gnuplot <this file>",
        f"# data: {csv_name}",
        "set datafile separator ','",
        "set key autotitle columnhead",
        "set xlabel 'strength'",
        "set ylabel 'ground-state energy'",
        "set grid",
        "plot \\",
    ]
    parts = []
    for idx in range(2, len(column_names) + 1):
        parts.append(f"  '{csv_name}' using 1:{idx} with linespoints")
    lines.append(", \\\n".join(parts))
    return "\n".join(lines) + "\n"


def render_scan_figure(columns: Sequence[str], rows: Sequence[Sequence]) -> bytes:
    """PNG bytes of the comparison plot (headless backend, no global state)."""
    from matplotlib.figure import Figure

    fig = Figure(figsize=(7.0, 4.5), dpi=100)
    ax = fig.add_subplot(111)
    xs = [float(r[0]) for r in rows]
    for c in range(1, len(columns)):
        ys, pts = [], []
        for x, row in zip(xs, rows):
            if row[c] is not None:
                pts.append(x)
                ys.append(float(row[c]))
        if pts:
            ax.plot(pts, ys, marker=".", label=columns[c])
    ax.set_xlabel("strength")
    ax.set_ylabel("ground-state energy")
    ax.grid(True, alpha=0.4)
    ax.legend()
    buffer = io.BytesIO()
    fig.savefig(buffer, format="png", metadata={"Software": "wellpert"})
    return buffer.getvalue()
