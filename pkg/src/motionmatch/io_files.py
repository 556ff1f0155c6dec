"""File formats: trajectory CSV, fitted-density JSON, result tables.

Trajectories travel as ``t,x,y`` CSV with an optional metadata comment
line carrying the sample rate and closedness. Reals are written with 17
significant digits so a write/read round trip is lossless.
"""

from __future__ import annotations

import io
import json

import numpy as np

from .inference import EmpiricalPdf
from .trajectory import Trajectory

__all__ = [
    "ParseError",
    "read_trajectory",
    "write_trajectory",
    "trajectory_to_text",
    "trajectory_from_text",
    "pdf_to_json",
    "pdf_from_json",
    "read_pdf",
    "write_pdf",
    "format_table_csv",
    "format_table_json",
]


class ParseError(ValueError):
    """Malformed input file; the message names the offending line."""


def _fmt(x: float) -> str:
    return format(float(x), ".17g")


def trajectory_to_text(traj: Trajectory, extra_meta: dict | None = None) -> str:
    lines = [f"# rate={_fmt(traj.sample_rate_hz)} closed={1 if traj.closed else 0}"]
    if extra_meta:
        lines.append("# " + " ".join(f"{k}={_cell(v)}" for k, v in extra_meta.items()))
    lines.append("t,x,y")
    for i, (x, y) in enumerate(traj.samples):
        t = i / traj.sample_rate_hz
        lines.append(f"{_fmt(t)},{_fmt(x)},{_fmt(y)}")
    return "\n".join(lines) + "\n"


def trajectory_from_text(text: str) -> Trajectory:
    lines = text.replace("\r\n", "\n").replace("\r", "\n").split("\n")
    rate = None
    closed = False
    lineno = 0
    if lines and lines[0].startswith("#"):
        meta = lines[0][1:].strip()
        for part in meta.split():
            if "=" not in part:
                raise ParseError(f"line 1: bad metadata entry {part!r}")
            key, _, val = part.partition("=")
            if key == "rate":
                rate = float(val)
            elif key == "closed":
                closed = val == "1"
        lines = lines[1:]
        lineno = 1
    # additional comment lines (tool/provenance metadata) are skipped
    while lines and lines[0].startswith("#"):
        lines = lines[1:]
        lineno += 1
    if not lines or lines[0].strip() != "t,x,y":
        raise ParseError(f"line {lineno + 1}: expected header 't,x,y'")
    ts, pts = [], []
    for offset, raw in enumerate(lines[1:], start=lineno + 2):
        line = raw.strip()
        if not line:
            continue
        parts = line.split(",")
        if len(parts) != 3:
            raise ParseError(f"line {offset}: expected 3 comma-separated values")
        try:
            t, x, y = (float(p) for p in parts)
        except ValueError:
            raise ParseError(f"line {offset}: non-numeric value") from None
        if ts and t <= ts[-1]:
            raise ParseError(f"line {offset}: timestamps must be strictly increasing")
        ts.append(t)
        pts.append((x, y))
    if len(pts) < 2:
        raise ParseError("trajectory needs at least 2 samples")
    if rate is None:
        rate = (len(ts) - 1) / (ts[-1] - ts[0])
    return Trajectory(np.asarray(pts), rate, closed)


def write_trajectory(traj: Trajectory, path_or_file, extra_meta: dict | None = None) -> None:
    text = trajectory_to_text(traj, extra_meta)
    if hasattr(path_or_file, "write"):
        path_or_file.write(text)
    else:
        with open(path_or_file, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)


def read_trajectory(path_or_file) -> Trajectory:
    if hasattr(path_or_file, "read"):
        return trajectory_from_text(path_or_file.read())
    with open(path_or_file, "r", encoding="utf-8", newline="") as fh:
        return trajectory_from_text(fh.read())


# ---------------------------------------------------------------------------
# fitted densities


def pdf_to_json(pdf: EmpiricalPdf, measure: str) -> str:
    doc = {
        "measure": measure,
        "label": pdf.label,
        "bandwidth": pdf.bandwidth,
        "samples": [float(v) for v in pdf.sample_values],
    }
    return json.dumps(doc, indent=2) + "\n"


def pdf_from_json(text: str) -> tuple[EmpiricalPdf, str]:
    doc = json.loads(text)
    pdf = EmpiricalPdf(np.asarray(doc["samples"], dtype=float), float(doc["bandwidth"]), doc["label"])
    return pdf, doc["measure"]


def write_pdf(pdf: EmpiricalPdf, measure: str, path_or_file) -> None:
    text = pdf_to_json(pdf, measure)
    if hasattr(path_or_file, "write"):
        path_or_file.write(text)
    else:
        with open(path_or_file, "w", encoding="utf-8") as fh:
            fh.write(text)


def read_pdf(path_or_file) -> tuple[EmpiricalPdf, str]:
    if hasattr(path_or_file, "read"):
        return pdf_from_json(path_or_file.read())
    with open(path_or_file, "r", encoding="utf-8") as fh:
        return pdf_from_json(fh.read())


# ---------------------------------------------------------------------------
# result tables


def _cell(v) -> str:
    if isinstance(v, float):
        return _fmt(v)
    return str(v)


def format_table_csv(rows: list[dict], meta: dict | None = None) -> str:
    """Rows as CSV preceded by ``# key=value`` metadata comment lines."""
    out = io.StringIO()
    if meta:
        for key, val in meta.items():
            out.write(f"# {key}={_cell(val)}\n")
    if rows:
        cols = list(rows[0].keys())
        out.write(",".join(cols) + "\n")
        for row in rows:
            out.write(",".join(_cell(row[c]) for c in cols) + "\n")
    return out.getvalue()


def format_table_json(rows: list[dict], meta: dict | None = None) -> str:
    return json.dumps({"meta": meta or {}, "rows": rows}, indent=2) + "\n"
