"""CSV, SVG and JSON serialisation of polygons, curve samples and verification reports.

CSV schema: header ``j,t,x0,x1,...``; ``t`` is blank for vertices not sampled from a
curve. A closed polygon is marked by a leading ``# topology=closed N=<count>`` line,
anything else is read as an open window whose indices come from the ``j`` column.
"""
from __future__ import annotations

import csv
import io
import json
import re
import sys
from pathlib import Path
from typing import Sequence

import numpy as np
from jinja2 import Environment, StrictUndefined

from .errors import CsvFormatError
from .models import Closed, OpenWindow, Polygon
from .polygon import SolitonResidualReport

SVG_TEMPLATE = Path(__file__).parent / "templates" / "polyline.svg.j2"
FLOAT_DIGITS = 17
SVG_COORD_DIGITS = 10


def format_float(value: float, digits: int = FLOAT_DIGITS) -> str:
    return format(float(value), f".{digits}g")


def _header(dim: int) -> list[str]:
    return ["j", "t", *(f"x{i}" for i in range(dim))]


def polygon_csv(
    polygon: Polygon, ts: Sequence[float] | None = None, digits: int = FLOAT_DIGITS
) -> str:
    if ts is not None and len(ts) != polygon.count:
        raise ValueError(f"got {len(ts)} parameter values for {polygon.count} vertices")
    handle = io.StringIO()
    if polygon.is_closed:
        handle.write(f"# topology=closed N={polygon.count}\n")
    writer = csv.writer(handle, lineterminator="\n")
    writer.writerow(_header(polygon.dim))
    for row, (j, vertex) in enumerate(zip(polygon.indices, polygon.vertices)):
        t = "" if ts is None else format_float(ts[row], digits)
        writer.writerow([int(j), t, *(format_float(x, digits) for x in vertex)])
    return handle.getvalue()


def samples_csv(samples: Sequence[tuple[float, np.ndarray]], digits: int = FLOAT_DIGITS) -> str:
    """Curve samples (t, c(t)) as the open window j = 0 .. len(samples) - 1."""
    if len(samples) < 2:
        raise ValueError(f"need at least 2 samples, got {len(samples)}")
    ts = [t for t, _ in samples]
    polygon = Polygon.open(np.array([point for _, point in samples]), j_min=0)
    return polygon_csv(polygon, ts, digits)


def _parse_topology(line: str) -> int | None:
    fields = dict(part.split("=", 1) for part in line.lstrip("#").split() if "=" in part)
    if fields.get("topology") != "closed":
        return None
    try:
        return int(fields["N"])
    except (KeyError, ValueError) as exc:
        raise CsvFormatError(f"closed topology line needs an integer N: {line.strip()!r}") from exc


def _parse_float(text: str, line_no: int) -> float:
    try:
        value = float(text)
    except ValueError as exc:
        raise CsvFormatError(f"line {line_no}: {text!r} is not a number") from exc
    if not np.isfinite(value):
        raise CsvFormatError(f"line {line_no}: non-finite value {text!r}")
    return value


def parse_polygon_csv(text: str) -> Polygon:
    closed_count = None
    data_lines: list[tuple[int, str]] = []
    for line_no, line in enumerate(text.splitlines(), start=1):
        stripped = line.strip()
        if not stripped:
            continue
        if stripped.startswith("#"):
            declared = _parse_topology(stripped)
            if declared is not None:
                closed_count = declared
            continue
        data_lines.append((line_no, line))
    if not data_lines:
        raise CsvFormatError("CSV contains no header")

    rows = list(csv.reader(line for _, line in data_lines))
    header = [cell.strip() for cell in rows[0]]
    dim = len(header) - 2
    if dim < 1 or header != _header(dim):
        raise CsvFormatError(f"header must be j,t,x0[,x1...], got {','.join(header)}")

    indices: list[int] = []
    vertices: list[list[float]] = []
    for (line_no, _), row in zip(data_lines[1:], rows[1:]):
        if len(row) != dim + 2:
            raise CsvFormatError(f"line {line_no}: expected {dim + 2} fields, got {len(row)}")
        try:
            indices.append(int(row[0]))
        except ValueError as exc:
            raise CsvFormatError(f"line {line_no}: index {row[0]!r} is not an integer") from exc
        if row[1].strip():
            _parse_float(row[1], line_no)
        vertices.append([_parse_float(cell, line_no) for cell in row[2:]])

    if len(vertices) < 2:
        raise CsvFormatError(f"need at least 2 vertices, got {len(vertices)}")
    start = indices[0]
    if indices != list(range(start, start + len(indices))):
        raise CsvFormatError("indices in column j must be consecutive and increasing")
    if closed_count is not None:
        if closed_count != len(vertices) or start != 0:
            raise CsvFormatError(
                f"closed polygon declares N={closed_count} but lists {len(vertices)} vertices from j={start}"
            )
        return Polygon(np.array(vertices), Closed(closed_count))
    return Polygon(np.array(vertices), OpenWindow(start, start + len(vertices) - 1))


def read_polygon_csv(path: Path) -> Polygon:
    return parse_polygon_csv(path.read_text())


def render_svg(
    points: np.ndarray,
    closed: bool = False,
    stroke_fraction: float = 0.005,
    size: int = 800,
    title: str = "polyline",
) -> str:
    """Single polyline with the y axis flipped and a viewBox fitted to the points."""
    points = np.asarray(points, dtype=float)
    if points.ndim != 2 or points.shape[1] != 2:
        raise ValueError(f"SVG output needs planar points, got shape {points.shape}")
    if closed:
        points = np.vstack((points, points[:1]))
    screen = np.column_stack((points[:, 0], -points[:, 1]))
    low, high = screen.min(axis=0), screen.max(axis=0)
    diagonal = float(np.hypot(*(high - low))) or 1.0
    stroke = stroke_fraction * diagonal
    low, high = low - stroke, high + stroke
    width, height = np.maximum(high - low, stroke)

    env = Environment(autoescape=True, undefined=StrictUndefined)
    return env.from_string(SVG_TEMPLATE.read_text()).render(
        size=size,
        title=title,
        view_box=" ".join(format_float(v, SVG_COORD_DIGITS) for v in (low[0], low[1], width, height)),
        points=" ".join(
            f"{format_float(x, SVG_COORD_DIGITS)},{format_float(y, SVG_COORD_DIGITS)}" for x, y in screen
        ),
        stroke_width=format_float(stroke, SVG_COORD_DIGITS),
    )


def report_payload(report: SolitonResidualReport) -> dict:
    return {
        "max_residual": report.max_residual,
        "argmax_index": report.argmax_index,
        "A": report.fitted_map.A.tolist(),
        "b": report.fitted_map.b.tolist(),
        "rank_deficient": report.rank_deficient,
    }


def report_json(report: SolitonResidualReport) -> str:
    return json.dumps(report_payload(report), indent=2)


def preset_file_stem(rank: int, preset_id: str, figure: str, max_words: int = 5) -> str:
    """'03_1b_scaling_case_1b': position, preset id, then the first words of the figure label."""
    words = re.findall(r"[a-z0-9]+", figure.lower())[:max_words]
    safe_id = "_".join(re.findall(r"[a-z0-9]+", preset_id.lower())) or "preset"
    return f"{rank:02d}_{safe_id}_{'_'.join(words) or 'curve'}"


def write_text(path: Path | None, text: str) -> Path | None:
    """Write to path (creating parents), or to stdout when path is None."""
    if path is None:
        sys.stdout.write(text)
        return None
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text)
    return path
