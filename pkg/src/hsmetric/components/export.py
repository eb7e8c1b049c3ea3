"""
CSV and JSON writers for solution surfaces, Eulerian piece tables and metric
reports. Output is deterministic: rows are written in (t, η) or input order
and floats use 17 significant digits.
"""

import csv
import json
from collections.abc import Iterable, Sequence
from typing import Any, TextIO

from ..utils.encoding import encode_real, format_real
from .eulerian import EulerianState
from .metric import REPORT_FIELDS, MetricReport
from .transport import SurfaceRow

SURFACE_HEADER = ("t", "eta", "chi", "U")
EULERIAN_HEADER = ("t", "record", "a", "b", "value", "slope")


def _writer(stream: TextIO) -> Any:
    return csv.writer(stream, lineterminator="\n")


def eulerian_rows(t: float, state: EulerianState) -> list[list[str]]:
    """
    Piece table of (u, μ) at time t.

    ``u`` rows carry the intercept and slope of u = c0 + c1·x on (a, b);
    ``atom`` rows have a = b = location and value = mass; ``density`` rows
    carry the density on [a, b).
    """
    ts = format_real(t)
    rows = [
        [ts, "u", format_real(a), format_real(b), format_real(c0), format_real(c1)]
        for a, b, c0, c1 in state.u.affine_pieces()
    ]
    rows += [
        [ts, "atom", format_real(a.location), format_real(a.location), format_real(a.mass), "0"]
        for a in state.mu.atoms
    ]
    rows += [
        [ts, "density", format_real(p.start), format_real(p.end), format_real(p.value), "0"]
        for p in state.mu.density
    ]
    return rows


def write_solve_csv(
    stream: TextIO,
    surface: Iterable[SurfaceRow],
    states: Sequence[tuple[float, EulerianState]],
) -> None:
    """Surface block, a blank line, then the Eulerian block."""
    writer = _writer(stream)
    writer.writerow(SURFACE_HEADER)
    for row in surface:
        writer.writerow([format_real(row.t), format_real(row.eta), format_real(row.chi), format_real(row.U)])
    stream.write("\n")
    writer.writerow(EULERIAN_HEADER)
    for t, state in states:
        writer.writerows(eulerian_rows(t, state))


def write_solve_json(
    stream: TextIO,
    scenario: str,
    surface: Iterable[SurfaceRow],
    states: Sequence[tuple[float, EulerianState]],
) -> None:
    document = {
        "scenario": scenario,
        "surface": [
            {"t": r.t, "eta": r.eta, "chi": encode_real(r.chi), "U": encode_real(r.U)}
            for r in surface
        ],
        "eulerian": [{"t": t, **state.to_record()} for t, state in states],
    }
    json.dump(document, stream, indent=2)
    stream.write("\n")


def write_metric_csv(stream: TextIO, reports: Iterable[MetricReport]) -> None:
    writer = _writer(stream)
    writer.writerow(REPORT_FIELDS)
    writer.writerows(r.to_row() for r in reports)


def write_metric_json(stream: TextIO, a: str, b: str, reports: Iterable[MetricReport]) -> None:
    json.dump({"a": a, "b": b, "reports": [r.to_record() for r in reports]}, stream, indent=2)
    stream.write("\n")
