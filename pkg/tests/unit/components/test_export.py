"""
Unit tests for the export writers.
"""

import io
import json

import pytest

from hsmetric.components.export import (
    EULERIAN_HEADER,
    SURFACE_HEADER,
    eulerian_rows,
    write_metric_csv,
    write_metric_json,
    write_solve_csv,
    write_solve_json,
)
from hsmetric.components.metric import distance
from hsmetric.components.scenarios import Scenario, build
from hsmetric.components.transport import init_transport, solution_surface


@pytest.fixture(name="delta")
def delta_fixture() -> Scenario:
    return build("delta")


def test_eulerian_rows_for_an_atom(delta: Scenario):
    assert eulerian_rows(0.0, delta.initial) == [
        ["0", "u", "-inf", "0", "0", "0"],
        ["0", "u", "0", "inf", "0", "0"],
        ["0", "atom", "0", "0", "1", "0"],
    ]


def test_eulerian_rows_for_a_density():
    rows = eulerian_rows(0.5, build("wavebreak").initial)
    density = [r for r in rows if r[1] == "density"]
    assert density == [["0.5", "density", "0", "1", "1", "0"]]
    # u = −x on [0, 1]
    assert ["0.5", "u", "0", "1", "0", "-1"] in rows


def test_solve_csv_blocks(delta: Scenario):
    solution = delta.solution()
    surface = solution_surface(init_transport(delta.initial), [0.0, 1.0], 4)
    stream = io.StringIO()
    write_solve_csv(stream, surface, [(0.0, solution(0.0)), (1.0, solution(1.0))])
    lines = stream.getvalue().split("\n")
    assert lines[0] == ",".join(SURFACE_HEADER)
    blank = lines.index("")
    assert blank == len(surface) + 1
    assert lines[blank + 1] == ",".join(EULERIAN_HEADER)
    assert lines[-1] == ""
    assert all(line.startswith(("0,", "1,")) for line in lines[blank + 2 : -1])


def test_solve_json(delta: Scenario):
    surface = solution_surface(init_transport(delta.initial), [2.0], 2)
    stream = io.StringIO()
    write_solve_json(stream, delta.label, surface, [(2.0, delta.solution()(2.0))])
    document = json.loads(stream.getvalue())
    assert document["scenario"] == "delta:alpha=1.0"
    assert [row["t"] for row in document["surface"]] == [2.0] * len(surface)
    eulerian = document["eulerian"][0]
    assert eulerian["t"] == 2.0
    assert eulerian["energy"] == pytest.approx(1.0)
    assert set(eulerian) == {"t", "u", "mu", "energy"}


def test_metric_writers():
    first, second = build("delta", {"alpha": 1.0}), build("delta", {"alpha": 2.0})
    reports = [distance(first.initial, second.initial, t) for t in (0.0, 2.0)]

    stream = io.StringIO()
    write_metric_csv(stream, reports)
    lines = stream.getvalue().splitlines()
    assert lines[0] == "t,d,bound_factor,d0,satisfied,uinf,chi_l1,mass"
    assert lines[1] == "0,1,1,1,true,0,0,1"
    assert len(lines) == 3

    stream = io.StringIO()
    write_metric_json(stream, first.label, second.label, reports)
    document = json.loads(stream.getvalue())
    assert (document["a"], document["b"]) == ("delta:alpha=1.0", "delta:alpha=2.0")
    assert [r["t"] for r in document["reports"]] == [0.0, 2.0]
    assert document["reports"][1]["satisfied"] is True
