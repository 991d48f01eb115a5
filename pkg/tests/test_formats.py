"Tests for complex JSON, point files and reports."

from __future__ import annotations

import json
from pathlib import Path

import numpy as np
import pytest

from cobordia import fixtures
from cobordia.cobordism import compute_cobordisms
from cobordia.complex import Block, ComplexError, Label, TieBreak
from cobordia.formats import FormatError, report
from cobordia.formats.complex_json import dump_complex, parse_complex, read_complex, write_complex
from cobordia.formats.points import (
    InputFormat,
    read_points,
    read_points_csv,
    read_points_xyz,
    write_points_csv,
)
from cobordia.geometry.alpha import PointCloud
from cobordia.kernel import kernel_pairs


def test_cylinder_survives_json(tmp_path: Path) -> None:
    path = tmp_path / "cylinder.json"
    write_complex(fixtures.cylinder(), path)
    loaded = read_complex(path)
    assert loaded.order == fixtures.cylinder().order
    assert loaded.cell(0).label is Label.A
    assert loaded.cell(30).simplex == (0, 1, 4)


def test_dump_omits_missing_simplex() -> None:
    text = dump_complex(parse_complex('{"cells": [{"id": 0, "dim": 0, "f": 0.0}]}'))
    assert "simplex" not in text
    assert json.loads(text)["cells"][0]["label"] == "I"


def test_corrupt_json() -> None:
    with pytest.raises(FormatError):
        parse_complex('{"cells": [')


def test_unknown_field_is_rejected() -> None:
    with pytest.raises(FormatError):
        parse_complex('{"cells": [{"id": 0, "dim": 0, "f": 0.0, "colour": "red"}]}')


def test_unknown_label_is_rejected() -> None:
    with pytest.raises(FormatError):
        parse_complex('{"cells": [{"id": 0, "dim": 0, "f": 0.0, "label": "C"}]}')


def test_invalid_complex_raises_with_report(tmp_path: Path) -> None:
    path = tmp_path / "bad.json"
    path.write_text('{"cells": [{"id": 0, "dim": 0, "f": 0.0, "label": "A"}]}')
    with pytest.raises(ComplexError) as excinfo:
        read_complex(path)
    assert excinfo.value.report is not None
    assert "empty-B" in excinfo.value.report.codes
    assert len(read_complex(path, validate=False)) == 1


def test_tie_break_applies_on_read() -> None:
    text = dump_complex(fixtures.two_tunnel())
    assert parse_complex(text, TieBreak.REVERSED_INPUT).order[:4] == (3, 2, 1, 0)


def test_missing_file(tmp_path: Path) -> None:
    with pytest.raises(FormatError):
        read_complex(tmp_path / "absent.json")


def test_input_format_from_suffix() -> None:
    assert InputFormat.from_path(Path("a.json")) is InputFormat.COMPLEX_JSON
    assert InputFormat.from_path(Path("a.CSV")) is InputFormat.CSV_POINTS
    assert InputFormat.from_path(Path("a.xyz")) is InputFormat.XYZ
    assert InputFormat.XYZ.is_points
    with pytest.raises(FormatError):
        InputFormat.from_path(Path("a.bin"))


def test_csv_points_skip_header_and_comments(tmp_path: Path) -> None:
    path = tmp_path / "points.csv"
    path.write_text("x,y\n# comment\n0.1,0.2\n\n0.3, 0.4\n")
    cloud = read_points_csv(path)
    assert cloud.dimension == 2
    assert np.allclose(cloud.points, [[0.1, 0.2], [0.3, 0.4]])


def test_csv_points_reject_ragged_rows(tmp_path: Path) -> None:
    path = tmp_path / "points.csv"
    path.write_text("0.1,0.2\n0.3,0.4,0.5\n")
    with pytest.raises(FormatError):
        read_points_csv(path)


def test_csv_points_reject_bad_number(tmp_path: Path) -> None:
    path = tmp_path / "points.csv"
    path.write_text("0.1,0.2\n0.3,abc\n")
    with pytest.raises(FormatError):
        read_points_csv(path)


def test_csv_points_outside_box(tmp_path: Path) -> None:
    path = tmp_path / "points.csv"
    path.write_text("0.1,0.2\n1.3,0.4\n")
    with pytest.raises(FormatError):
        read_points(path, InputFormat.CSV_POINTS)


def test_xyz_ignores_element_column(tmp_path: Path) -> None:
    path = tmp_path / "cloud.xyz"
    path.write_text("2\nwater fragment\nO 0.1 0.2 0.3\nH 0.4 0.5 0.6\n")
    cloud = read_points_xyz(path)
    assert np.allclose(cloud.points, [[0.1, 0.2, 0.3], [0.4, 0.5, 0.6]])


def test_xyz_count_mismatch(tmp_path: Path) -> None:
    path = tmp_path / "cloud.xyz"
    path.write_text("3\n\nO 0.1 0.2 0.3\n")
    with pytest.raises(FormatError):
        read_points_xyz(path)


def test_points_written_and_read_back(tmp_path: Path) -> None:
    cloud = PointCloud(np.asarray([[0.25, 0.5, 0.75], [0.0, 1.0, 0.5]]))
    path = tmp_path / "out" / "cloud.csv"
    write_points_csv(cloud, path)
    assert np.allclose(read_points_csv(path).points, cloud.points)


def test_bars_csv_for_two_tunnel() -> None:
    complex_ = fixtures.two_tunnel()
    result = compute_cobordisms({block: kernel_pairs(complex_, block) for block in Block})
    text = report.bars_csv(result.bars)
    assert text.splitlines() == [
        "degree,birth,death,birth_cell,death_cell,case_birth,case_death",
        "0,1,inf,4,,F,",
        "0,2,3,5,6,F,G",
    ]


def test_kernel_csv_lists_blocks() -> None:
    complex_ = fixtures.kernel_example(close_in_a=True)
    runs = [kernel_pairs(complex_, block) for block in Block]
    lines = report.kernel_csv(runs).splitlines()
    assert lines[0] == ",".join(report.KERNEL_HEADER)
    assert "0,2,3,4,5,A" in lines


def test_representatives_json_splits_boundary() -> None:
    complex_ = fixtures.two_tunnel()
    result = compute_cobordisms({block: kernel_pairs(complex_, block) for block in Block})
    document = json.loads(report.representatives_json(complex_, result.bars))
    finite = [bar for bar in document["bars"] if bar["death_cell"] is not None]
    assert finite[0]["representative_before_death"] == [4, 5]
    assert finite[0]["boundary_before_death"] == {"A": [0, 1], "B": [2, 3]}
    infinite = [bar for bar in document["bars"] if bar["death_cell"] is None]
    assert infinite[0]["death"] == "inf"
    assert infinite[0]["boundary_before_death"] is None


def test_svg_draws_one_marker_per_bar() -> None:
    svg = report.diagram_svg([(1.0, 2.0), (0.5, float("inf"))], title="a < b")
    assert svg.startswith("<svg")
    assert svg.count("<circle") == 2
    assert "stroke-dasharray" in svg
    assert "a &lt; b" in svg


def test_number_formatting() -> None:
    assert report.number(float("inf")) == "inf"
    assert report.number(2.0) == "2"
    assert report.number(0.125) == "0.125"
