"Tests for workflow utilities."

from __future__ import annotations

from pathlib import Path

import numpy as np
import pytest

from cobordia import fixtures
from cobordia.complex import Block, FilteredComplex, Label
from cobordia.formats.complex_json import write_complex
from cobordia.geometry.alpha import PointCloud, SliceSpec
from cobordia.settings import AppSettings
from cobordia.workflow import (
    EXIT_COMPUTATION,
    EXIT_INVALID,
    EXIT_MISMATCH,
    EXIT_OK,
    Command,
    RunConfig,
    WorkflowError,
    build_alpha_complex,
    compute,
    compute_kernels,
    oracle_mismatches,
    run,
    write_fixtures,
)


def test_compute_kernels_with_threads() -> None:
    complex_ = fixtures.cylinder()
    serial = compute_kernels(complex_, threads=1)
    threaded = compute_kernels(complex_, threads=3)
    for block in Block:
        assert serial[block].pairs == threaded[block].pairs


def test_compute_matches_oracle() -> None:
    result = compute(fixtures.cylinder_with_middle_triangle(), threads=2)
    assert oracle_mismatches(result, max_cells=60) == []


def test_resolved_format_needs_input() -> None:
    with pytest.raises(WorkflowError):
        RunConfig(Command.COBORDISM).resolved_format()


def test_write_fixtures(tmp_path: Path) -> None:
    written = write_fixtures(tmp_path)
    names = {path.name for path in written}
    assert {"cylinder.json", "two_tunnel.json", "cylinder_lattice.csv"} <= names
    assert all(path.is_file() for path in written)


def test_run_cobordism_on_cylinder(tmp_path: Path) -> None:
    path = tmp_path / "cylinder.json"
    write_complex(fixtures.cylinder(), path)
    out: list[str] = []
    code = run(RunConfig(Command.COBORDISM, AppSettings(), path), emit=out.append)
    assert code == EXIT_OK
    rows = "".join(out).splitlines()[1:]
    degree_one = [row for row in rows if row.startswith("1,")]
    assert degree_one == ["1,41,inf,41,,F,"]


def test_run_writes_artifacts(tmp_path: Path) -> None:
    path = tmp_path / "two_tunnel.json"
    write_complex(fixtures.two_tunnel(), path)
    config = RunConfig(
        Command.COBORDISM,
        AppSettings(),
        path,
        csv_path=tmp_path / "bars.csv",
        json_path=tmp_path / "reps.json",
        svg_path=tmp_path / "bars.svg",
    )
    out: list[str] = []
    assert run(config, emit=out.append) == EXIT_OK
    assert out == []
    assert (tmp_path / "bars.csv").read_text().count("\n") == 3
    assert (tmp_path / "reps.json").is_file()
    assert (tmp_path / "bars.svg").read_text().startswith("<svg")


def test_run_validate_reports_violations(tmp_path: Path) -> None:
    path = tmp_path / "bad.json"
    path.write_text('{"cells": [{"id": 0, "dim": 0, "f": 0.0, "label": "A"}]}')
    out: list[str] = []
    assert run(RunConfig(Command.VALIDATE, AppSettings(), path), emit=out.append) == EXIT_INVALID
    assert "empty-B" in "".join(out)


def test_run_validate_corrupt_json(tmp_path: Path) -> None:
    path = tmp_path / "corrupt.json"
    path.write_text("{")
    assert run(RunConfig(Command.VALIDATE, AppSettings(), path), emit=lambda _: None) == 1


def test_run_oracle_check_random() -> None:
    out: list[str] = []
    config = RunConfig(Command.ORACLE_CHECK, AppSettings(), random_count=20, seed=3)
    assert run(config, emit=out.append) == EXIT_OK
    assert "20/20" in "".join(out)


def test_run_oracle_check_mismatch(monkeypatch: pytest.MonkeyPatch, tmp_path: Path) -> None:
    path = tmp_path / "bridge.json"
    write_complex(fixtures.bridge(), path)
    monkeypatch.setattr("cobordia.workflow.oracle_barcode", lambda *args, **kwargs: [])
    out: list[str] = []
    config = RunConfig(Command.ORACLE_CHECK, AppSettings(), path)
    assert run(config, emit=out.append) == EXIT_MISMATCH
    assert "pipeline only" in "".join(out)


def test_run_oracle_check_size_limit(tmp_path: Path) -> None:
    path = tmp_path / "cylinder.json"
    write_complex(fixtures.cylinder(), path)
    config = RunConfig(Command.ORACLE_CHECK, AppSettings(oracle_max_cells=10), path)
    assert run(config, emit=lambda _: None) == EXIT_COMPUTATION


def test_run_dual_needs_points(tmp_path: Path) -> None:
    path = tmp_path / "cylinder.json"
    write_complex(fixtures.cylinder(), path)
    assert run(RunConfig(Command.DUAL, AppSettings(), path), emit=lambda _: None) == 2


def test_run_sweep_adds_epsilon_column(tmp_path: Path) -> None:
    path = tmp_path / "points.csv"
    path.write_text(
        "0.1,0.05\n0.9,0.08\n0.3,0.5\n0.7,0.45\n0.2,0.93\n0.85,0.96\n0.5,0.2\n0.45,0.75\n"
    )
    out: list[str] = []
    config = RunConfig(Command.SWEEP, AppSettings(), path, epsilons=(0.1, 0.2))
    assert run(config, emit=out.append) == EXIT_OK
    lines = "".join(out).splitlines()
    assert lines[0].startswith("epsilon,degree,birth")
    assert {line.split(",")[0] for line in lines[1:]} <= {"0.1", "0.2"}


def test_planar_stripping_removes_slab_edges() -> None:
    cloud = PointCloud(
        np.asarray([[0.1, 0.95], [0.9, 0.97], [0.15, 0.05], [0.85, 0.02], [0.5, 0.5]])
    )
    spec = SliceSpec(axis=1, epsilon=0.1)
    kept = build_alpha_complex(cloud, spec)
    stripped = build_alpha_complex(cloud, spec, strip=True)

    def slab_edges(complex_: FilteredComplex) -> int:
        return sum(1 for c in complex_.cells if c.dim == 1 and c.label is not Label.INTERIOR)

    assert slab_edges(kept) == 2
    assert slab_edges(stripped) == 0
    assert sum(1 for c in stripped.cells if c.dim == 0) == 5
    assert len(stripped) == len(kept) - 4
