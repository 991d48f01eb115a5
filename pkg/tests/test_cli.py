"Tests for the command-line surface."

from __future__ import annotations

from pathlib import Path

import pytest
from typer.testing import CliRunner

from cobordia.cli import app
from cobordia.complex import Block, FilteredComplex
from cobordia.kernel import KernelPairingError, KernelPairs
from cobordia.workflow import EXIT_COMPUTATION

runner = CliRunner()


def test_help_lists_commands() -> None:
    result = runner.invoke(app, ["--help"])
    assert result.exit_code == 0
    for command in ("validate", "alpha", "kernel", "cobordism", "dual", "oracle-check", "sweep"):
        assert command in result.output


def test_fixtures_then_cobordism(tmp_path: Path) -> None:
    result = runner.invoke(app, ["fixtures", str(tmp_path), "--log-level", "ERROR"])
    assert result.exit_code == 0
    assert (tmp_path / "cylinder.json").is_file()

    result = runner.invoke(
        app, ["cobordism", str(tmp_path / "cylinder.json"), "--log-level", "ERROR"]
    )
    assert result.exit_code == 0
    assert "1,41,inf,41,,F," in result.output


def test_cobordism_degree_filter_and_outputs(tmp_path: Path) -> None:
    runner.invoke(app, ["fixtures", str(tmp_path), "--log-level", "ERROR"])
    result = runner.invoke(
        app,
        [
            "cobordism",
            str(tmp_path / "two_tunnel.json"),
            "--degree",
            "0",
            "-o",
            str(tmp_path / "bars.csv"),
            "--representatives",
            str(tmp_path / "reps.json"),
            "--svg",
            str(tmp_path / "bars.svg"),
            "--log-level",
            "ERROR",
        ],
    )
    assert result.exit_code == 0
    assert "0,2,3,5,6,F,G" in (tmp_path / "bars.csv").read_text()
    assert (tmp_path / "reps.json").is_file()
    assert (tmp_path / "bars.svg").is_file()


def test_kernel_command(tmp_path: Path) -> None:
    runner.invoke(app, ["fixtures", str(tmp_path), "--log-level", "ERROR"])
    result = runner.invoke(
        app, ["kernel", str(tmp_path / "two_tunnel.json"), "--threads", "2", "--log-level", "ERROR"]
    )
    assert result.exit_code == 0
    assert result.output.startswith("degree,birth,death,birth_cell,death_cell,block")


def test_validate_corrupt_json(tmp_path: Path) -> None:
    path = tmp_path / "corrupt.json"
    path.write_text('{"cells": 3}')
    result = runner.invoke(app, ["validate", str(path)])
    assert result.exit_code == 1


def test_validate_lists_violations(tmp_path: Path) -> None:
    path = tmp_path / "open.json"
    path.write_text(
        '{"cells": [{"id": 0, "dim": 0, "f": 0, "label": "A"},'
        ' {"id": 1, "dim": 1, "boundary": [0, 5], "f": 1, "label": "A"}]}'
    )
    result = runner.invoke(app, ["validate", str(path), "--log-level", "ERROR"])
    assert result.exit_code == 1
    assert "unknown-boundary-cell" in result.output
    assert "empty-B" in result.output


def test_validate_ok(tmp_path: Path) -> None:
    runner.invoke(app, ["fixtures", str(tmp_path), "--log-level", "ERROR"])
    result = runner.invoke(app, ["validate", str(tmp_path / "bridge.json")])
    assert result.exit_code == 0
    assert result.output.startswith("ok: 3 cells")


def test_oracle_check_random() -> None:
    result = runner.invoke(app, ["oracle-check", "--random", "10", "--log-level", "ERROR"])
    assert result.exit_code == 0
    assert "10/10" in result.output


def test_oracle_check_needs_input() -> None:
    result = runner.invoke(app, ["oracle-check"])
    assert result.exit_code == 1


def test_invalid_epsilon_is_rejected(tmp_path: Path) -> None:
    runner.invoke(app, ["fixtures", str(tmp_path), "--log-level", "ERROR"])
    result = runner.invoke(
        app, ["cobordism", str(tmp_path / "cylinder_lattice.csv"), "--epsilon", "0.7"]
    )
    assert result.exit_code == 1


def test_alpha_emits_labeled_complex(tmp_path: Path) -> None:
    points = tmp_path / "points.csv"
    points.write_text("0.1,0.05\n0.9,0.08\n0.4,0.5\n0.2,0.93\n0.85,0.96\n")
    out = tmp_path / "alpha.json"
    result = runner.invoke(
        app, ["alpha", str(points), "--epsilon", "0.1", "-o", str(out), "--log-level", "ERROR"]
    )
    assert result.exit_code == 0
    text = out.read_text()
    assert '"label": "A"' in text
    assert '"label": "B"' in text


def test_kernel_single_block(tmp_path: Path) -> None:
    runner.invoke(app, ["fixtures", str(tmp_path), "--log-level", "ERROR"])
    result = runner.invoke(
        app,
        ["kernel", str(tmp_path / "two_tunnel.json"), "--block", "A", "--log-level", "ERROR"],
    )
    assert result.exit_code == 0
    rows = result.output.splitlines()[1:]
    assert rows == ["0,3,,6,,A"]


def _dual_args(tmp_path: Path) -> list[str]:
    runner.invoke(app, ["fixtures", str(tmp_path), "--log-level", "ERROR"])
    return [
        "dual",
        str(tmp_path / "cylinder_lattice.csv"),
        "--epsilon",
        "0.15",
        "--include-hull",
        "--log-level",
        "ERROR",
    ]


def test_dual_accepts_cobordism_flags(tmp_path: Path) -> None:
    out = tmp_path / "dual.csv"
    args = _dual_args(tmp_path)
    args += ["--keep-slabs", "--degree", "0", "--tie-break", "reversed-input", "-o", str(out)]
    result = runner.invoke(app, args)
    assert result.exit_code == 0
    rows = out.read_text().splitlines()[1:]
    assert rows
    assert all(row.startswith("0,") for row in rows)


def test_dual_pairing_failure_exits_with_computation_code(
    tmp_path: Path, monkeypatch: pytest.MonkeyPatch
) -> None:
    def broken(complex_: FilteredComplex, block: Block) -> KernelPairs:
        raise KernelPairingError("inconsistent pivots")

    args = _dual_args(tmp_path)
    monkeypatch.setattr("cobordia.geometry.voronoi.kernel_pairs", broken)
    result = runner.invoke(app, args)
    assert result.exit_code == EXIT_COMPUTATION
    assert result.exception is None or isinstance(result.exception, SystemExit)
