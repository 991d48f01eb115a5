"CLI entrypoint for cobordia."

from __future__ import annotations

import logging
from pathlib import Path
from typing import Optional

import typer
from pydantic import ValidationError

from cobordia.complex import Block, TieBreak
from cobordia.formats.points import InputFormat
from cobordia.logging_config import configure_logging
from cobordia.settings import AppSettings
from cobordia.workflow import EXIT_INVALID, Command, RunConfig, run

logger = logging.getLogger(__name__)

app = typer.Typer(
    add_completion=False,
    no_args_is_help=True,
    help="Persistent tunnels between two subcomplexes of a filtration.",
)

INPUT_ARGUMENT = typer.Argument(..., help="Complex JSON, CSV points or XYZ file.")
FORMAT_OPTION = typer.Option(None, "--format", help="Input format; inferred from the suffix.")
AXIS_OPTION = typer.Option(None, "--axis", help="Slab axis for point input (default: last).")
EPSILON_OPTION = typer.Option(None, "--epsilon", help="Slab width in (0, 0.5).")
STRIP_OPTION = typer.Option(
    None, "--strip-slabs/--keep-slabs", help="Remove triangles inside the slabs."
)
DEGREE_OPTION = typer.Option(None, "--degree", "-k", help="Degree to report; repeatable.")
TIE_BREAK_OPTION = typer.Option(None, "--tie-break", help="Order of cells with equal f.")
THREADS_OPTION = typer.Option(None, "--threads", help="Worker threads for kernel runs.")
LOG_LEVEL_OPTION = typer.Option(None, "--log-level", help="DEBUG, INFO, WARNING or ERROR.")
CSV_OPTION = typer.Option(None, "--output", "-o", help="CSV destination (default: stdout).")
SVG_OPTION = typer.Option(None, "--svg", help="Write a persistence diagram as SVG.")


def _merge_settings(settings: AppSettings, **overrides: object) -> AppSettings:
    data = settings.model_dump()
    for key, value in overrides.items():
        if value is None:
            continue
        data[key] = value
    return AppSettings(**data)


def _settings(**overrides: object) -> AppSettings:
    try:
        merged = _merge_settings(AppSettings(), **overrides)
    except ValidationError as exc:
        typer.echo(f"Invalid option: {exc.errors()[0]['msg']}", err=True)
        raise typer.Exit(code=EXIT_INVALID) from exc
    configure_logging(merged.log_level)
    return merged


def _execute(config: RunConfig) -> None:
    code = run(config, emit=lambda text: typer.echo(text, nl=False))
    if code:
        raise typer.Exit(code=code)


def _degrees(values: Optional[list[int]]) -> tuple[int, ...] | None:
    return tuple(sorted(set(values))) if values else None


@app.command()
def validate(
    input_path: Path = INPUT_ARGUMENT,
    input_format: Optional[InputFormat] = FORMAT_OPTION,
    axis: Optional[int] = AXIS_OPTION,
    epsilon: Optional[float] = EPSILON_OPTION,
    tie_break: Optional[TieBreak] = TIE_BREAK_OPTION,
    log_level: Optional[str] = LOG_LEVEL_OPTION,
) -> None:
    """Check a complex and list every violation."""
    settings = _settings(axis=axis, epsilon=epsilon, tie_break=tie_break, log_level=log_level)
    _execute(RunConfig(Command.VALIDATE, settings, input_path, input_format))


@app.command()
def alpha(
    input_path: Path = INPUT_ARGUMENT,
    input_format: Optional[InputFormat] = FORMAT_OPTION,
    axis: Optional[int] = AXIS_OPTION,
    epsilon: Optional[float] = EPSILON_OPTION,
    strip_slabs: Optional[bool] = STRIP_OPTION,
    output: Optional[Path] = typer.Option(
        None, "--output", "-o", help="Complex JSON destination (default: stdout)."
    ),
    log_level: Optional[str] = LOG_LEVEL_OPTION,
) -> None:
    """Build the labeled alpha complex of a point cloud and emit it as JSON."""
    settings = _settings(
        axis=axis, epsilon=epsilon, strip_slabs=strip_slabs, log_level=log_level
    )
    _execute(RunConfig(Command.ALPHA, settings, input_path, input_format, json_path=output))


@app.command()
def kernel(
    input_path: Path = INPUT_ARGUMENT,
    input_format: Optional[InputFormat] = FORMAT_OPTION,
    axis: Optional[int] = AXIS_OPTION,
    epsilon: Optional[float] = EPSILON_OPTION,
    strip_slabs: Optional[bool] = STRIP_OPTION,
    tie_break: Optional[TieBreak] = TIE_BREAK_OPTION,
    threads: Optional[int] = THREADS_OPTION,
    block: Optional[list[Block]] = typer.Option(
        None, "--block", help="Block to report (A, B or AB); repeatable."
    ),
    output: Optional[Path] = CSV_OPTION,
    log_level: Optional[str] = LOG_LEVEL_OPTION,
) -> None:
    """Kernel barcodes of the inclusions of A, B and A u B."""
    settings = _settings(
        axis=axis,
        epsilon=epsilon,
        strip_slabs=strip_slabs,
        tie_break=tie_break,
        threads=threads,
        log_level=log_level,
    )
    _execute(
        RunConfig(
            Command.KERNEL,
            settings,
            input_path,
            input_format,
            csv_path=output,
            blocks=tuple(block) if block else None,
        )
    )


@app.command()
def cobordism(
    input_path: Path = INPUT_ARGUMENT,
    input_format: Optional[InputFormat] = FORMAT_OPTION,
    axis: Optional[int] = AXIS_OPTION,
    epsilon: Optional[float] = EPSILON_OPTION,
    strip_slabs: Optional[bool] = STRIP_OPTION,
    degree: Optional[list[int]] = DEGREE_OPTION,
    tie_break: Optional[TieBreak] = TIE_BREAK_OPTION,
    threads: Optional[int] = THREADS_OPTION,
    output: Optional[Path] = CSV_OPTION,
    representatives: Optional[Path] = typer.Option(
        None, "--representatives", help="Write representative chains as JSON."
    ),
    svg: Optional[Path] = SVG_OPTION,
    log_level: Optional[str] = LOG_LEVEL_OPTION,
) -> None:
    """Cobordism barcode between A and B with optional representatives."""
    settings = _settings(
        axis=axis,
        epsilon=epsilon,
        strip_slabs=strip_slabs,
        tie_break=tie_break,
        threads=threads,
        log_level=log_level,
    )
    _execute(
        RunConfig(
            Command.COBORDISM,
            settings,
            input_path,
            input_format,
            degrees=_degrees(degree),
            csv_path=output,
            json_path=representatives,
            svg_path=svg,
        )
    )


@app.command()
def dual(
    input_path: Path = INPUT_ARGUMENT,
    input_format: Optional[InputFormat] = FORMAT_OPTION,
    axis: Optional[int] = AXIS_OPTION,
    epsilon: Optional[float] = EPSILON_OPTION,
    strip_slabs: Optional[bool] = STRIP_OPTION,
    degree: Optional[list[int]] = DEGREE_OPTION,
    tie_break: Optional[TieBreak] = TIE_BREAK_OPTION,
    include_hull: Optional[bool] = typer.Option(
        None, "--include-hull/--exclude-hull", help="Let hull simplices seed the slabs."
    ),
    keep_unbounded: Optional[bool] = typer.Option(
        None, "--keep-unbounded/--drop-unbounded", help="Keep dual cells reaching infinity."
    ),
    threads: Optional[int] = THREADS_OPTION,
    output: Optional[Path] = CSV_OPTION,
    svg: Optional[Path] = SVG_OPTION,
    log_level: Optional[str] = LOG_LEVEL_OPTION,
) -> None:
    """Tunnels of the Voronoi dual, reported in radius units."""
    settings = _settings(
        axis=axis,
        epsilon=epsilon,
        strip_slabs=strip_slabs,
        tie_break=tie_break,
        include_hull=include_hull,
        keep_unbounded=keep_unbounded,
        threads=threads,
        log_level=log_level,
    )
    _execute(
        RunConfig(
            Command.DUAL,
            settings,
            input_path,
            input_format,
            degrees=_degrees(degree),
            csv_path=output,
            svg_path=svg,
        )
    )


@app.command("oracle-check")
def oracle_check(
    input_path: Optional[Path] = typer.Argument(None, help="Complex to check."),
    input_format: Optional[InputFormat] = FORMAT_OPTION,
    random: int = typer.Option(0, "--random", help="Check this many seeded random complexes."),
    seed: int = typer.Option(0, "--seed", help="First seed of the random corpus."),
    max_cells: Optional[int] = typer.Option(
        None, "--max-cells", help="Largest complex the oracle accepts."
    ),
    degree: Optional[list[int]] = DEGREE_OPTION,
    log_level: Optional[str] = LOG_LEVEL_OPTION,
) -> None:
    """Compare the pipeline barcode with the brute-force rank computation."""
    if input_path is None and random <= 0:
        typer.echo("Pass an input file or --random N.", err=True)
        raise typer.Exit(code=EXIT_INVALID)
    settings = _settings(oracle_max_cells=max_cells, log_level=log_level)
    _execute(
        RunConfig(
            Command.ORACLE_CHECK,
            settings,
            input_path,
            input_format,
            degrees=_degrees(degree),
            seed=seed,
            random_count=random,
        )
    )


@app.command()
def fixtures(
    output_dir: Path = typer.Argument(..., help="Directory receiving the fixture files."),
    seed: int = typer.Option(0, "--seed", help="Jitter seed of the lattice cloud."),
    log_level: Optional[str] = LOG_LEVEL_OPTION,
) -> None:
    """Write the reference complexes and the cylinder-lattice cloud."""
    settings = _settings(log_level=log_level)
    _execute(RunConfig(Command.FIXTURES, settings, output_dir=output_dir, seed=seed))


@app.command()
def sweep(
    input_path: Path = INPUT_ARGUMENT,
    input_format: Optional[InputFormat] = FORMAT_OPTION,
    epsilon: Optional[list[float]] = typer.Option(
        None, "--epsilon", help="Slab width to try; repeatable."
    ),
    axis: Optional[int] = AXIS_OPTION,
    strip_slabs: Optional[bool] = STRIP_OPTION,
    degree: Optional[list[int]] = DEGREE_OPTION,
    threads: Optional[int] = THREADS_OPTION,
    output: Optional[Path] = CSV_OPTION,
    log_level: Optional[str] = LOG_LEVEL_OPTION,
) -> None:
    """Recompute the barcode of a point cloud for several slab widths."""
    settings = _settings(
        axis=axis, strip_slabs=strip_slabs, threads=threads, log_level=log_level
    )
    _execute(
        RunConfig(
            Command.SWEEP,
            settings,
            input_path,
            input_format,
            degrees=_degrees(degree),
            csv_path=output,
            epsilons=tuple(epsilon or ()),
        )
    )


def main() -> None:
    """Console script entrypoint."""
    app()


if __name__ == "__main__":
    main()
