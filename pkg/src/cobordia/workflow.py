"Core pipeline shared by the CLI subcommands."

from __future__ import annotations

import logging
from collections.abc import Callable, Sequence
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path

from cobordia import fixtures
from cobordia.cobordism import CobordismError, CobordismResult, compute_cobordisms
from cobordia.complex import (
    Block,
    ComplexError,
    FilteredComplex,
    TieBreak,
    require_valid,
    summarize,
    totalize_filtration,
    validate,
)
from cobordia.formats import FormatError, report
from cobordia.formats.complex_json import dump_complex, parse_complex, read_complex, write_complex
from cobordia.formats.points import InputFormat, read_points, write_points_csv
from cobordia.geometry.alpha import (
    PointCloud,
    PointCloudError,
    SliceSpec,
    alpha_filtration,
    delaunay,
    label_slices,
    strip_slab_interiors,
)
from cobordia.geometry.voronoi import (
    DualError,
    DualTunnel,
    dual_tunnels,
    dualize,
    slab_dual_vertices,
)
from cobordia.kernel import KernelPairingError, KernelPairs, kernel_pairs
from cobordia.oracle import SizeLimitExceeded, compare_barcodes, oracle_barcode
from cobordia.settings import AppSettings

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_INVALID = 1
EXIT_COMPUTATION = 2
EXIT_MISMATCH = 3

FIXTURE_COMPLEXES: dict[str, Callable[[], FilteredComplex]] = {
    "cylinder.json": fixtures.cylinder,
    "cylinder_top.json": fixtures.cylinder_with_top_triangle,
    "cylinder_middle.json": fixtures.cylinder_with_middle_triangle,
    "two_tunnel.json": fixtures.two_tunnel,
    "bridge.json": fixtures.bridge,
}
LATTICE_FILE = "cylinder_lattice.csv"


class WorkflowError(RuntimeError):
    """Raised when a pipeline step fails."""


class Command(str, Enum):
    VALIDATE = "validate"
    ALPHA = "alpha"
    KERNEL = "kernel"
    COBORDISM = "cobordism"
    DUAL = "dual"
    ORACLE_CHECK = "oracle-check"
    FIXTURES = "fixtures"
    SWEEP = "sweep"


@dataclass(frozen=True)
class RunConfig:
    """Resolved invocation of one subcommand."""

    command: Command
    settings: AppSettings = field(default_factory=AppSettings)
    input_path: Path | None = None
    input_format: InputFormat | None = None
    degrees: tuple[int, ...] | None = None
    csv_path: Path | None = None
    json_path: Path | None = None
    svg_path: Path | None = None
    output_dir: Path | None = None
    seed: int = 0
    random_count: int = 0
    epsilons: tuple[float, ...] = ()
    blocks: tuple[Block, ...] | None = None

    def resolved_format(self) -> InputFormat:
        if self.input_path is None:
            raise WorkflowError(f"{self.command.value} needs an input file.")
        return self.input_format or InputFormat.from_path(self.input_path)


@dataclass(frozen=True)
class LoadedInput:
    complex: FilteredComplex
    cloud: PointCloud | None = None


def build_alpha_complex(
    cloud: PointCloud,
    spec: SliceSpec,
    strip: bool = False,
    tie_break: TieBreak = TieBreak.INPUT_ORDER,
) -> FilteredComplex:
    """Delaunay, alpha values and slab labels for one cloud."""
    unlabeled = alpha_filtration(delaunay(cloud), cloud)
    return relabel(unlabeled, cloud, spec, strip, tie_break)


def relabel(
    unlabeled: FilteredComplex,
    cloud: PointCloud,
    spec: SliceSpec,
    strip: bool = False,
    tie_break: TieBreak = TieBreak.INPUT_ORDER,
) -> FilteredComplex:
    labeled = label_slices(unlabeled, spec, cloud)
    if strip:
        labeled = strip_slab_interiors(labeled, dim=cloud.dimension - 1)
    return require_valid(totalize_filtration(labeled, tie_break))


def load_input(config: RunConfig) -> LoadedInput:
    """Read the input file and turn it into a validated labeled complex.

    Raises:
        FormatError: If the file cannot be parsed.
        ComplexError: If the complex is structurally invalid.
        PointCloudError: If the points are degenerate or a slab is empty.
    """
    fmt = config.resolved_format()
    assert config.input_path is not None
    settings = config.settings
    if not fmt.is_points:
        return LoadedInput(read_complex(config.input_path, settings.tie_break))
    cloud = read_points(config.input_path, fmt)
    spec = settings.slice_spec(cloud.dimension)
    complex_ = build_alpha_complex(cloud, spec, settings.strip_slabs, settings.tie_break)
    return LoadedInput(complex_, cloud)


def compute_kernels(
    complex_: FilteredComplex, threads: int = 1, blocks: Sequence[Block] | None = None
) -> dict[Block, KernelPairs]:
    """Run the kernel reductions, concurrently when ``threads`` allows.

    All three blocks are reduced unless ``blocks`` narrows the selection.
    """
    selected = list(Block) if blocks is None else list(dict.fromkeys(blocks))
    try:
        with ThreadPoolExecutor(max_workers=threads) as executor:
            futures = {
                block: executor.submit(kernel_pairs, complex_, block) for block in selected
            }
            return {block: future.result() for block, future in futures.items()}
    except KernelPairingError as exc:
        raise WorkflowError(str(exc)) from exc


def compute(
    complex_: FilteredComplex, threads: int = 1, degrees: Sequence[int] | None = None
) -> CobordismResult:
    """Kernel runs followed by per-degree cobordism pairing.

    Raises:
        WorkflowError: If any pairing step fails.
    """
    kernels = compute_kernels(complex_, threads)
    try:
        with ThreadPoolExecutor(max_workers=threads) as executor:
            result = compute_cobordisms(kernels, degrees, executor if threads > 1 else None)
    except CobordismError as exc:
        raise WorkflowError(str(exc)) from exc
    logger.info("Computed %d cobordism bar(s).", len(result.bars))
    return result


def oracle_mismatches(result: CobordismResult, max_cells: int) -> list[str]:
    """Compare a pipeline result against the brute-force barcode.

    Returns:
        One line per bar found by only one side; empty when both agree.
    """
    complex_ = result.complex
    computed = [(bar.degree, bar.birth_position, bar.death_position) for bar in result.bars]
    degrees = sorted(result.dphis)
    expected = [
        bar.key() for bar in oracle_barcode(complex_, max_cells) if bar.degree in degrees
    ]
    only_pipeline, only_oracle = compare_barcodes(computed, expected)
    lines = [f"pipeline only: {_describe(bar)}" for bar in only_pipeline]
    lines.extend(f"oracle only: {_describe(bar)}" for bar in only_oracle)
    return lines


def _describe(bar: tuple[int, int, int | None]) -> str:
    degree, birth, death = bar
    return f"degree {degree} [{birth}, {'inf' if death is None else death})"


def compute_dual(
    loaded: LoadedInput, settings: AppSettings, degrees: Sequence[int] | None = None
) -> list[DualTunnel]:
    """Tunnels of the Voronoi dual between slab-circumcenter dual vertices.

    Raises:
        WorkflowError: If the input has no points, a slab holds no dual
            vertex, or a pairing step fails.
    """
    if loaded.cloud is None:
        raise WorkflowError("The dual pipeline needs point input.")
    cloud = loaded.cloud
    dual = dualize(loaded.complex, cloud.dimension)
    a_star, b_star = slab_dual_vertices(
        dual, cloud, settings.slice_spec(cloud.dimension), settings.include_hull
    )
    if not a_star or not b_star:
        raise WorkflowError("A slab holds no dual vertex; try a larger epsilon or --include-hull.")
    try:
        return dual_tunnels(dual, a_star, b_star, settings.keep_unbounded, degrees or (0,))
    except (KernelPairingError, CobordismError) as exc:
        raise WorkflowError(str(exc)) from exc


def sweep(
    cloud: PointCloud,
    settings: AppSettings,
    epsilons: Sequence[float],
    degrees: Sequence[int] | None = None,
) -> str:
    """Barcodes for several slab widths as a single CSV with an ``epsilon`` column."""
    unlabeled = alpha_filtration(delaunay(cloud), cloud)
    lines = [",".join(("epsilon", *report.BAR_HEADER))]
    for epsilon in sorted(epsilons):
        spec = SliceSpec(settings.slice_spec(cloud.dimension).axis, epsilon)
        complex_ = relabel(unlabeled, cloud, spec, settings.strip_slabs, settings.tie_break)
        result = compute(complex_, settings.threads, degrees)
        body = report.bars_csv(result.bars).splitlines()[1:]
        lines.extend(f"{report.number(epsilon)},{row}" for row in body)
        logger.info("epsilon=%s: %d bar(s).", report.number(epsilon), len(result.bars))
    return "\n".join(lines) + "\n"


def write_fixtures(output_dir: Path, seed: int = 0) -> list[Path]:
    """Write the reference complexes and the lattice cloud into ``output_dir``."""
    written = []
    for name, factory in FIXTURE_COMPLEXES.items():
        path = output_dir / name
        write_complex(factory(), path)
        written.append(path)
    lattice = output_dir / LATTICE_FILE
    write_points_csv(fixtures.cylinder_lattice_cloud(seed=seed), lattice)
    written.append(lattice)
    return written


def _deliver(text: str, path: Path | None, emit: Callable[[str], None]) -> None:
    if path is None:
        emit(text)
        return
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text, encoding="utf-8")
    logger.info("Wrote %s.", path)


def _validate(config: RunConfig, emit: Callable[[str], None]) -> int:
    fmt = config.resolved_format()
    assert config.input_path is not None
    if fmt.is_points:
        load_input(config)
        emit("ok\n")
        return EXIT_OK
    try:
        text = config.input_path.read_text(encoding="utf-8")
    except OSError as exc:
        raise FormatError(f"Cannot read {config.input_path}: {exc}") from exc
    complex_ = parse_complex(text, config.settings.tie_break)
    outcome = validate(complex_)
    if not outcome.ok:
        emit("".join(f"{line}\n" for line in outcome.lines()))
        logger.error(
            "%s failed validation with %d violation(s).",
            config.input_path,
            len(outcome.violations),
        )
        return EXIT_INVALID
    summary = summarize(complex_)
    dims = ", ".join(f"dim {d}: {n}" for d, n in summary.by_dimension.items())
    labels = ", ".join(f"{label}: {n}" for label, n in summary.by_label.items())
    emit(f"ok: {len(complex_)} cells ({dims}; {labels})\n")
    return EXIT_OK


def _oracle_check(config: RunConfig, emit: Callable[[str], None]) -> int:
    settings = config.settings
    if config.random_count > 0:
        corpus = [
            (f"seed {seed}", fixtures.random_labeled_complex(seed))
            for seed in range(config.seed, config.seed + config.random_count)
        ]
    else:
        loaded = load_input(config)
        corpus = [(str(config.input_path), loaded.complex)]
    failures = 0
    for name, complex_ in corpus:
        result = compute(complex_, settings.threads, config.degrees)
        lines = oracle_mismatches(result, settings.oracle_max_cells)
        if lines:
            failures += 1
            logger.error("%s: %d mismatching bar(s).", name, len(lines))
            emit("".join(f"{name}: {line}\n" for line in lines))
    emit(f"{len(corpus) - failures}/{len(corpus)} complexes agree with the oracle\n")
    return EXIT_MISMATCH if failures else EXIT_OK


def _dispatch(config: RunConfig, emit: Callable[[str], None]) -> int:
    settings = config.settings
    command = config.command
    if command is Command.VALIDATE:
        return _validate(config, emit)
    if command is Command.FIXTURES:
        if config.output_dir is None:
            raise WorkflowError("fixtures needs an output directory.")
        for path in write_fixtures(config.output_dir, config.seed):
            emit(f"{path}\n")
        return EXIT_OK
    if command is Command.ORACLE_CHECK:
        return _oracle_check(config, emit)
    if command is Command.SWEEP:
        if config.resolved_format() is InputFormat.COMPLEX_JSON:
            raise WorkflowError("sweep needs point input.")
        assert config.input_path is not None
        cloud = read_points(config.input_path, config.resolved_format())
        epsilons = config.epsilons or (settings.epsilon,)
        _deliver(sweep(cloud, settings, epsilons, config.degrees), config.csv_path, emit)
        return EXIT_OK

    loaded = load_input(config)
    if command is Command.ALPHA:
        _deliver(dump_complex(loaded.complex), config.json_path, emit)
        return EXIT_OK
    if command is Command.KERNEL:
        kernels = compute_kernels(loaded.complex, settings.threads, config.blocks)
        _deliver(report.kernel_csv(kernels.values()), config.csv_path, emit)
        return EXIT_OK
    if command is Command.DUAL:
        tunnels = compute_dual(loaded, settings, config.degrees)
        _deliver(report.dual_csv(tunnels), config.csv_path, emit)
        if config.svg_path is not None:
            _deliver(report.dual_svg(tunnels, "dual tunnels"), config.svg_path, emit)
        return EXIT_OK

    result = compute(loaded.complex, settings.threads, config.degrees)
    _deliver(report.bars_csv(result.bars), config.csv_path, emit)
    if config.json_path is not None:
        reps = report.representatives_json(result.complex, result.bars)
        _deliver(reps, config.json_path, emit)
    if config.svg_path is not None:
        _deliver(report.bars_svg(result.bars, "cobordisms"), config.svg_path, emit)
    return EXIT_OK


def run(config: RunConfig, emit: Callable[[str], None] | None = None) -> int:
    """Execute one subcommand and map failures to exit codes.

    Args:
        config: Resolved invocation.
        emit: Receives stdout text; defaults to ``print`` without a newline.

    Returns:
        0 on success, 1 on invalid input, 2 on computation errors and 3 when
        the oracle disagrees.
    """
    sink = emit or (lambda text: print(text, end=""))
    try:
        return _dispatch(config, sink)
    except (FormatError, ComplexError, PointCloudError) as exc:
        logger.error("%s", exc)
        if isinstance(exc, ComplexError) and exc.report is not None:
            sink("".join(f"{line}\n" for line in exc.report.lines()))
        return EXIT_INVALID
    except (
        WorkflowError,
        DualError,
        SizeLimitExceeded,
        KernelPairingError,
        CobordismError,
        ValueError,
    ) as exc:
        logger.error("%s", exc)
        return EXIT_COMPUTATION
