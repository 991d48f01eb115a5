"CSV, JSON and SVG reports of kernel and cobordism barcodes."

from __future__ import annotations

import csv
import io
import json
import math
from collections.abc import Iterable, Sequence

from cobordia.cobordism import CobordismPair
from cobordia.complex import FilteredComplex, Label
from cobordia.geometry.voronoi import DualTunnel
from cobordia.kernel import KernelPairs

KERNEL_HEADER = ("degree", "birth", "death", "birth_cell", "death_cell", "block")
BAR_HEADER = (
    "degree",
    "birth",
    "death",
    "birth_cell",
    "death_cell",
    "case_birth",
    "case_death",
)
DUAL_HEADER = ("degree", "birth", "death", "birth_cell", "death_cell")


def number(value: float) -> str:
    if math.isinf(value):
        return "inf" if value > 0 else "-inf"
    return f"{value:.12g}"


def _render(header: Sequence[str], rows: Iterable[Sequence[object]]) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buffer.getvalue()


def kernel_csv(runs: Iterable[KernelPairs]) -> str:
    """Kernel bars of every run; an empty death means the class never dies."""
    rows = []
    for run in runs:
        for pair in run.pairs:
            death = pair.death
            rows.append(
                (
                    run.block.value,
                    pair.degree,
                    pair.birth.position,
                    math.inf if death is None else death.position,
                    (
                        pair.degree,
                        number(pair.birth.time),
                        "" if death is None else number(death.time),
                        pair.birth.cell,
                        "" if death is None else death.cell,
                        run.block.value,
                    ),
                )
            )
    rows.sort(key=lambda row: row[:4])
    return _render(KERNEL_HEADER, (row[4] for row in rows))


def _bar_key(bar: CobordismPair) -> tuple[int, float, float, int]:
    return (bar.degree, bar.birth_time, bar.death_time, bar.birth_position)


def bars_csv(bars: Iterable[CobordismPair]) -> str:
    """Cobordism bars sorted by degree, birth and death, ``inf`` for open bars."""
    rows = [
        (
            bar.degree,
            number(bar.birth_time),
            number(bar.death_time),
            bar.birth_cell,
            "" if bar.death_cell is None else bar.death_cell,
            bar.case_at_birth.value,
            "" if bar.case_at_death is None else bar.case_at_death.value,
        )
        for bar in sorted(bars, key=_bar_key)
    ]
    return _render(BAR_HEADER, rows)


def dual_csv(tunnels: Iterable[DualTunnel]) -> str:
    """Dual tunnels in radius units: separation as birth, bottleneck as death."""
    ordered = sorted(
        tunnels, key=lambda t: (t.separation_radius, t.bottleneck_radius, t.pair.birth_position)
    )
    rows = [
        (
            tunnel.pair.degree,
            number(tunnel.separation_radius),
            number(tunnel.bottleneck_radius),
            tunnel.pair.birth_cell,
            "" if tunnel.pair.death_cell is None else tunnel.pair.death_cell,
        )
        for tunnel in ordered
    ]
    return _render(DUAL_HEADER, rows)


def representatives_json(complex_: FilteredComplex, bars: Iterable[CobordismPair]) -> str:
    """Chains of every bar plus the A and B parts of the boundary before death."""
    records = []
    for bar in sorted(bars, key=_bar_key):
        record: dict[str, object] = {
            "degree": bar.degree,
            "birth": number(bar.birth_time),
            "death": number(bar.death_time),
            "birth_cell": bar.birth_cell,
            "death_cell": bar.death_cell,
            "representative_at_birth": list(bar.representative_at_birth),
            "representative_before_death": None,
            "boundary_before_death": None,
        }
        if bar.representative_before_death is not None:
            chain = bar.representative_before_death
            parts = complex_.split_by_label(complex_.chain_boundary(chain))
            record["representative_before_death"] = list(chain)
            record["boundary_before_death"] = {
                "A": list(parts.get(Label.A, ())),
                "B": list(parts.get(Label.B, ())),
            }
        records.append(record)
    return json.dumps({"bars": records}, indent=2, sort_keys=True) + "\n"


SVG_SIZE = 400
SVG_MARGIN = 40


def diagram_svg(points: Sequence[tuple[float, float]], title: str = "") -> str:
    """Persistence diagram as a standalone SVG document.

    Infinite deaths are drawn on a dashed horizon at 1.05 times the largest
    finite value.
    """
    finite = [value for point in points for value in point if math.isfinite(value)]
    low = min([0.0, *finite])
    top = max([0.0, *finite])
    horizon = 1.05 * top if top > 0 else 1.0
    span = horizon - low or 1.0
    inner = SVG_SIZE - 2 * SVG_MARGIN

    def x(value: float) -> float:
        return SVG_MARGIN + (value - low) / span * inner

    def y(value: float) -> float:
        return SVG_SIZE - SVG_MARGIN - (value - low) / span * inner

    lines = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{SVG_SIZE}" height="{SVG_SIZE}" '
        f'viewBox="0 0 {SVG_SIZE} {SVG_SIZE}">',
        f'<rect x="0" y="0" width="{SVG_SIZE}" height="{SVG_SIZE}" fill="white"/>',
        f'<line x1="{x(low):.2f}" y1="{y(low):.2f}" x2="{x(horizon):.2f}" y2="{y(horizon):.2f}" '
        'stroke="gray" stroke-width="1"/>',
        f'<line x1="{x(low):.2f}" y1="{y(horizon):.2f}" x2="{x(horizon):.2f}" '
        f'y2="{y(horizon):.2f}" stroke="gray" stroke-dasharray="4 4" stroke-width="1"/>',
        f'<text x="{SVG_SIZE / 2:.2f}" y="{SVG_SIZE - 8}" text-anchor="middle" '
        'font-size="12">birth</text>',
        f'<text x="12" y="{SVG_SIZE / 2:.2f}" text-anchor="middle" font-size="12" '
        f'transform="rotate(-90 12 {SVG_SIZE / 2:.2f})">death</text>',
    ]
    if title:
        lines.append(
            f'<text x="{SVG_SIZE / 2:.2f}" y="20" text-anchor="middle" font-size="14">'
            f"{_escape(title)}</text>"
        )
    for birth, death in sorted(points):
        level = horizon if math.isinf(death) else death
        lines.append(
            f'<circle cx="{x(birth):.2f}" cy="{y(level):.2f}" r="3" fill="steelblue"/>'
        )
    lines.append("</svg>")
    return "\n".join(lines) + "\n"


def bars_svg(bars: Iterable[CobordismPair], title: str = "") -> str:
    return diagram_svg([(bar.birth_time, bar.death_time) for bar in bars], title)


def dual_svg(tunnels: Iterable[DualTunnel], title: str = "") -> str:
    return diagram_svg(
        [(tunnel.separation_radius, tunnel.bottleneck_radius) for tunnel in tunnels], title
    )


def _escape(text: str) -> str:
    return text.replace("&", "&amp;").replace("<", "&lt;").replace(">", "&gt;")
