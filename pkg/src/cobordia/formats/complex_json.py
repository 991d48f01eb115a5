"JSON reader and writer for labeled filtered complexes."

from __future__ import annotations

import json
import logging
from pathlib import Path

from pydantic import BaseModel, ConfigDict, Field, ValidationError

from cobordia.complex import (
    Cell,
    ComplexError,
    FilteredComplex,
    Label,
    TieBreak,
    require_valid,
    totalize_filtration,
)
from cobordia.formats import FormatError

logger = logging.getLogger(__name__)


class CellRecord(BaseModel):
    model_config = ConfigDict(extra="forbid")

    id: int = Field(ge=0)
    dim: int = Field(ge=0)
    boundary: list[int] = Field(default_factory=list)
    f: float
    label: Label = Label.INTERIOR
    simplex: list[int] | None = None


class ComplexDocument(BaseModel):
    model_config = ConfigDict(extra="forbid")

    cells: list[CellRecord]


def parse_complex(
    text: str, tie_break: TieBreak = TieBreak.INPUT_ORDER
) -> FilteredComplex:
    """Parse a complex document without validating its structure.

    Raises:
        FormatError: If the text is not a well-formed complex document.
        ComplexError: If cell ids repeat.
    """
    try:
        document = ComplexDocument.model_validate(json.loads(text))
    except json.JSONDecodeError as exc:
        raise FormatError(f"Invalid JSON: {exc}") from exc
    except ValidationError as exc:
        raise FormatError(f"Invalid complex document: {exc.error_count()} error(s)") from exc
    cells = [
        Cell(
            id=record.id,
            dim=record.dim,
            boundary=tuple(record.boundary),
            f=record.f,
            label=record.label,
            simplex=tuple(record.simplex) if record.simplex is not None else None,
        )
        for record in document.cells
    ]
    return totalize_filtration(FilteredComplex(cells), tie_break)


def read_complex(
    path: Path, tie_break: TieBreak = TieBreak.INPUT_ORDER, validate: bool = True
) -> FilteredComplex:
    """Load a complex file, rejecting it when validation fails.

    Raises:
        FormatError: If the file is unreadable or malformed.
        ComplexError: If the complex violates a structural invariant.
    """
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise FormatError(f"Cannot read {path}: {exc}") from exc
    complex_ = parse_complex(text, tie_break)
    logger.info("Loaded %d cells from %s.", len(complex_), path)
    if validate:
        try:
            require_valid(complex_)
        except ComplexError as exc:
            raise ComplexError(f"{path}: {exc}", exc.report) from exc
    return complex_


def complex_document(complex_: FilteredComplex) -> ComplexDocument:
    return ComplexDocument(
        cells=[
            CellRecord(
                id=cell.id,
                dim=cell.dim,
                boundary=list(cell.boundary),
                f=cell.f,
                label=cell.label,
                simplex=list(cell.simplex) if cell.simplex is not None else None,
            )
            for cell in complex_.cells
        ]
    )


def dump_complex(complex_: FilteredComplex) -> str:
    return complex_document(complex_).model_dump_json(indent=2, exclude_none=True) + "\n"


def write_complex(complex_: FilteredComplex, path: Path) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(dump_complex(complex_), encoding="utf-8")
    logger.info("Wrote %d cells to %s.", len(complex_), path)
