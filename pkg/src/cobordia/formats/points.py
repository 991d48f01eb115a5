"Point cloud readers for CSV and XYZ files."

from __future__ import annotations

import csv
import logging
from enum import Enum
from pathlib import Path

import numpy as np

from cobordia.formats import FormatError
from cobordia.geometry.alpha import PointCloud, PointCloudError

logger = logging.getLogger(__name__)


class InputFormat(str, Enum):
    COMPLEX_JSON = "complex-json"
    CSV_POINTS = "csv-points"
    XYZ = "xyz"

    @classmethod
    def from_path(cls, path: Path) -> InputFormat:
        suffix = path.suffix.lower()
        if suffix == ".json":
            return cls.COMPLEX_JSON
        if suffix == ".xyz":
            return cls.XYZ
        if suffix in (".csv", ".txt"):
            return cls.CSV_POINTS
        raise FormatError(f"Cannot infer the input format of {path}; pass --format.")

    @property
    def is_points(self) -> bool:
        return self is not InputFormat.COMPLEX_JSON


def _cloud(rows: list[list[float]], path: Path) -> PointCloud:
    if not rows:
        raise FormatError(f"{path} holds no points.")
    widths = {len(row) for row in rows}
    if len(widths) != 1:
        raise FormatError(f"{path} mixes rows of {sorted(widths)} coordinates.")
    try:
        return PointCloud(np.asarray(rows, dtype=np.float64))
    except PointCloudError as exc:
        raise FormatError(f"{path}: {exc}") from exc


def read_points_csv(path: Path) -> PointCloud:
    """Read ``x,y[,z]`` rows; blank lines, ``#`` comments and a header are skipped."""
    rows: list[list[float]] = []
    try:
        with path.open(newline="", encoding="utf-8") as handle:
            for line_no, record in enumerate(csv.reader(handle), start=1):
                fields = [field.strip() for field in record if field.strip()]
                if not fields or fields[0].startswith("#"):
                    continue
                try:
                    rows.append([float(field) for field in fields])
                except ValueError as exc:
                    if not rows and line_no == 1:
                        continue
                    raise FormatError(f"{path}:{line_no}: not a number row") from exc
    except OSError as exc:
        raise FormatError(f"Cannot read {path}: {exc}") from exc
    cloud = _cloud(rows, path)
    logger.info("Read %d points of dimension %d from %s.", len(cloud), cloud.dimension, path)
    return cloud


def read_points_xyz(path: Path) -> PointCloud:
    """Read an XYZ file: count line, comment line, then ``element x y z`` rows."""
    try:
        lines = path.read_text(encoding="utf-8").splitlines()
    except OSError as exc:
        raise FormatError(f"Cannot read {path}: {exc}") from exc
    if len(lines) < 2:
        raise FormatError(f"{path} lacks the XYZ header lines.")
    try:
        expected = int(lines[0].strip())
    except ValueError as exc:
        raise FormatError(f"{path}: first line must be the atom count") from exc
    rows: list[list[float]] = []
    for line_no, line in enumerate(lines[2:], start=3):
        parts = line.split()
        if not parts:
            continue
        if len(parts) < 4:
            raise FormatError(f"{path}:{line_no}: expected an element and three coordinates")
        try:
            rows.append([float(value) for value in parts[1:4]])
        except ValueError as exc:
            raise FormatError(f"{path}:{line_no}: not a coordinate row") from exc
    if len(rows) != expected:
        raise FormatError(f"{path}: header announces {expected} atoms, found {len(rows)}")
    return _cloud(rows, path)


def read_points(path: Path, input_format: InputFormat) -> PointCloud:
    if input_format is InputFormat.XYZ:
        return read_points_xyz(path)
    if input_format is InputFormat.CSV_POINTS:
        return read_points_csv(path)
    raise FormatError(f"{input_format.value} is not a point format.")


def write_points_csv(cloud: PointCloud, path: Path) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", newline="", encoding="utf-8") as handle:
        writer = csv.writer(handle, lineterminator="\n")
        for row in cloud.points:
            writer.writerow(f"{value:.12g}" for value in row)
