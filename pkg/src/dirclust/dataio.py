"""CSV ingestion onto the sphere and label-column I/O."""

import csv

import numpy as np

from .errors import ParseError, ZeroVectorError
from .geometry import (
    circular_to_cartesian,
    lonlat_degrees_to_cartesian,
    normalize_rows,
    spherical_to_cartesian,
)

FORMATS = ("angles-radians", "lonlat-degrees", "unit-rows", "raw-rows")


def _read_numeric_rows(path, delimiter=","):
    """Rows of floats; a non-numeric first row is treated as a header."""
    rows = []
    width = None
    with open(path, newline="") as fh:
        for lineno, rec in enumerate(csv.reader(fh, delimiter=delimiter), start=1):
            rec = [cell.strip() for cell in rec if cell.strip() != ""]
            if not rec:
                continue
            try:
                vals = [float(cell) for cell in rec]
            except ValueError:
                if lineno == 1:
                    continue  # header
                raise ParseError(f"non-numeric value in {rec!r}", line=lineno) from None
            if width is None:
                width = len(vals)
            elif len(vals) != width:
                raise ParseError(
                    f"expected {width} columns, got {len(vals)}", line=lineno
                )
            rows.append(vals)
    if not rows:
        raise ParseError(f"no data rows in {path}")
    return np.asarray(rows, dtype=float)


def load_sample(path, fmt: str = "raw-rows", log_cols=None, delimiter=",") -> np.ndarray:
    """Load a CSV file as points on S^{d-1}, preserving row order.

    raw-rows normalizes each row (optionally natural-logging the columns
    in `log_cols` first); unit-rows validates unit norm; angles-radians
    maps d-1 angle columns through the spherical convention;
    lonlat-degrees maps (lon, lat) pairs onto S^2.
    """
    if fmt not in FORMATS:
        raise ValueError(f"unknown format {fmt!r}; expected one of {FORMATS}")
    data = _read_numeric_rows(path, delimiter)
    if fmt == "angles-radians":
        return np.vstack([spherical_to_cartesian(row) for row in data])
    if fmt == "lonlat-degrees":
        if data.shape[1] != 2:
            raise ParseError("lonlat-degrees needs exactly 2 columns (lon, lat)")
        return lonlat_degrees_to_cartesian(data[:, 0], data[:, 1])
    if fmt == "unit-rows":
        norms = np.linalg.norm(data, axis=1)
        bad = np.where(np.abs(norms - 1.0) > 1e-6)[0]
        if bad.size:
            raise ParseError(f"rows {bad.tolist()} are not unit vectors")
        return data / norms[:, None]
    if log_cols:
        cols = list(log_cols)
        if np.any(data[:, cols] <= 0):
            bad = np.where((data[:, cols] <= 0).any(axis=1))[0]
            raise ParseError(f"log transform needs positive values; bad rows {bad.tolist()}")
        data = data.copy()
        data[:, cols] = np.log(data[:, cols])
    try:
        return normalize_rows(data)
    except ZeroVectorError:
        raise


def load_labels(path) -> np.ndarray:
    data = _read_numeric_rows(path)
    if data.shape[1] != 1:
        raise ParseError("labels file must have a single column")
    return data[:, 0].astype(int)


def write_labels(path, labels) -> None:
    labels = np.asarray(labels, dtype=int)
    with open(path, "w") as fh:
        for value in labels:
            fh.write(f"{value}\n")
