# ----------------------------------------------------------------------
# Copyright (c) 2024 Rafael Gonzalez.
#
# See the LICENSE file for details
# ----------------------------------------------------------------------

# ------------------------
# Standard Python imports
# -----------------------

import os
import csv
import logging

from typing import List, Sequence, TextIO, Tuple

# -------------------
# Third party imports
# -------------------

import numpy as np

# ------------------------
# Own modules and packages
# ------------------------

from ..constants import Metric, SYMMETRY_TOLERANCE
from ..core import (
    Clustering,
    DissimilarityMatrix,
    PointDataset,
    MalformedInputError,
    clustering_from_labels,
    load_dissimilarity,
)

# -----------------------
# Module global variables
# -----------------------

log = logging.getLogger(__name__.split(".")[-1])

# -------------------
# Auxiliary functions
# -------------------


def is_number(cell: str) -> bool:
    try:
        float(cell)
    except ValueError:
        return False
    return True


def read_csv_rows(path: str) -> List[List[str]]:
    with open(path, newline="") as f:
        sample = f.read(4096)
        f.seek(0)
        try:
            dialect = csv.Sniffer().sniff(sample, delimiters=",;\t ")
        except csv.Error:
            dialect = csv.excel
        rows = [[cell.strip() for cell in row] for row in csv.reader(f, dialect)]
    return [row for row in rows if any(row)]


def strip_headers(rows: List[List[str]]) -> Tuple[List[List[str]], bool, bool]:
    """Drop a header row and/or a header column, detected by a non numeric first cell"""
    has_row = bool(rows) and not is_number(rows[0][0])
    if has_row:
        rows = rows[1:]
    has_col = bool(rows) and not is_number(rows[0][0])
    if has_col:
        rows = [row[1:] for row in rows]
    return rows, has_row, has_col


def to_floats(rows: List[List[str]], path: str) -> List[List[float]]:
    try:
        return [[float(cell) for cell in row] for row in rows]
    except ValueError as e:
        raise MalformedInputError(f"{path}: non numeric cell: {e}") from e


def stem(path: str) -> str:
    return os.path.splitext(os.path.basename(path))[0]


# ===========
# Generic API
# ===========


def read_dissimilarity_csv(path: str, tolerance: float = SYMMETRY_TOLERANCE) -> DissimilarityMatrix:
    rows, has_row, has_col = strip_headers(read_csv_rows(path))
    # header row without a corner cell: one column too many
    if has_row and not has_col and rows and len(rows[0]) == len(rows) + 1:
        rows = [row[1:] for row in rows]
    widths = {len(row) for row in rows}
    if len(widths) != 1:
        raise MalformedInputError(f"{path}: rows of different lengths {sorted(widths)}")
    matrix = np.asarray(to_floats(rows, path))
    D = load_dissimilarity(matrix, tolerance)
    log.info("Loaded %dx%d dissimilarity matrix from %s (d_max = %g)", D.n, D.n, path, D.d_max)
    return D


def read_points_csv(path: str, metric: Metric = Metric.EUCLIDEAN) -> PointDataset:
    rows, _, _ = strip_headers(read_csv_rows(path))
    try:
        points = PointDataset.from_rows(to_floats(rows, path), metric)
    except MalformedInputError as e:
        raise MalformedInputError(f"{path}: {e}") from e
    log.info("Loaded %d points of dimension %d from %s", points.n, points.p, path)
    return points


def read_labels(path: str) -> Clustering:
    labels = list()
    with open(path) as f:
        for lineno, line in enumerate(f, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                labels.append(int(line))
            except ValueError:
                raise MalformedInputError(f"{path}: line {lineno} is not an integer label: '{line}'") from None
    if not labels:
        raise MalformedInputError(f"{path}: no labels found")
    C = clustering_from_labels(labels)
    log.info("Loaded %d labels, %d clusters from %s", C.n, C.K, path)
    return C


def write_labels(clustering: Clustering, stream: TextIO) -> None:
    for label in clustering.labels:
        stream.write(f"{label}\n")


def write_points(coords: np.ndarray, stream: TextIO, header: Sequence[str] = ()) -> None:
    writer = csv.writer(stream, lineterminator="\n")
    if header:
        writer.writerow(header)
    for row in coords:
        writer.writerow([repr(float(x)) for x in row])
