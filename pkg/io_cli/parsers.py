"""
Distance Matrix Readers and Writers
-----------------------------------
PHYLIP (square, or lower-triangular without the diagonal) and CSV (header row
of names, square body, optional leading column of row names).

Square inputs are symmetrized: entries that disagree by more than the
symmetry tolerance (relative to the largest entry) are rejected, the rest are
averaged. Every error names the 1-based line and column of the offending cell.
"""
import io
import math
from typing import List, Optional, Tuple

import numpy as np
import pandas as pd

from config import io_cfg
from core_model.dissimilarity import DissimilarityMap
from utils.error_handling import (
    AsymmetryError,
    DimensionMismatchError,
    DuplicateNameError,
    NonNumericCellError,
    ParseError,
)
from utils.logger import setup_logger

logger = setup_logger(__name__)

# (line, column) of each matrix cell, for error messages
Positions = List[List[Tuple[int, int]]]


def _number(token: str, line: int, column: int) -> float:
    try:
        value = float(token)
    except ValueError:
        raise NonNumericCellError(f"not a number: {token!r}", line, column) from None
    if not math.isfinite(value):
        raise NonNumericCellError(f"not a finite number: {token!r}", line, column)
    return value


def _check_names(names: List[str], lines: List[int], column: int = 1) -> None:
    seen = {}
    for name, line in zip(names, lines):
        if not name:
            raise ParseError("empty taxon name", line, column)
        if name in seen:
            raise DuplicateNameError(f"duplicate taxon name {name!r} (first on line {seen[name]})", line, column)
        seen[name] = line


def _symmetrize(matrix: np.ndarray, positions: Positions, tolerance: float) -> np.ndarray:
    n = matrix.shape[0]
    scale = float(np.max(np.abs(matrix))) or 1.0
    for i in range(n):
        for j in range(i + 1, n):
            if abs(matrix[i, j] - matrix[j, i]) > tolerance * scale:
                line, column = positions[j][i]
                raise AsymmetryError(
                    f"d({i + 1},{j + 1})={matrix[i, j]} but d({j + 1},{i + 1})={matrix[j, i]}", line, column
                )
    if np.any(np.abs(np.diag(matrix)) > tolerance * scale):
        logger.warning("Non-zero diagonal entries ignored")
    return (matrix + matrix.T) / 2


def _read_phylip(text: str, tolerance: float) -> Tuple[List[str], np.ndarray]:
    rows = [(number, line) for number, line in enumerate(text.splitlines(), start=1) if line.strip()]
    if not rows:
        raise DimensionMismatchError("empty input", 1, 1)
    header_line, header = rows[0]
    tokens = header.split()
    try:
        n = int(tokens[0])
    except ValueError:
        raise NonNumericCellError(f"taxon count is not an integer: {tokens[0]!r}", header_line, 1) from None
    if n < 2:
        raise DimensionMismatchError(f"need at least 2 taxa, got {n}", header_line, 1)
    body = rows[1:]
    if len(body) != n:
        line = (body[-1][0] if body else header_line) + 1 if len(body) < n else body[n][0]
        raise DimensionMismatchError(f"expected {n} matrix rows, found {len(body)}", line, 1)

    names, lines = [], []
    cells: List[List[str]] = []
    for line, content in body:
        parts = content.split()
        names.append(parts[0])
        lines.append(line)
        cells.append(parts[1:])
    _check_names(names, lines)

    square = len(cells[0]) == n
    matrix = np.zeros((n, n))
    positions: Positions = [[(0, 0)] * n for _ in range(n)]
    for i, (row, line) in enumerate(zip(cells, lines)):
        expected = n if square else i
        if len(row) != expected:
            layout = "square" if square else "lower-triangular"
            raise DimensionMismatchError(
                f"row {names[i]!r} has {len(row)} values, a {layout} matrix needs {expected}", line, len(row) + 2
            )
        for j, token in enumerate(row):
            matrix[i, j] = _number(token, line, j + 2)
            positions[i][j] = (line, j + 2)
    if square:
        return names, _symmetrize(matrix, positions, tolerance)
    return names, matrix + matrix.T


def _cells(row: pd.Series) -> List[str]:
    return ["" if pd.isna(cell) else str(cell).strip() for cell in row.tolist()]


def _read_csv(text: str, tolerance: float) -> Tuple[List[str], np.ndarray]:
    try:
        frame = pd.read_csv(io.StringIO(text), header=None, dtype=str, keep_default_na=False, skip_blank_lines=True)
    except pd.errors.EmptyDataError:
        raise DimensionMismatchError("empty input", 1, 1) from None
    except pd.errors.ParserError as e:
        raise DimensionMismatchError(f"ragged CSV rows: {e}") from None
    header = _cells(frame.iloc[0])
    labelled = header[0] == ""
    names = header[1:] if labelled else header
    n = len(names)
    body = frame.iloc[1:]
    if n < 2:
        raise DimensionMismatchError(f"need at least 2 taxa, got {n}", 1, 1)
    _check_names(names, [1] * n, column=2 if labelled else 1)
    if len(body) != n:
        raise DimensionMismatchError(f"expected {n} matrix rows, found {len(body)}", len(body) + 2, 1)
    offset = 1 if labelled else 0
    matrix = np.zeros((n, n))
    positions: Positions = [[(0, 0)] * n for _ in range(n)]
    for i in range(n):
        line = i + 2
        row = _cells(body.iloc[i])
        values = row[offset:]
        if len(values) != n or any(v == "" for v in values):
            filled = len([v for v in values if v != ""])
            raise DimensionMismatchError(f"row {i + 1} has {filled} values, expected {n}", line, filled + offset + 1)
        for j, token in enumerate(values):
            matrix[i, j] = _number(token, line, j + offset + 1)
            positions[i][j] = (line, j + offset + 1)
    return names, _symmetrize(matrix, positions, tolerance)


def parse_distance_matrix(
    text: str,
    fmt: Optional[str] = None,
    symmetry_tolerance: Optional[float] = None,
) -> DissimilarityMap:
    """
    Parse a PHYLIP or CSV distance matrix.
    Args:
        text: File contents.
        fmt: "phylip" or "csv"; defaults to io.default_format.
        symmetry_tolerance: Relative asymmetry allowed in square input; defaults to io.symmetry_tolerance.
    Raises:
        ParseError: A DimensionMismatchError, AsymmetryError, NonNumericCellError or DuplicateNameError.
    """
    fmt = (fmt or io_cfg.default_format).lower()
    tolerance = io_cfg.symmetry_tolerance if symmetry_tolerance is None else symmetry_tolerance
    if fmt == "phylip":
        names, matrix = _read_phylip(text, tolerance)
    elif fmt == "csv":
        names, matrix = _read_csv(text, tolerance)
    else:
        raise ValueError(f"unknown matrix format {fmt!r}")
    d = DissimilarityMap.from_matrix(matrix, names)
    logger.debug(f"Parsed {fmt} matrix with {d.n} taxa")
    return d


def read_distance_matrix(path: str, fmt: Optional[str] = None) -> DissimilarityMap:
    """Read a matrix file; the format defaults to the extension (.csv) or io.default_format."""
    if fmt is None and path.lower().endswith(".csv"):
        fmt = "csv"
    with open(path, "r") as f:
        text = f.read()
    return parse_distance_matrix(text, fmt)


def format_distance_matrix(d: DissimilarityMap, fmt: Optional[str] = None, digits: Optional[int] = None) -> str:
    """Square PHYLIP or labelled CSV text for d."""
    fmt = (fmt or io_cfg.default_format).lower()
    digits = io_cfg.newick_digits if digits is None else digits
    matrix = d.to_matrix()
    if fmt == "phylip":
        lines = [str(d.n)]
        for label, row in zip(d.taxa.labels, matrix):
            lines.append(" ".join([label] + [f"{v:.{digits}g}" for v in row]))
        return "\n".join(lines) + "\n"
    if fmt == "csv":
        frame = pd.DataFrame(matrix, index=list(d.taxa.labels), columns=list(d.taxa.labels))
        return frame.to_csv(float_format=f"%.{digits}g")
    raise ValueError(f"unknown matrix format {fmt!r}")
