"""
Float / exact-rational plumbing shared by the solvers.

Exact mode keeps values as fractions.Fraction inside numpy object arrays, so
the same vectorized expressions serve both modes.
"""
import math
from fractions import Fraction
from typing import Iterable, Union

import numpy as np

Number = Union[float, int, Fraction]


def to_fraction(value: Number) -> Fraction:
    return value if isinstance(value, Fraction) else Fraction(value)


def exact_array(values: Iterable[Number]) -> np.ndarray:
    items = [to_fraction(v) for v in values]
    out = np.empty(len(items), dtype=object)
    out[:] = items
    return out


def total(values: np.ndarray) -> Number:
    """Compensated sum for floats, exact sum for object arrays."""
    if values.dtype == object:
        return sum(values.tolist(), Fraction(0))
    return math.fsum(values.tolist())


def comparison_tolerance(values: np.ndarray, tolerance: float, exact: bool) -> Number:
    """Absolute slack for comparing averages: `tolerance` after scaling data to unit max-abs."""
    if exact:
        return Fraction(0)
    if values.size == 0:
        return tolerance
    scale = float(np.max(np.abs(values.astype(float))))
    return tolerance * (scale if scale > 0 else 1.0)


def symmetric_matrix(values: np.ndarray, n: int) -> np.ndarray:
    """Symmetric n x n matrix of a pair vector with a zero diagonal; object dtype stays object."""
    if values.dtype == object:
        out = np.full((n, n), Fraction(0), dtype=object)
    else:
        out = np.zeros((n, n))
    rows, cols = np.triu_indices(n, k=1)
    out[rows, cols] = values
    out[cols, rows] = values
    return out
