"""
Ultrametric vectors supported on a maximal chain: one value per level set,
nondecreasing along the chain (membership in the closed cone C_F).
"""
import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Tuple

import numpy as np

from core_model.chains import MergeChain
from core_model.numeric import Number
from core_model.pairs import pair_index_matrix
from utils.error_handling import NotUltrametricError


@dataclass(frozen=True, eq=False)
class Ultrametric:
    chain: MergeChain
    levels: Tuple[Number, ...]
    tolerance: float = field(default=0.0, compare=False)

    def __post_init__(self):
        levels = tuple(self.levels)
        object.__setattr__(self, "levels", levels)
        if len(levels) != self.chain.n - 1:
            raise NotUltrametricError(f"expected {self.chain.n - 1} level values, got {len(levels)}")
        for k in range(len(levels) - 1):
            if levels[k] > levels[k + 1] + self.tolerance:
                raise NotUltrametricError(
                    f"levels decrease at step {k + 1}: {float(levels[k])} > {float(levels[k + 1])}"
                )

    @property
    def exact(self) -> bool:
        return any(isinstance(v, Fraction) for v in self.levels)

    def expand(self) -> np.ndarray:
        """Pair-indexed vector x(i,j): level value v_k on every pair of L_k."""
        if self.exact:
            levels = np.empty(len(self.levels), dtype=object)
            levels[:] = [Fraction(v) for v in self.levels]
        else:
            levels = np.array(self.levels, dtype=float)
        return levels[self.chain.pair_levels]


def is_ultrametric_vector(x: np.ndarray, n: int, tolerance: float = 1e-12) -> bool:
    """Three-point condition: every triple's maximum distance is attained at least twice."""
    index = pair_index_matrix(n)
    for i, j, k in itertools.combinations(range(n), 3):
        a, b, c = sorted((x[index[i, j]], x[index[i, k]], x[index[j, k]]))
        if c - b > tolerance:
            return False
    return True
