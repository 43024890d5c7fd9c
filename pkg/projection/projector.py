"""
Chain Projections
-----------------
Orthogonal projection of a dissimilarity map onto the subspace of a maximal
chain (level means), the projection-cone test (monotone level means) and the
nearest point of the closed cone (weighted isotonic regression of the means).

Every function takes exact=True to run on Fractions instead of floats.
"""
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Tuple

import numpy as np

from config import solver_cfg
from core_model.chains import MergeChain
from core_model.dissimilarity import DissimilarityMap
from core_model.numeric import Number, comparison_tolerance, exact_array, total
from core_model.pairs import pair_count
from core_model.ultrametric import Ultrametric
from projection.isotonic import isotonic_regression
from utils.error_handling import DimensionError


@dataclass(frozen=True, eq=False)
class ProjectionOutcome:
    """
    A chain with fitted level values. in_cone holds iff the levels are
    nondecreasing within tolerance; pooled marks a closed-cone projection whose
    subspace point lay outside the cone.
    """
    chain: MergeChain
    levels: Tuple[Number, ...]
    in_cone: bool
    squared_error: Number
    pooled: bool = False
    exact: bool = False
    tolerance: Number = field(default=0.0, repr=False)

    @property
    def error(self) -> float:
        return float(self.squared_error)

    def expand(self) -> np.ndarray:
        if self.exact:
            levels = exact_array(self.levels)
        else:
            levels = np.array(self.levels, dtype=float)
        return levels[self.chain.pair_levels]

    def to_ultrametric(self) -> Ultrametric:
        """
        The projected point as an Ultrametric.
        Raises:
            NotUltrametricError: If the level values are not monotone (subspace point outside the cone).
        """
        return Ultrametric(self.chain, self.levels, tolerance=float(self.tolerance))


def _check_sizes(d: DissimilarityMap, chain: MergeChain) -> None:
    if d.n != chain.n:
        raise DimensionError(f"data on {d.n} taxa, chain on {chain.n} taxa")


def _level_means(values: np.ndarray, chain: MergeChain) -> list:
    sizes = chain.level_sizes
    if values.dtype == object:
        sums = [Fraction(0)] * (chain.n - 1)
        for k, v in zip(chain.pair_levels.tolist(), values.tolist()):
            sums[k] += v
        return [s / int(c) for s, c in zip(sums, sizes)]
    sums = np.bincount(chain.pair_levels, weights=values, minlength=chain.n - 1)
    return (sums / sizes).tolist()


def is_monotone(levels, slack: Number, strict: bool = False) -> bool:
    if strict:
        return all(levels[k + 1] - levels[k] > slack for k in range(len(levels) - 1))
    return all(levels[k] <= levels[k + 1] + slack for k in range(len(levels) - 1))


def expanded_error(values: np.ndarray, levels, chain: MergeChain) -> Number:
    if values.dtype == object:
        x = exact_array(levels)[chain.pair_levels]
    else:
        x = np.asarray(levels, dtype=float)[chain.pair_levels]
    residual = values - x
    return total(residual * residual)


def level_means(d: DissimilarityMap, chain: MergeChain, exact: bool = False) -> list:
    """Mean of d over each level set L_1..L_{n-1}."""
    _check_sizes(d, chain)
    return _level_means(d.vector(exact), chain)


def project_subspace(
    d: DissimilarityMap,
    chain: MergeChain,
    exact: bool = False,
    tolerance: Optional[float] = None,
) -> ProjectionOutcome:
    """
    Orthogonal projection onto the chain's subspace: v_k is the mean of d over L_k.
    Args:
        d: Data map.
        chain: Maximal chain on the same taxa.
        exact: Compute with Fractions.
        tolerance: Relative slack for the in-cone flag; defaults to solver.tolerance.
    Raises:
        DimensionError: If d and chain disagree on the taxon count.
    """
    _check_sizes(d, chain)
    tolerance = solver_cfg.tolerance if tolerance is None else tolerance
    values = d.vector(exact)
    levels = _level_means(values, chain)
    slack = comparison_tolerance(values, tolerance, exact)
    return ProjectionOutcome(
        chain=chain,
        levels=tuple(levels),
        in_cone=is_monotone(levels, slack),
        squared_error=expanded_error(values, levels, chain),
        exact=exact,
        tolerance=slack,
    )


def in_projection_cone(
    d: DissimilarityMap,
    chain: MergeChain,
    strict: bool = False,
    exact: bool = False,
    tolerance: Optional[float] = None,
) -> bool:
    """
    True iff the level means of d are nondecreasing along the chain
    (strictly increasing, beyond the tolerance, when strict is set).
    """
    _check_sizes(d, chain)
    tolerance = solver_cfg.tolerance if tolerance is None else tolerance
    values = d.vector(exact)
    levels = _level_means(values, chain)
    return is_monotone(levels, comparison_tolerance(values, tolerance, exact), strict=strict)


def project_cone(
    d: DissimilarityMap,
    chain: MergeChain,
    exact: bool = False,
    tolerance: Optional[float] = None,
) -> ProjectionOutcome:
    """
    Nearest point of the closed cone of the chain. Level means that violate the
    order are pooled with weights |L_k|; monotone means are returned unchanged.
    """
    outcome = project_subspace(d, chain, exact=exact, tolerance=tolerance)
    if outcome.in_cone:
        return outcome
    values = d.vector(exact)
    weights = [int(c) for c in chain.level_sizes]
    levels = isotonic_regression(list(outcome.levels), weights)
    return ProjectionOutcome(
        chain=chain,
        levels=tuple(levels),
        in_cone=is_monotone(levels, outcome.tolerance),
        squared_error=expanded_error(values, levels, chain),
        pooled=True,
        exact=exact,
        tolerance=outcome.tolerance,
    )


def squared_error(d: DissimilarityMap, x: Ultrametric, exact: bool = False) -> Number:
    """Sum over pairs of (d(i,j) - x(i,j))^2."""
    if d.n != x.chain.n:
        raise DimensionError(f"data on {d.n} taxa, ultrametric on {x.chain.n} taxa")
    exact = exact or x.exact
    values = d.vector(exact)
    expanded = x.expand()
    if exact and expanded.dtype != object:
        expanded = exact_array(expanded.tolist())
    residual = values - expanded
    return total(residual * residual)


def level_indicator_matrix(chain: MergeChain) -> np.ndarray:
    """(n-1) x C(n,2) 0/1 matrix; row k is the indicator vector of L_k."""
    out = np.zeros((chain.n - 1, pair_count(chain.n)))
    out[chain.pair_levels, np.arange(pair_count(chain.n))] = 1.0
    return out
