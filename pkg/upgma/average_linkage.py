"""
UPGMA
-----
Average linkage on the complete graph K_n: repeatedly contract the block pair
with the smallest average original dissimilarity, recording that average
("minave") as the level of the merge.

- Block rows are indexed by the block's smallest taxon, so scanning active
  rows in row-major order is scanning canonical merge keys in order.
- Ties within the comparison tolerance go to the first candidate in that order.
- `upgma` keeps sums of original entries over E(v, w); `upgma_incremental`
  uses the weighted mixture update of averages and serves as a cross-check.
"""
from dataclasses import dataclass
from typing import List, Optional, Tuple

import numpy as np

from config import solver_cfg
from core_model.chains import MergeChain
from core_model.dissimilarity import DissimilarityMap
from core_model.numeric import Number, comparison_tolerance, symmetric_matrix
from projection.projector import ProjectionOutcome, expanded_error, is_monotone, project_subspace
from utils.error_handling import DegenerateInputError, require_capacity
from utils.logger import setup_logger

logger = setup_logger(__name__)


@dataclass(frozen=True, eq=False)
class UpgmaTrace:
    chain: MergeChain
    minave_per_step: Tuple[Number, ...]
    result: ProjectionOutcome

    @property
    def levels(self) -> Tuple[Number, ...]:
        return self.result.levels


class _SumLinkage:
    """Block sums of original entries S(v, w) and pair counts C(v, w) = |E(v, w)|."""

    def __init__(self, values: np.ndarray, n: int):
        self.sums = symmetric_matrix(values, n)
        self.counts = np.ones((n, n), dtype=np.int64) - np.eye(n, dtype=np.int64)

    def averages(self, rows: np.ndarray, cols: np.ndarray) -> np.ndarray:
        counts = self.counts[rows, cols]
        if self.sums.dtype == object:
            counts = counts.astype(object)
        return self.sums[rows, cols] / counts

    def merge(self, a: int, b: int) -> None:
        self.sums[a, :] += self.sums[b, :]
        self.sums[:, a] += self.sums[:, b]
        self.counts[a, :] += self.counts[b, :]
        self.counts[:, a] += self.counts[:, b]

    def copy(self) -> "_SumLinkage":
        clone = object.__new__(_SumLinkage)
        clone.sums = self.sums.copy()
        clone.counts = self.counts.copy()
        return clone


class _MixtureLinkage:
    """Average matrix updated as (|v| A(v,k) + |w| A(w,k)) / (|v| + |w|)."""

    def __init__(self, values: np.ndarray, n: int):
        self.avg = symmetric_matrix(values, n)
        self.sizes = np.ones(n, dtype=np.int64)

    def averages(self, rows: np.ndarray, cols: np.ndarray) -> np.ndarray:
        return self.avg[rows, cols]

    def merge(self, a: int, b: int) -> None:
        wa, wb = int(self.sizes[a]), int(self.sizes[b])
        mixed = (self.avg[a, :] * wa + self.avg[b, :] * wb) / (wa + wb)
        self.avg[a, :] = mixed
        self.avg[:, a] = mixed
        self.sizes[a] = wa + wb


def _candidates(linkage, active: np.ndarray) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Active block pairs in row-major order with their averages."""
    ids = np.flatnonzero(active)
    upper = np.triu_indices(len(ids), k=1)
    rows, cols = ids[upper[0]], ids[upper[1]]
    return rows, cols, linkage.averages(rows, cols)


def _run(d: DissimilarityMap, linkage, exact: bool, tolerance: Optional[float]) -> UpgmaTrace:
    n = d.n
    if n < 2:
        raise DegenerateInputError(f"UPGMA needs at least 2 taxa, got {n}")
    tolerance = solver_cfg.tolerance if tolerance is None else tolerance
    values = d.vector(exact)
    slack = comparison_tolerance(values, tolerance, exact)
    active = np.ones(n, dtype=bool)
    merges: List[Tuple[int, int]] = []
    minaves: List[Number] = []
    for _ in range(n - 1):
        rows, cols, avgs = _candidates(linkage, active)
        minave = avgs.min()
        pick = int(np.flatnonzero(avgs <= minave + slack)[0])
        a, b = int(rows[pick]), int(cols[pick])
        merges.append((a, b))
        minaves.append(avgs[pick] if exact else float(avgs[pick]))
        linkage.merge(a, b)
        active[b] = False
    chain = MergeChain.from_merges(n, merges)
    result = ProjectionOutcome(
        chain=chain,
        levels=tuple(minaves),
        in_cone=is_monotone(minaves, slack),
        squared_error=expanded_error(values, minaves, chain),
        exact=exact,
        tolerance=slack,
    )
    logger.debug(f"UPGMA on {n} taxa: squared error {float(result.squared_error):.6g}")
    return UpgmaTrace(chain, tuple(minaves), result)


def upgma(d: DissimilarityMap, exact: bool = False, tolerance: Optional[float] = None) -> UpgmaTrace:
    """
    Average-linkage clustering with averages taken over original entries.
    Args:
        d: Data map on n >= 2 taxa.
        exact: Run on Fractions.
        tolerance: Relative tie tolerance; defaults to solver.tolerance.
    Returns:
        UpgmaTrace: The merge chain, the minave of every step, and the resulting outcome.
    """
    return _run(d, _SumLinkage(d.vector(exact), d.n), exact, tolerance)


def upgma_incremental(d: DissimilarityMap, exact: bool = False, tolerance: Optional[float] = None) -> UpgmaTrace:
    """Average linkage through the weighted mixture update of block averages."""
    return _run(d, _MixtureLinkage(d.vector(exact), d.n), exact, tolerance)


def certify_upgma_projection(trace: UpgmaTrace, d: DissimilarityMap, tolerance: float = 1e-12) -> bool:
    """
    True iff the subspace projection of d onto the trace's chain reproduces the
    trace's levels and those levels are monotone.
    """
    if trace.chain.n != d.n or len(trace.result.levels) != d.n - 1:
        return False
    exact = trace.result.exact
    projected = project_subspace(d, trace.chain, exact=exact)
    if exact:
        same = list(projected.levels) == list(trace.result.levels)
    else:
        scale = max(1.0, float(np.max(np.abs(d.values))))
        same = all(
            abs(float(p) - float(t)) <= tolerance * scale for p, t in zip(projected.levels, trace.result.levels)
        )
    monotone = is_monotone(list(trace.result.levels), projected.tolerance)
    if not (same and monotone):
        logger.warning(f"UPGMA trace failed certification on {d.n} taxa (match={same}, monotone={monotone})")
    return same and monotone


def upgma_tie_chains(
    d: DissimilarityMap,
    exact: bool = False,
    tolerance: Optional[float] = None,
    max_taxa: Optional[int] = None,
) -> List[MergeChain]:
    """
    Every chain UPGMA can produce under some tie-break, deduplicated, first-pick order first.
    Raises:
        CapacityError: Above solver.tie_enumeration_max_taxa.
    """
    n = d.n
    require_capacity("upgma_tie_chains", n, solver_cfg.tie_enumeration_max_taxa if max_taxa is None else max_taxa)
    tolerance = solver_cfg.tolerance if tolerance is None else tolerance
    values = d.vector(exact)
    slack = comparison_tolerance(values, tolerance, exact)
    found: List[MergeChain] = []
    seen = set()

    def extend(linkage: _SumLinkage, active: np.ndarray, merges: List[Tuple[int, int]]):
        if len(merges) == n - 1:
            chain = MergeChain.from_merges(n, merges)
            if chain not in seen:
                seen.add(chain)
                found.append(chain)
            return
        rows, cols, avgs = _candidates(linkage, active)
        minave = min(avgs.tolist())
        for i, a in enumerate(avgs.tolist()):
            if a <= minave + slack:
                branch = linkage.copy()
                branch.merge(int(rows[i]), int(cols[i]))
                still = active.copy()
                still[int(cols[i])] = False
                extend(branch, still, merges + [(int(rows[i]), int(cols[i]))])

    extend(_SumLinkage(values, n), np.ones(n, dtype=bool), [])
    return found
