"""
Exact Search
------------
Shortest monotone path through the Hasse diagram of the partition lattice.

Each edge e = (F, F') merges two blocks A, B and adds the cross pairs A x B.
Its label carries x(e), the mean of d over those pairs, and
    ell(e) = w(e) + min{ ell(f) : f enters F, x(f) <= x(e) },
    w(e)   = sum over A x B of (d(i,j) - x(e))^2,
with ell(e) = +inf (pruned) when no incoming edge f qualifies. The optimum is
read back through the backpointers from the cheapest edge entering [n].

- Partitions are tuples of block bitmasks, sorted numerically.
- Cross sums come from per-mask inner sums: s(A, B) = T(A|B) - T(A) - T(B).
- Float runs center d first; translation changes no x order and no w.
- Incoming labels are reduced to a staircase (x ascending, ell strictly
  descending), so the feasible minimum is one bisect away.
"""
import time
from bisect import bisect_right
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Tuple

import numpy as np

from config import solver_cfg
from core_model.chains import MergeChain
from core_model.dissimilarity import DissimilarityMap
from core_model.numeric import Number, comparison_tolerance, symmetric_matrix
from core_model.partition import Partition, canonical_partition
from projection.projector import project_subspace
from search.results import SearchResult, SearchStats
from utils.error_handling import require_capacity
from utils.logger import setup_logger

logger = setup_logger(__name__)

Masks = Tuple[int, ...]


def _bits(mask: int) -> Tuple[int, ...]:
    return tuple(i for i in range(mask.bit_length()) if mask >> i & 1)


def masks_to_partition(masks: Masks) -> Partition:
    return canonical_partition([_bits(m) for m in masks])


@dataclass(slots=True)
class DpEdgeLabel:
    source: Masks
    target: Masks
    x: Number
    ell: Number
    back: Optional["DpEdgeLabel"] = None

    @property
    def edge(self) -> Tuple[Partition, Partition]:
        return masks_to_partition(self.source), masks_to_partition(self.target)


class _Staircase:
    __slots__ = ("xs", "labels")

    def __init__(self, labels: List[DpEdgeLabel]):
        # stable sort keeps generation order among equal (x, ell)
        self.xs: List[Number] = []
        self.labels: List[DpEdgeLabel] = []
        for label in sorted(labels, key=lambda l: (l.x, l.ell)):
            if not self.labels or label.ell < self.labels[-1].ell:
                self.xs.append(label.x)
                self.labels.append(label)

    def best_feasible(self, x: Number, slack: Number) -> Optional[DpEdgeLabel]:
        i = bisect_right(self.xs, x + slack) - 1
        return self.labels[i] if i >= 0 else None


def _mask_sums(values: np.ndarray, n: int, exact: bool) -> Tuple[list, list]:
    """T(M) and U(M): sums of d and of d^2 over the pairs inside every mask M."""
    dense = symmetric_matrix(values, n)
    rows = (np.arange(1 << n)[:, None] >> np.arange(n)) & 1
    if exact:
        rows = rows.astype(object)
    inner = (rows * (rows @ dense)).sum(axis=1) / 2
    inner_sq = (rows * (rows @ (dense * dense))).sum(axis=1) / 2
    return inner.tolist(), inner_sq.tolist()


def exact_search(
    d: DissimilarityMap,
    exact: bool = False,
    tolerance: Optional[float] = None,
    max_taxa: Optional[int] = None,
) -> SearchResult:
    """
    Global least-squares equidistant fit by dynamic programming over the partition lattice.
    Args:
        d: Data map.
        exact: Run on Fractions (capped at solver.rational_max_taxa).
        tolerance: Relative slack on x comparisons; defaults to solver.tolerance.
        max_taxa: Cap override; defaults to solver.exact_max_taxa.
    Raises:
        CapacityError: If d has more taxa than the cap.
    """
    n = d.n
    cap = solver_cfg.exact_max_taxa if max_taxa is None else max_taxa
    require_capacity("exact_search", n, cap)
    if exact:
        require_capacity("exact_search (rational)", n, solver_cfg.rational_max_taxa if max_taxa is None else max_taxa)
    tolerance = solver_cfg.tolerance if tolerance is None else tolerance
    start = time.perf_counter()

    values = d.vector(exact)
    slack = comparison_tolerance(values, tolerance, exact)
    if exact:
        zero: Number = Fraction(0)
    else:
        values = values - float(np.mean(values))
        zero = 0.0
    inner, inner_sq = _mask_sums(values, n, exact)
    size = [m.bit_count() for m in range(1 << n)]

    stats = SearchStats(partitions=1)
    root: Masks = tuple(1 << i for i in range(n))
    frontier: Dict[Masks, _Staircase] = {root: _Staircase([DpEdgeLabel((), root, float("-inf"), zero)])}
    for rank in range(n - 1):
        incoming: Dict[Masks, List[DpEdgeLabel]] = {}
        for source, stairs in frontier.items():
            m = len(source)
            for a in range(m - 1):
                left = source[a]
                for b in range(a + 1, m):
                    right = source[b]
                    union = left | right
                    s = inner[union] - inner[left] - inner[right]
                    x = s / (size[left] * size[right])
                    stats.dp_edges += 1
                    h = stairs.best_feasible(x, slack)
                    if h is None:
                        stats.pruned_edges += 1
                        continue
                    w = inner_sq[union] - inner_sq[left] - inner_sq[right] - s * x
                    target = tuple(sorted(source[:a] + source[a + 1:b] + source[b + 1:] + (union,)))
                    incoming.setdefault(target, []).append(DpEdgeLabel(source, target, x, h.ell + w, h))
        frontier = {target: _Staircase(labels) for target, labels in incoming.items()}
        stats.partitions += len(frontier)
        logger.debug(f"exact_search rank {rank + 1}: {len(frontier)} partitions, {stats.dp_edges} edges so far")

    best = frontier[((1 << n) - 1,)].labels[-1]
    path: List[DpEdgeLabel] = []
    while best.back is not None:
        path.append(best)
        best = best.back
    masks = [root] + [label.target for label in reversed(path)]
    chain = MergeChain.from_partitions([masks_to_partition(m) for m in masks])
    outcome = project_subspace(d, chain, exact=exact, tolerance=tolerance)
    stats.visited_chains = 1
    stats.wall_time = time.perf_counter() - start
    logger.info(
        f"Exact search on {n} taxa: squared error {float(outcome.squared_error):.6g}, "
        f"{stats.dp_edges} edges ({stats.pruned_edges} pruned), {stats.partitions} partitions, "
        f"{stats.wall_time:.2f}s"
    )
    return SearchResult(outcome, stats)
