"""
Exhaustive oracles over every maximal chain.
"""
import time
from typing import Optional

from config import solver_cfg
from core_model.chains import enumerate_chains
from core_model.dissimilarity import DissimilarityMap
from projection.projector import ProjectionOutcome, project_cone, project_subspace
from search.results import SearchResult, SearchStats
from utils.error_handling import require_capacity
from utils.logger import setup_logger

logger = setup_logger(__name__)


def _cap(n: int, exact: bool, max_taxa: Optional[int]) -> int:
    cap = solver_cfg.exhaustive_max_taxa if max_taxa is None else max_taxa
    require_capacity("brute force", n, cap)
    if exact and max_taxa is None:
        require_capacity("brute force (rational)", n, solver_cfg.rational_max_taxa)
    return max(cap, n)


def _improves(new: ProjectionOutcome, best: ProjectionOutcome, exact: bool, tolerance: float) -> bool:
    """Strictly lower error, or a tie that replaces a pooled outcome by an unpooled one."""
    slack = 0 if exact else tolerance * max(1.0, abs(float(best.squared_error)))
    diff = new.squared_error - best.squared_error
    if diff < -slack:
        return True
    return abs(diff) <= slack and best.pooled and not new.pooled


def brute_force_optimum(
    d: DissimilarityMap,
    exact: bool = False,
    tolerance: Optional[float] = None,
    max_taxa: Optional[int] = None,
) -> SearchResult:
    """
    Minimum over all chains of the closed-cone projection (pool-adjacent-violators on level means).
    Raises:
        CapacityError: If d has more taxa than solver.exhaustive_max_taxa.
    """
    limit = _cap(d.n, exact, max_taxa)
    tolerance = solver_cfg.tolerance if tolerance is None else tolerance
    start = time.perf_counter()
    best = None
    count = 0
    for chain in enumerate_chains(d.n, max_taxa=limit):
        outcome = project_cone(d, chain, exact=exact, tolerance=tolerance)
        count += 1
        if best is None or _improves(outcome, best, exact, tolerance):
            best = outcome
    stats = SearchStats(visited_chains=count, wall_time=time.perf_counter() - start)
    logger.info(f"Brute force on {d.n} taxa over {count} chains: squared error {float(best.squared_error):.6g}")
    return SearchResult(best, stats)


def best_in_cone_projection(
    d: DissimilarityMap,
    exact: bool = False,
    tolerance: Optional[float] = None,
    max_taxa: Optional[int] = None,
) -> SearchResult:
    """Minimum over the chains whose subspace projection already lies in its cone; nothing is pooled."""
    limit = _cap(d.n, exact, max_taxa)
    start = time.perf_counter()
    best = None
    count = 0
    for chain in enumerate_chains(d.n, max_taxa=limit):
        count += 1
        outcome = project_subspace(d, chain, exact=exact, tolerance=tolerance)
        if outcome.in_cone and (best is None or outcome.squared_error < best.squared_error):
            best = outcome
    stats = SearchStats(visited_chains=count, wall_time=time.perf_counter() - start)
    logger.debug(f"In-cone minimum on {d.n} taxa: squared error {float(best.squared_error):.6g}")
    return SearchResult(best, stats)
