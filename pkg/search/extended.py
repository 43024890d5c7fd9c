"""
Extended UPGMA
--------------
Breadth-first search of the cone graph component that contains the UPGMA
chain. A neighbor joins the search iff d lies in its projection cone; the
answer is the best subspace projection among the visited chains.
"""
import time
from collections import deque
from typing import Optional

from core_model.dissimilarity import DissimilarityMap
from projection.projector import project_subspace
from search.neighbors import chain_neighbors
from search.results import SearchResult, SearchStats
from upgma.average_linkage import upgma
from utils.logger import setup_logger

logger = setup_logger(__name__)


def extended_upgma(d: DissimilarityMap, exact: bool = False, tolerance: Optional[float] = None) -> SearchResult:
    """
    Args:
        d: Data map on n >= 2 taxa.
        exact: Run on Fractions.
        tolerance: Relative slack for cone membership; defaults to solver.tolerance.
    Returns:
        SearchResult: Best outcome in the UPGMA component; stats.visited_chains is the component size.
    """
    start = time.perf_counter()
    root = upgma(d, exact=exact, tolerance=tolerance).chain
    best = project_subspace(d, root, exact=exact, tolerance=tolerance)
    visited = {root}
    rejected = set()
    queue = deque([root])
    while queue:
        chain = queue.popleft()
        for neighbor in chain_neighbors(chain):
            if neighbor in visited or neighbor in rejected:
                continue
            outcome = project_subspace(d, neighbor, exact=exact, tolerance=tolerance)
            if not outcome.in_cone:
                rejected.add(neighbor)
                continue
            visited.add(neighbor)
            queue.append(neighbor)
            if outcome.squared_error < best.squared_error:
                best = outcome
    stats = SearchStats(visited_chains=len(visited), wall_time=time.perf_counter() - start)
    logger.info(
        f"Extended UPGMA on {d.n} taxa: {stats.visited_chains} chains visited, "
        f"squared error {float(best.squared_error):.6g}"
    )
    return SearchResult(best, stats)
