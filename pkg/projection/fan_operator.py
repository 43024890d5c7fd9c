"""
Fan Operator
------------
Stacked level-average operator over every maximal chain of the partition
lattice on n taxa. One matrix product gives the level means of many data
vectors on all chains at once, which turns projection-cone membership for
samples into array comparisons.
"""
from functools import cached_property, lru_cache
from typing import Dict, List, Optional, Tuple

import numpy as np

from config import solver_cfg
from core_model.chains import MergeChain, chain_topology, enumerate_chains
from core_model.dissimilarity import DissimilarityMap
from core_model.pairs import pair_count
from projection.projector import in_projection_cone
from utils.error_handling import require_capacity
from utils.logger import setup_logger

logger = setup_logger(__name__)

# gap-array cells per batch
_BATCH_CELLS = 1 << 22


class FanOperator:
    """
    Level-mean operator for all chains on n taxa.
    Attributes:
        chains: Every maximal chain, in enumeration order.
        topologies: Distinct topology strings, in first-seen order.
        topology_of: For each chain, the index of its topology.
    """

    def __init__(self, n: int, max_taxa: Optional[int] = None):
        cap = solver_cfg.exhaustive_max_taxa if max_taxa is None else max_taxa
        require_capacity("fan operator", n, cap)
        self.n = n
        self.chains: Tuple[MergeChain, ...] = tuple(enumerate_chains(n, max_taxa=max(cap, n)))
        self.chain_index: Dict[MergeChain, int] = {c: i for i, c in enumerate(self.chains)}
        topo_ids: Dict[str, int] = {}
        topology_of = []
        for chain in self.chains:
            topology_of.append(topo_ids.setdefault(chain_topology(chain), len(topo_ids)))
        self.topologies: Tuple[str, ...] = tuple(topo_ids)
        self.topology_of = np.array(topology_of, dtype=np.int64)
        levels = n - 1
        matrix = np.zeros((len(self.chains) * levels, pair_count(n)))
        for c, chain in enumerate(self.chains):
            rows = c * levels + chain.pair_levels
            matrix[rows, np.arange(pair_count(n))] = 1.0 / chain.level_sizes[chain.pair_levels]
        self.matrix = matrix
        logger.debug(f"Fan operator for n={n}: {len(self.chains)} chains, {len(self.topologies)} topologies")

    @cached_property
    def topology_incidence(self) -> np.ndarray:
        """chains x topologies 0/1 matrix."""
        out = np.zeros((len(self.chains), len(self.topologies)), dtype=bool)
        out[np.arange(len(self.chains)), self.topology_of] = True
        return out

    def _as_rows(self, data) -> np.ndarray:
        rows = np.atleast_2d(np.asarray(data, dtype=float))
        if rows.shape[1] != pair_count(self.n):
            raise ValueError(f"expected {pair_count(self.n)} pair values per row, got {rows.shape[1]}")
        return rows

    def gap_matrix(self, chain: int) -> np.ndarray:
        """(n-2, pairs) matrix G with G @ d the level-mean gaps of d on one chain."""
        levels = self.n - 1
        return np.diff(self.matrix[chain * levels:(chain + 1) * levels], axis=0)

    def level_gaps(self, data) -> np.ndarray:
        """(m, chains, n-2) array of consecutive level-mean differences v_{k+1} - v_k."""
        rows = self._as_rows(data)
        means = (rows @ self.matrix.T).reshape(rows.shape[0], len(self.chains), self.n - 1)
        return np.diff(means, axis=2)

    def _slack(self, rows: np.ndarray, tolerance: float) -> np.ndarray:
        scale = np.max(np.abs(rows), axis=1)
        return tolerance * np.where(scale > 0, scale, 1.0)

    def classify(self, data, tolerance: Optional[float] = None) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
        """
        Membership of each row of data in every projection cone.
        Returns:
            (nonstrict, strict, boundary): (m, chains) bool arrays for closed and
            interior membership, and an (m,) flag for rows within tolerance of any
            cone hyperplane.
        """
        tolerance = solver_cfg.tolerance if tolerance is None else tolerance
        rows = self._as_rows(data)
        m = rows.shape[0]
        step = max(64, _BATCH_CELLS // self.matrix.shape[0])
        nonstrict = np.empty((m, len(self.chains)), dtype=bool)
        strict = np.empty((m, len(self.chains)), dtype=bool)
        boundary = np.empty(m, dtype=bool)
        for start in range(0, m, step):
            batch = rows[start:start + step]
            gaps = self.level_gaps(batch)
            slack = self._slack(batch, tolerance)[:, None, None]
            nonstrict[start:start + len(batch)] = np.all(gaps >= -slack, axis=2)
            strict[start:start + len(batch)] = np.all(gaps > slack, axis=2)
            boundary[start:start + len(batch)] = np.any(np.abs(gaps) <= slack, axis=(1, 2))
        return nonstrict, strict, boundary

    def membership(self, data, strict: bool = False, tolerance: Optional[float] = None) -> np.ndarray:
        nonstrict, interior, _ = self.classify(data, tolerance)
        return interior if strict else nonstrict

    def topology_membership(self, chain_member: np.ndarray) -> np.ndarray:
        """A topology is a member when any of its rankings is."""
        return (chain_member.astype(np.int64) @ self.topology_incidence.astype(np.int64)) > 0


@lru_cache(maxsize=8)
def fan_operator(n: int) -> FanOperator:
    return FanOperator(n, max_taxa=max(n, solver_cfg.exhaustive_max_taxa))


def member_chains(
    d: DissimilarityMap,
    strict: bool = False,
    exact: bool = False,
    tolerance: Optional[float] = None,
    max_taxa: Optional[int] = None,
) -> List[MergeChain]:
    """
    Every chain whose projection cone contains d, in enumeration order.
    Raises:
        CapacityError: If d has more taxa than the exhaustive cap.
    """
    cap = solver_cfg.exhaustive_max_taxa if max_taxa is None else max_taxa
    require_capacity("projection cone enumeration", d.n, cap)
    if exact:
        return [
            chain for chain in enumerate_chains(d.n, max_taxa=max(cap, d.n))
            if in_projection_cone(d, chain, strict=strict, exact=True)
        ]
    operator = fan_operator(d.n)
    member = operator.membership(d.values, strict=strict, tolerance=tolerance)[0]
    return [operator.chains[i] for i in np.flatnonzero(member)]
