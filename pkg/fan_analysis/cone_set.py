"""
Projection cone sets: every chain (and topology) whose projection cone holds d.
"""
from dataclasses import dataclass
from typing import FrozenSet, List, Optional

from core_model.chains import ChainKey, MergeChain, chain_topology
from core_model.dissimilarity import DissimilarityMap
from projection.fan_operator import member_chains


@dataclass(frozen=True, eq=False)
class ConeSet:
    data: DissimilarityMap
    chains: FrozenSet[MergeChain]
    topologies: FrozenSet[str]
    strict: bool = False

    def __len__(self) -> int:
        return len(self.chains)

    @property
    def keys(self) -> List[ChainKey]:
        return sorted(chain.key for chain in self.chains)


def projection_cone_set(
    d: DissimilarityMap,
    strict: bool = False,
    exact: bool = False,
    tolerance: Optional[float] = None,
    max_taxa: Optional[int] = None,
) -> ConeSet:
    """
    Enumerate all chains on d's taxa and keep those whose level means are monotone on d.
    Raises:
        CapacityError: If d has more taxa than solver.exhaustive_max_taxa.
    """
    chains = member_chains(d, strict=strict, exact=exact, tolerance=tolerance, max_taxa=max_taxa)
    return ConeSet(
        data=d,
        chains=frozenset(chains),
        topologies=frozenset(chain_topology(chain) for chain in chains),
        strict=strict,
    )
