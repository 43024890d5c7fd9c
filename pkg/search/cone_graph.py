"""
Cone Graph
----------
Vertices: the chains whose projection cone contains d. Edges: vertex pairs
that differ in exactly one flat. Components come from networkx.
"""
from dataclasses import dataclass
from typing import FrozenSet, List, Optional

import networkx as nx

from core_model.chains import MergeChain
from core_model.dissimilarity import DissimilarityMap
from projection.fan_operator import member_chains
from search.neighbors import chain_neighbors
from utils.logger import setup_logger

logger = setup_logger(__name__)


@dataclass(frozen=True, eq=False)
class ConeGraph:
    graph: nx.Graph
    components: List[FrozenSet[MergeChain]]

    @property
    def vertices(self) -> List[MergeChain]:
        return list(self.graph.nodes)

    @property
    def component_sizes(self) -> List[int]:
        return [len(c) for c in self.components]

    def component_of(self, chain: MergeChain) -> FrozenSet[MergeChain]:
        for component in self.components:
            if chain in component:
                return component
        raise KeyError(str(chain))


def cone_graph(
    d: DissimilarityMap,
    strict: bool = False,
    exact: bool = False,
    tolerance: Optional[float] = None,
    max_taxa: Optional[int] = None,
) -> ConeGraph:
    """
    Build the full cone graph of d by exhaustive chain enumeration.
    Raises:
        CapacityError: If d has more taxa than solver.exhaustive_max_taxa.
    """
    vertices = member_chains(d, strict=strict, exact=exact, tolerance=tolerance, max_taxa=max_taxa)
    graph = nx.Graph()
    graph.add_nodes_from(vertices)
    members = set(vertices)
    for chain in vertices:
        for neighbor in chain_neighbors(chain):
            if neighbor in members:
                graph.add_edge(chain, neighbor)
    components = sorted(
        (frozenset(c) for c in nx.connected_components(graph)),
        key=lambda c: (-len(c), min(chain.key for chain in c)),
    )
    logger.info(f"Cone graph on {d.n} taxa: {len(vertices)} vertices, component sizes {[len(c) for c in components]}")
    return ConeGraph(graph, components)
