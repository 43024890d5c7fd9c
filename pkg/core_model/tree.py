"""
Equidistant Trees
-----------------
Rooted trees with node heights (leaves at 0) and edge weights
w(e) = parent height - child height. Built from an Ultrametric by placing
the node created at merge k at height v_k / 2.
"""
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from core_model.dissimilarity import TaxonSet
from core_model.numeric import Number
from core_model.pairs import pair_count, pair_index
from core_model.ultrametric import Ultrametric
from utils.error_handling import NotUltrametricError


@dataclass(frozen=True, eq=False)
class TreeNode:
    height: Number
    children: Tuple["TreeNode", ...] = ()
    taxon: Optional[int] = None
    label: Optional[str] = None

    @property
    def is_leaf(self) -> bool:
        return not self.children

    def leaves(self) -> List["TreeNode"]:
        if self.is_leaf:
            return [self]
        return [leaf for child in self.children for leaf in child.leaves()]


@dataclass(frozen=True, eq=False)
class EquidistantTree:
    root: TreeNode
    taxa: TaxonSet

    @property
    def n(self) -> int:
        return self.taxa.n

    def edge_weights(self) -> List[Tuple[TreeNode, TreeNode, Number]]:
        """(parent, child, weight) for every edge, preorder."""
        out = []
        stack = [self.root]
        while stack:
            node = stack.pop()
            for child in reversed(node.children):
                out.append((node, child, node.height - child.height))
                stack.append(child)
        return out

    def root_path_lengths(self) -> Dict[int, Number]:
        """Sum of edge weights from each leaf up to the root, keyed by taxon."""
        lengths: Dict[int, Number] = {}

        def walk(node: TreeNode, depth: Number):
            if node.is_leaf:
                lengths[node.taxon] = depth
            for child in node.children:
                walk(child, depth + (node.height - child.height))

        walk(self.root, 0)
        return lengths

    def is_equidistant(self, tolerance: float = 1e-9) -> bool:
        lengths = list(self.root_path_lengths().values())
        return max(lengths) - min(lengths) <= tolerance

    def pairwise_distances(self) -> np.ndarray:
        """Path-length distance for every leaf pair, summed from edge weights, in pair order."""
        n = self.n
        exact = not isinstance(self.root.height, float)
        out = np.empty(pair_count(n), dtype=object if exact else float)

        def walk(node: TreeNode) -> List[Tuple[int, Number]]:
            # returns (taxon, distance from node down to the leaf)
            if node.is_leaf:
                return [(node.taxon, 0)]
            groups = []
            for child in node.children:
                weight = node.height - child.height
                groups.append([(t, dist + weight) for t, dist in walk(child)])
            for g, h in ((g, h) for a, g in enumerate(groups) for h in groups[a + 1:]):
                for ti, di in g:
                    for tj, dj in h:
                        out[pair_index(ti, tj, n)] = di + dj
            return [item for group in groups for item in group]

        walk(self.root)
        return out


def tree_from_ultrametric(x: Ultrametric, labels: Optional[Sequence[str]] = None) -> EquidistantTree:
    """
    Equidistant tree realizing x: the node created at merge k sits at height v_k / 2,
    so x(i,j) = 2 * height(LCA(i,j)).
    Raises:
        NotUltrametricError: If the level values decrease along the chain.
    """
    chain = x.chain
    for k in range(len(x.levels) - 1):
        if x.levels[k] > x.levels[k + 1] + x.tolerance:
            raise NotUltrametricError(f"levels decrease at step {k + 1}")
    taxa = TaxonSet(tuple(labels)) if labels is not None else TaxonSet.numbered(chain.n)
    zero = 0 if x.exact else 0.0
    nodes: Dict[int, TreeNode] = {i: TreeNode(zero, taxon=i, label=taxa.labels[i]) for i in range(chain.n)}
    for step, value in zip(chain.merges, x.levels):
        left = nodes.pop(step.left[0])
        right = nodes.pop(step.right[0])
        nodes[step.left[0]] = TreeNode(value / 2, children=(left, right))
    return EquidistantTree(nodes[0], taxa)
