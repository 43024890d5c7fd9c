"""
Newick I/O
----------
Writes equidistant trees with branch lengths (children in canonical order,
`newick_digits` significant digits). Reading goes through Bio.Phylo; leaf
distances for round-trip and report checks come from the parsed tree.
"""
from io import StringIO
from typing import Dict, Optional, Sequence

import numpy as np
from Bio import Phylo
from Bio.Phylo.BaseTree import Tree
from Bio.Phylo.NewickIO import NewickError

from config import io_cfg
from core_model.dissimilarity import DissimilarityMap, TaxonSet
from core_model.pairs import pair_count, pair_list
from core_model.tree import EquidistantTree, TreeNode
from utils.error_handling import NewickParseError

_RESERVED = set("(),:;[]' \t\n")


def _quote(label: str) -> str:
    if any(ch in _RESERVED for ch in label):
        return "'" + label.replace("'", "\\'") + "'"
    return label


def _shape(node: TreeNode) -> str:
    """Label-only topology string used to order siblings."""
    if node.is_leaf:
        return node.label
    return "(" + ",".join(sorted(_shape(child) for child in node.children)) + ")"


def emit_newick(tree: EquidistantTree, digits: Optional[int] = None) -> str:
    """
    Newick text with branch lengths, e.g. "((a:0.5,b:0.5):1,c:1.5);".
    Labels with reserved characters are single-quoted, inner quotes backslash-escaped.
    """
    digits = io_cfg.newick_digits if digits is None else digits

    def length(value) -> str:
        return f"{float(value):.{digits}g}"

    def write(node: TreeNode) -> str:
        if node.is_leaf:
            return _quote(node.label)
        children = sorted(node.children, key=_shape)
        parts = [write(child) + ":" + length(node.height - child.height) for child in children]
        return "(" + ",".join(parts) + ")"

    return write(tree.root) + ";"


def parse_newick(text: str) -> Tree:
    """
    Parse exactly one Newick tree.
    Raises:
        NewickParseError: On a missing ';', unbalanced parentheses, trailing text or no tree at all.
    """
    ts = text.strip()
    if not ts.endswith(";"):
        raise NewickParseError("Newick text must end with ';'", 1, len(ts) + 1)
    try:
        tree = Phylo.read(StringIO(ts), "newick")
    except (NewickError, ValueError) as e:
        raise NewickParseError(f"malformed Newick tree: {e}") from None
    for leaf in tree.get_terminals():
        if leaf.name is not None:
            leaf.name = leaf.name.replace("\\'", "'")
    return tree


def leaf_depths(tree: Tree) -> Dict[str, float]:
    """Root-to-leaf path length of every named leaf."""
    return {leaf.name: float(tree.distance(leaf)) for leaf in tree.get_terminals()}


def newick_pairwise_distances(text: str, labels: Optional[Sequence[str]] = None) -> DissimilarityMap:
    """
    Path-length distances between the leaves of a Newick tree.
    Args:
        text: Newick text.
        labels: Taxon order of the result; defaults to the order leaves appear in the text.
    """
    tree = parse_newick(text)
    leaves = tree.get_terminals()
    by_name = {leaf.name: leaf for leaf in leaves}
    if len(by_name) != len(leaves):
        raise NewickParseError("duplicate leaf labels")
    order = list(labels) if labels is not None else [leaf.name for leaf in leaves]
    if len(leaves) != len(order):
        raise NewickParseError(f"tree has {len(leaves)} leaves, expected {len(order)}")
    missing = [label for label in order if label not in by_name]
    if missing:
        raise NewickParseError(f"leaves {missing} are not in the tree")
    n = len(order)
    out = np.empty(pair_count(n))
    for k, (i, j) in enumerate(pair_list(n)):
        out[k] = tree.distance(by_name[order[i]], by_name[order[j]])
    return DissimilarityMap(TaxonSet(tuple(order)), out)
