# __init__.py
from core_model.chains import (
    MergeChain,
    MergeStep,
    chain_count,
    chain_topology,
    comb_chains,
    enumerate_chains,
    level_sets,
)
from core_model.dissimilarity import DissimilarityMap, TaxonSet
from core_model.pairs import PairIndex, pair_count, pair_from_index, pair_index
from core_model.partition import Partition, canonical_partition
from core_model.tree import EquidistantTree, TreeNode, tree_from_ultrametric
from core_model.ultrametric import Ultrametric, is_ultrametric_vector
