"""
Chain adjacency: two maximal chains are neighbors when they differ in exactly
one flat, i.e. in the partition at one interior rank.
"""
from typing import Iterator, List

from core_model.chains import MergeChain
from core_model.partition import Partition


def intermediate_partitions(lower: Partition, upper: Partition) -> Iterator[Partition]:
    """Partitions one merge above `lower` that refine `upper`."""
    for a, b in lower.covering_merges():
        merged = lower.merge(a, b)
        if merged.refines(upper):
            yield merged


def chain_neighbors(chain: MergeChain) -> List[MergeChain]:
    """
    Every chain obtained by replacing the partition at one interior rank j with
    another partition between ranks j-1 and j+1. A four-block window has one
    alternative (the swapped order); a three-block window has two.
    """
    partitions = chain.partitions
    seen = {chain}
    out: List[MergeChain] = []
    for rank in range(1, chain.n - 1):
        for candidate in intermediate_partitions(partitions[rank - 1], partitions[rank + 1]):
            if candidate == partitions[rank]:
                continue
            neighbor = chain.replace_partition(rank, candidate)
            if neighbor not in seen:
                seen.add(neighbor)
                out.append(neighbor)
    return out
