"""
Maximal Chains of Flats
-----------------------
A maximal chain of flats of K_n is stored as its sequence of n-1 block merges
(a ranked binary tree). Level set L_k holds the pairs first joined at merge k;
an ultrametric on the chain is constant on each level set.

- Chains hash and compare by their canonical key: per merge, the minimum
  elements of the two merged blocks, smaller first.
- Enumeration is a deterministic depth-first walk over the partition lattice.
"""
import itertools
import math
from dataclasses import dataclass
from functools import cached_property
from typing import Dict, Iterator, List, Optional, Sequence, Tuple

import numpy as np

from config import solver_cfg
from core_model.pairs import cross_pairs, pair_count
from core_model.partition import Block, Partition
from utils.error_handling import InvalidChainError, require_capacity

ChainKey = Tuple[Tuple[int, int], ...]


@dataclass(frozen=True)
class MergeStep:
    left: Block
    right: Block
    result: Partition

    @property
    def key(self) -> Tuple[int, int]:
        return self.left[0], self.right[0]


@dataclass(frozen=True, eq=False)
class MergeChain:
    n: int
    merges: Tuple[MergeStep, ...]

    def __post_init__(self):
        if self.n < 2:
            raise InvalidChainError(f"a chain needs at least 2 taxa, got {self.n}")
        if len(self.merges) != self.n - 1:
            raise InvalidChainError(f"a chain on {self.n} taxa has {self.n - 1} merges, got {len(self.merges)}")
        if len(self.merges[-1].result.blocks) != 1:
            raise InvalidChainError("the last merge must produce the single block")

    def __eq__(self, other) -> bool:
        return isinstance(other, MergeChain) and self.n == other.n and self.key == other.key

    def __hash__(self) -> int:
        return hash((self.n, self.key))

    def __str__(self) -> str:
        return " > ".join(
            "merge{" + "".join(str(i + 1) for i in s.left) + "," + "".join(str(i + 1) for i in s.right) + "}"
            for s in self.merges
        )

    @cached_property
    def key(self) -> ChainKey:
        return tuple(step.key for step in self.merges)

    @cached_property
    def partitions(self) -> Tuple[Partition, ...]:
        """Partitions of rank 0..n-1 along the chain."""
        return (Partition.singletons(self.n),) + tuple(step.result for step in self.merges)

    @cached_property
    def pair_levels(self) -> np.ndarray:
        """For every pair index, the 0-based merge step at which the pair is joined."""
        levels = np.empty(pair_count(self.n), dtype=np.int64)
        for k, step in enumerate(self.merges):
            levels[cross_pairs(step.left, step.right, self.n)] = k
        levels.setflags(write=False)
        return levels

    @cached_property
    def level_sizes(self) -> np.ndarray:
        sizes = np.array([len(s.left) * len(s.right) for s in self.merges], dtype=np.int64)
        sizes.setflags(write=False)
        return sizes

    @classmethod
    def from_merges(cls, n: int, merges: Sequence[Tuple[int, int]]) -> "MergeChain":
        """
        Build a chain from merges given by any member of each of the two blocks.
        Example: from_merges(4, [(0, 1), (2, 3), (0, 2)]) is the fork ((1,2),(3,4)).
        """
        partition = Partition.singletons(n)
        steps = []
        for a, b in merges:
            ia, ib = partition.block_of(a), partition.block_of(b)
            if ia == ib:
                raise InvalidChainError(f"taxa {a} and {b} are already in the same block of {partition}")
            ia, ib = min(ia, ib), max(ia, ib)
            merged = partition.merge(ia, ib)
            steps.append(MergeStep(partition.blocks[ia], partition.blocks[ib], merged))
            partition = merged
        return cls(n, tuple(steps))

    @classmethod
    def from_partitions(cls, partitions: Sequence[Partition]) -> "MergeChain":
        """Build a chain from its n partitions, each one merge above the previous."""
        if not partitions:
            raise InvalidChainError("empty partition sequence")
        n = partitions[0].n
        if partitions[0] != Partition.singletons(n):
            raise InvalidChainError("a chain starts at the all-singletons partition")
        steps = []
        for lower, upper in zip(partitions, partitions[1:]):
            removed = [b for b in lower.blocks if b not in upper.blocks]
            added = [b for b in upper.blocks if b not in lower.blocks]
            if len(removed) != 2 or len(added) != 1 or tuple(sorted(removed[0] + removed[1])) != added[0]:
                raise InvalidChainError(f"{upper} is not one merge above {lower}")
            steps.append(MergeStep(removed[0], removed[1], upper))
        return cls(n, tuple(steps))

    def replace_partition(self, rank: int, partition: Partition) -> "MergeChain":
        parts = list(self.partitions)
        parts[rank] = partition
        return MergeChain.from_partitions(parts)

    def relabel(self, permutation: Sequence[int]) -> "MergeChain":
        """Image of the chain under the taxon permutation i -> permutation[i]."""
        return MergeChain.from_merges(
            self.n, [(permutation[s.left[0]], permutation[s.right[0]]) for s in self.merges]
        )


def level_sets(chain: MergeChain) -> List[Tuple[int, ...]]:
    """
    Level sets L_1..L_{n-1} as sorted pair-index tuples.
    L_k is every cross pair between the two blocks merged at step k.
    """
    return [tuple(sorted(cross_pairs(s.left, s.right, chain.n))) for s in chain.merges]


def chain_count(n: int) -> int:
    """Number of maximal chains of the partition lattice: n!(n-1)!/2^(n-1)."""
    return math.factorial(n) * math.factorial(n - 1) // 2 ** (n - 1)


def enumerate_chains(n: int, max_taxa: Optional[int] = None) -> Iterator[MergeChain]:
    """
    Stream every maximal chain of the partition lattice on n taxa exactly once.
    The order is deterministic: at each rank, block pairs in canonical order.
    Raises:
        CapacityError: If n exceeds the enumeration cap.
    """
    cap = solver_cfg.max_enumeration_taxa if max_taxa is None else max_taxa
    if n < 2:
        raise InvalidChainError(f"chains need at least 2 taxa, got {n}")
    require_capacity("enumerate_chains", n, cap)
    steps: List[MergeStep] = []

    def extend(partition: Partition) -> Iterator[MergeChain]:
        if len(partition.blocks) == 1:
            yield MergeChain(n, tuple(steps))
            return
        for a, b in partition.covering_merges():
            merged = partition.merge(a, b)
            steps.append(MergeStep(partition.blocks[a], partition.blocks[b], merged))
            yield from extend(merged)
            steps.pop()

    yield from extend(Partition.singletons(n))


def chain_topology(chain: MergeChain, labels: Optional[Sequence[str]] = None) -> str:
    """
    Rooted binary topology of the chain with the merge order forgotten.
    Nested parentheses, children sorted lexicographically, leaves labelled
    1..n unless labels are given, e.g. "((1,2),(3,4))" or "(((1,2),3),4)".
    """
    names = list(labels) if labels is not None else [str(i + 1) for i in range(chain.n)]
    subtrees: Dict[int, str] = {i: names[i] for i in range(chain.n)}
    for step in chain.merges:
        left = subtrees.pop(step.left[0])
        right = subtrees.pop(step.right[0])
        subtrees[step.left[0]] = "(" + ",".join(sorted((left, right))) + ")"
    return subtrees[0]


def comb_chains(n: int, root: int = 0) -> List[MergeChain]:
    """The (n-1)! caterpillar chains (...((root,a2),a3)...,an)."""
    others = [i for i in range(n) if i != root]
    return [MergeChain.from_merges(n, [(root, a) for a in order]) for order in itertools.permutations(others)]
