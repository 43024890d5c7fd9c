"""
Set partitions of {0..n-1}: the nodes of the partition lattice.
Canonical form: each block ascending, blocks ordered by their minimum.
"""
from dataclasses import dataclass
from typing import Iterable, Iterator, Optional, Tuple

from utils.error_handling import MalformedPartitionError

Block = Tuple[int, ...]


@dataclass(frozen=True)
class Partition:
    blocks: Tuple[Block, ...]

    @property
    def n(self) -> int:
        return sum(len(b) for b in self.blocks)

    @property
    def rank(self) -> int:
        """Number of merges from the all-singletons partition."""
        return self.n - len(self.blocks)

    @classmethod
    def singletons(cls, n: int) -> "Partition":
        return cls(tuple((i,) for i in range(n)))

    def block_of(self, taxon: int) -> int:
        for k, block in enumerate(self.blocks):
            if taxon in block:
                return k
        raise KeyError(taxon)

    def merge(self, a: int, b: int) -> "Partition":
        """Merge blocks a and b (block positions); the result stays canonical."""
        if a == b:
            raise MalformedPartitionError("cannot merge a block with itself")
        if a > b:
            a, b = b, a
        merged = tuple(sorted(self.blocks[a] + self.blocks[b]))
        blocks = self.blocks[:a] + (merged,) + self.blocks[a + 1:b] + self.blocks[b + 1:]
        return Partition(blocks)

    def covering_merges(self) -> Iterator[Tuple[int, int]]:
        """Block position pairs (a, b), a < b, in canonical order."""
        m = len(self.blocks)
        for a in range(m - 1):
            for b in range(a + 1, m):
                yield a, b

    def refines(self, other: "Partition") -> bool:
        return all(any(set(block) <= set(big) for big in other.blocks) for block in self.blocks)

    def __str__(self) -> str:
        return "|".join("{" + ",".join(str(i + 1) for i in block) + "}" for block in self.blocks)


def canonical_partition(blocks: Iterable[Iterable[int]], n: Optional[int] = None) -> Partition:
    """
    Validate raw blocks and return their canonical Partition.
    Args:
        blocks: Disjoint, non-empty collections of taxon indices.
        n: Taxon count; defaults to the size of the union.
    Raises:
        MalformedPartitionError: On empty, overlapping or non-covering blocks.
    """
    raw = [tuple(sorted(block)) for block in blocks]
    if not raw:
        raise MalformedPartitionError("partition needs at least one block")
    if any(len(block) == 0 for block in raw):
        raise MalformedPartitionError("blocks must be non-empty")
    members = [i for block in raw for i in block]
    if len(members) != len(set(members)):
        raise MalformedPartitionError(f"blocks overlap: {raw}")
    n = len(members) if n is None else n
    if set(members) != set(range(n)):
        raise MalformedPartitionError(f"blocks {raw} do not cover 0..{n - 1}")
    return Partition(tuple(sorted(raw, key=lambda block: block[0])))
