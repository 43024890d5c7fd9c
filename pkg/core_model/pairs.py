"""
Pair Indexing
-------------
Row-major linear order on unordered taxon pairs: (0,1),(0,2),…,(0,n-1),(1,2),…
Every pair-indexed vector in the package (data, ultrametrics, level sets) uses it.
"""
from functools import lru_cache
from typing import List, NamedTuple, Tuple

import numpy as np


def pair_count(n: int) -> int:
    return n * (n - 1) // 2


def pair_index(i: int, j: int, n: int) -> int:
    """Linear index of the unordered pair {i, j} (either argument order)."""
    if i == j:
        raise ValueError(f"pair ({i}, {j}) is not a pair of distinct taxa")
    if i > j:
        i, j = j, i
    if i < 0 or j >= n:
        raise IndexError(f"pair ({i}, {j}) out of range for n={n}")
    return i * n - i * (i + 1) // 2 + (j - i - 1)


def pair_from_index(k: int, n: int) -> Tuple[int, int]:
    """Inverse of pair_index."""
    if not 0 <= k < pair_count(n):
        raise IndexError(f"pair index {k} out of range for n={n}")
    i = 0
    row = n - 1
    while k >= row:
        k -= row
        i += 1
        row -= 1
    return i, i + 1 + k


class PairIndex(NamedTuple):
    i: int
    j: int
    k: int

    @classmethod
    def from_pair(cls, i: int, j: int, n: int) -> "PairIndex":
        a, b = (i, j) if i < j else (j, i)
        return cls(a, b, pair_index(a, b, n))

    @classmethod
    def from_index(cls, k: int, n: int) -> "PairIndex":
        i, j = pair_from_index(k, n)
        return cls(i, j, k)


@lru_cache(maxsize=64)
def pair_list(n: int) -> Tuple[Tuple[int, int], ...]:
    return tuple((i, j) for i in range(n) for j in range(i + 1, n))


@lru_cache(maxsize=64)
def pair_index_matrix(n: int) -> np.ndarray:
    """n x n matrix M with M[i, j] = pair_index(i, j) off the diagonal and -1 on it."""
    m = np.full((n, n), -1, dtype=np.int64)
    rows, cols = np.triu_indices(n, k=1)
    m[rows, cols] = np.arange(len(rows))
    m[cols, rows] = m[rows, cols]
    m.setflags(write=False)
    return m


def cross_pairs(left: Tuple[int, ...], right: Tuple[int, ...], n: int) -> List[int]:
    """Pair indices joining one taxon of `left` to one taxon of `right`."""
    m = pair_index_matrix(n)
    return m[np.ix_(left, right)].ravel().tolist()
