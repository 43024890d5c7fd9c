"""
Taxa and Dissimilarity Data
---------------------------
TaxonSet holds the ground set; DissimilarityMap holds d(i,j) as a flat vector
in row-major pair order. Values are finite reals, negatives included.
Maps built from Fraction/int values also keep an exact rational copy.
"""
from dataclasses import dataclass, field
from fractions import Fraction
from numbers import Rational
from typing import Optional, Sequence, Tuple

import numpy as np

from core_model.numeric import Number, exact_array, symmetric_matrix, to_fraction
from core_model.pairs import pair_count, pair_index
from utils.error_handling import DegenerateInputError, DimensionError


@dataclass(frozen=True)
class TaxonSet:
    labels: Tuple[str, ...]

    def __post_init__(self):
        labels = tuple(self.labels)
        object.__setattr__(self, "labels", labels)
        if len(labels) < 2:
            raise DegenerateInputError(f"need at least 2 taxa, got {len(labels)}")
        if any(not isinstance(label, str) or not label for label in labels):
            raise ValueError("taxon labels must be non-empty strings")
        if len(set(labels)) != len(labels):
            raise ValueError(f"taxon labels must be unique: {labels}")

    @property
    def n(self) -> int:
        return len(self.labels)

    @classmethod
    def numbered(cls, n: int) -> "TaxonSet":
        """Labels "1".."n", the usual names for the ground set."""
        return cls(tuple(str(i + 1) for i in range(n)))

    def index(self, label: str) -> int:
        return self.labels.index(label)


@dataclass(frozen=True, eq=False)
class DissimilarityMap:
    taxa: TaxonSet
    values: np.ndarray
    rational: Optional[Tuple[Fraction, ...]] = field(default=None, repr=False)

    def __post_init__(self):
        values = np.array(self.values, dtype=float).ravel()
        expected = pair_count(self.taxa.n)
        if values.shape[0] != expected:
            raise DimensionError(f"{self.taxa.n} taxa need {expected} pair values, got {values.shape[0]}")
        if not np.all(np.isfinite(values)):
            raise ValueError("dissimilarity values must be finite")
        values.setflags(write=False)
        object.__setattr__(self, "values", values)
        if self.rational is not None:
            if len(self.rational) != expected:
                raise DimensionError("rational values do not match the pair count")
            object.__setattr__(self, "rational", tuple(to_fraction(v) for v in self.rational))

    @property
    def n(self) -> int:
        return self.taxa.n

    @classmethod
    def from_values(cls, values: Sequence[Number], labels: Optional[Sequence[str]] = None) -> "DissimilarityMap":
        """Build from a pair-ordered vector; Fraction/int inputs keep their exact values."""
        values = list(values)
        n = _taxa_for_pairs(len(values))
        taxa = TaxonSet(tuple(labels)) if labels is not None else TaxonSet.numbered(n)
        rational = tuple(values) if all(isinstance(v, Rational) for v in values) else None
        return cls(taxa, np.array([float(v) for v in values]), rational)

    @classmethod
    def from_matrix(cls, matrix, labels: Optional[Sequence[str]] = None) -> "DissimilarityMap":
        """Build from a square matrix, reading the upper triangle."""
        m = np.asarray(matrix)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise DimensionError(f"expected a square matrix, got shape {m.shape}")
        rows, cols = np.triu_indices(m.shape[0], k=1)
        return cls.from_values([m[i, j].item() if hasattr(m[i, j], "item") else m[i, j] for i, j in zip(rows, cols)], labels)

    def value(self, i: int, j: int) -> float:
        return float(self.values[pair_index(i, j, self.n)])

    def vector(self, exact: bool = False) -> np.ndarray:
        """Pair vector as floats, or as Fractions (object array) in exact mode."""
        if not exact:
            return self.values
        if self.rational is not None:
            return exact_array(self.rational)
        return exact_array(self.values.tolist())

    def to_matrix(self) -> np.ndarray:
        return symmetric_matrix(self.values, self.n)

    def translate(self, c: Number) -> "DissimilarityMap":
        """Add c to every entry (a move along the all-ones line)."""
        if self.rational is not None and isinstance(c, Rational):
            return DissimilarityMap.from_values([v + c for v in self.rational], self.taxa.labels)
        return DissimilarityMap(self.taxa, self.values + float(c))

    def scale(self, c: Number) -> "DissimilarityMap":
        if self.rational is not None and isinstance(c, Rational):
            return DissimilarityMap.from_values([v * c for v in self.rational], self.taxa.labels)
        return DissimilarityMap(self.taxa, self.values * float(c))

    def permute(self, permutation: Sequence[int]) -> "DissimilarityMap":
        """Relabel taxa: old taxon i becomes taxon permutation[i]; labels travel with their taxa."""
        n = self.n
        if sorted(permutation) != list(range(n)):
            raise ValueError(f"not a permutation of 0..{n - 1}: {permutation}")
        out = np.empty_like(self.values)
        labels = [""] * n
        for i in range(n):
            labels[permutation[i]] = self.taxa.labels[i]
            for j in range(i + 1, n):
                out[pair_index(permutation[i], permutation[j], n)] = self.values[pair_index(i, j, n)]
        return DissimilarityMap(TaxonSet(tuple(labels)), out)


def _taxa_for_pairs(count: int) -> int:
    n = 2
    while pair_count(n) < count:
        n += 1
    if pair_count(n) != count:
        raise DimensionError(f"{count} values is not C(n,2) for any n")
    return n
