"""
Comb witness: x(1, j) = a for every j, x(i, j) = b otherwise, with a < b.
Every caterpillar whose first cherry contains taxon 1 holds it in the interior
of its projection cone.
"""
from typing import Optional, Sequence

from core_model.dissimilarity import DissimilarityMap
from core_model.numeric import Number
from core_model.pairs import pair_list
from utils.error_handling import InvalidWitnessError


def comb_witness(n: int, a: Number = 0, b: Number = 1, labels: Optional[Sequence[str]] = None) -> DissimilarityMap:
    """
    Raises:
        InvalidWitnessError: If a >= b or n < 2.
    """
    if not a < b:
        raise InvalidWitnessError(f"comb witness needs a < b, got a={a}, b={b}")
    if n < 2:
        raise InvalidWitnessError(f"comb witness needs at least 2 taxa, got {n}")
    return DissimilarityMap.from_values([a if i == 0 else b for i, _ in pair_list(n)], labels)
