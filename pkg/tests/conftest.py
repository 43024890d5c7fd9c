"""
Shared fixtures: the worked four-taxon data sets and a seeded generator.
"""
from fractions import Fraction

import numpy as np
import pytest

from core_model.dissimilarity import DissimilarityMap

EX25_VALUES = (1, 2, 20, 10, 28, 5)
PROP35_VALUES = (1, 2, 3, 2, 7, 3)

EX25_PHYLIP = """4
a 0 1 2 20
b 1 0 10 28
c 2 10 0 5
d 20 28 5 0
"""


def ex25(eps=0) -> DissimilarityMap:
    """Four-taxon data (1, 2, 20, 10, 28 + eps, 5)."""
    values = list(EX25_VALUES)
    values[4] = values[4] + (Fraction(eps) if not isinstance(eps, float) else eps)
    return DissimilarityMap.from_values(values)


@pytest.fixture
def ex25_map() -> DissimilarityMap:
    return ex25()


@pytest.fixture
def prop35_map() -> DissimilarityMap:
    return DissimilarityMap.from_values(list(PROP35_VALUES))


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(20240611)


@pytest.fixture
def ex25_file(tmp_path):
    path = tmp_path / "ex25.phy"
    path.write_text(EX25_PHYLIP)
    return str(path)


@pytest.fixture
def ex25_with_eps():
    return ex25


@pytest.fixture
def random_map(rng):
    def make(n: int, low: float = -5.0, high: float = 20.0) -> DissimilarityMap:
        return DissimilarityMap.from_values(rng.uniform(low, high, n * (n - 1) // 2).tolist())

    return make
