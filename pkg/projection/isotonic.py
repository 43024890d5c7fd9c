"""
Weighted isotonic regression by pool-adjacent-violators.
Works unchanged on floats and on Fractions.
"""
from typing import List, Sequence

from core_model.numeric import Number


def isotonic_regression(values: Sequence[Number], weights: Sequence[Number]) -> List[Number]:
    """
    Nondecreasing fit minimizing sum w_k (y_k - v_k)^2.
    Args:
        values: Targets v_1..v_m.
        weights: Positive weights w_1..w_m.
    Returns:
        List[Number]: The fitted y_1..y_m.
    """
    if len(values) != len(weights):
        raise ValueError("values and weights differ in length")
    # blocks of pooled entries: [mean, weight, count]
    blocks: List[list] = []
    for v, w in zip(values, weights):
        blocks.append([v, w, 1])
        while len(blocks) > 1 and blocks[-2][0] > blocks[-1][0]:
            mean2, w2, c2 = blocks.pop()
            mean1, w1, c1 = blocks[-1]
            weight = w1 + w2
            blocks[-1] = [(mean1 * w1 + mean2 * w2) / weight, weight, c1 + c2]
    fitted: List[Number] = []
    for mean, _, count in blocks:
        fitted.extend([mean] * count)
    return fitted
