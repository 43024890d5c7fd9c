"""
Cone-count probe: how many projection cones can hold one data vector in their
interiors? Random sphere samples are mixed with structured points (relabeled
comb witnesses, their small perturbations, the equilateral point) and the
largest strict counts seen are reported next to the (n-1)! bound. The probe
only reports; it never fails on a count above the bound.
"""
import math
from dataclasses import dataclass, field
from typing import List, Optional, Tuple

import numpy as np

from config import census_cfg, solver_cfg
from core_model.pairs import pair_count
from fan_analysis.census import sample_quotient_sphere
from fan_analysis.witness import comb_witness
from projection.fan_operator import fan_operator
from utils.error_handling import require_capacity
from utils.logger import setup_logger

logger = setup_logger(__name__)

PROBE_MAX_TAXA = 6
_PERTURBATIONS = 8
_KEEP_VECTORS = 5


@dataclass(frozen=True, eq=False)
class ProbeResult:
    n: int
    samples: int
    seed: int
    bound: int
    max_strict_chains: int
    max_strict_topologies: int
    max_nonstrict_structured: int
    attaining: List[Tuple[float, ...]] = field(default_factory=list, repr=False)

    @property
    def exceeds_bound(self) -> bool:
        return self.max_strict_topologies > self.bound


def structured_points(n: int, rng: np.random.Generator, noise: float) -> np.ndarray:
    """Comb witnesses rooted at every taxon, jittered copies of each, and the equilateral point."""
    base = comb_witness(n, 0.0, 1.0)
    points = []
    for root in range(n):
        perm = list(range(n))
        perm[0], perm[root] = perm[root], perm[0]
        witness = base.permute(perm).values
        points.append(witness)
        points.extend(witness + noise * rng.standard_normal((_PERTURBATIONS, pair_count(n))))
    points.append(np.ones(pair_count(n)))
    return np.vstack(points)


def conjecture_probe(
    n: int,
    samples: int = 10_000,
    seed: Optional[int] = None,
    noise: Optional[float] = None,
    tolerance: Optional[float] = None,
) -> ProbeResult:
    """
    Args:
        n: Taxon count, 3 to 6.
        samples: Random sphere draws on top of the structured points.
        seed: PRNG seed; defaults to census.seed.
        noise: Jitter for the perturbed witnesses; defaults to census.probe_noise.
        tolerance: Relative membership tolerance; defaults to solver.tolerance.
    """
    if n < 3:
        raise ValueError(f"the probe needs at least 3 taxa, got {n}")
    require_capacity("conjecture_probe", n, PROBE_MAX_TAXA)
    seed = census_cfg.seed if seed is None else seed
    noise = census_cfg.probe_noise if noise is None else noise
    tolerance = solver_cfg.tolerance if tolerance is None else tolerance
    rng = np.random.default_rng(seed)
    operator = fan_operator(n)

    structured = structured_points(n, rng, noise)
    nonstrict, _, _ = operator.classify(structured, tolerance)
    data = np.vstack([structured, sample_quotient_sphere(rng, samples, n)]) if samples else structured
    _, strict, _ = operator.classify(data, tolerance)
    chain_counts = strict.sum(axis=1)
    topo_counts = operator.topology_membership(strict).sum(axis=1)

    best = int(chain_counts.max())
    attaining = [tuple(float(v) for v in row) for row in data[chain_counts == best][:_KEEP_VECTORS]]
    result = ProbeResult(
        n=n,
        samples=samples,
        seed=seed,
        bound=math.factorial(n - 1),
        max_strict_chains=best,
        max_strict_topologies=int(topo_counts.max()),
        max_nonstrict_structured=int(nonstrict.sum(axis=1).max()),
        attaining=attaining,
    )
    logger.info(
        f"Cone-count probe n={n}: max strict {result.max_strict_chains} chains / "
        f"{result.max_strict_topologies} topologies (bound {result.bound}), "
        f"non-strict max at structured points {result.max_nonstrict_structured}"
    )
    if result.exceeds_bound:
        logger.warning(f"Probe found {result.max_strict_topologies} strict topologies above the bound {result.bound}")
    return result
