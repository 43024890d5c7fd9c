"""
Cell Census
-----------
Monte Carlo census of the maximal cells of the common refinement of all
projection cones. Samples are uniform on the unit sphere of the quotient by
the all-ones line; a sample's cell is identified by its strict cone set.

- Samples within tolerance of any cone hyperplane are discarded.
- Chunks draw from SeedSequence(seed).spawn(k) with k fixed by samples and
  chunk_size, so counts do not depend on the number of worker threads.
- Anchored phase: thin cells are rarely hit by uniform draws. Each anchor cone
  set gets an interior point from a max-margin LP; local Gaussian clouds around
  every relabeling of that point are classified and merged into the tallies.
  On four taxa the anchors default to the ORBIT_TABLE rows.
- The maximal cone sets observed are grouped into orbits of the symmetric
  group acting on taxon labels.
"""
import itertools
import math
from collections import Counter
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Dict, FrozenSet, List, Optional, Sequence, Tuple

import numpy as np
from scipy.optimize import linprog
from tqdm import tqdm

from config import census_cfg, solver_cfg
from core_model.chains import chain_topology
from core_model.pairs import pair_count, pair_index_matrix, pair_list
from projection.fan_operator import FanOperator, fan_operator
from utils.env import resolve_thread_count
from utils.error_handling import require_capacity
from utils.logger import setup_logger

logger = setup_logger(__name__)

CENSUS_MAX_TAXA = 5
# smallest LP margin accepted as an interior point
_LP_MARGIN = 1e-9

# Orbit representatives of the six-cone cells on four taxa, with orbit sizes.
ORBIT_TABLE: Tuple[Tuple[FrozenSet[str], int], ...] = tuple(
    (frozenset(row), size)
    for row, size in (
        (("(((1,2),3),4)", "(((1,2),4),3)", "(((1,3),2),4)", "(((1,3),4),2)", "(((1,4),2),3)", "(((1,4),3),2)"), 4),
        (("(((1,2),3),4)", "(((1,2),4),3)", "(((1,3),2),4)", "(((1,3),4),2)", "(((1,4),2),3)", "((1,4),(2,3))"), 24),
        (("(((1,2),3),4)", "(((1,2),4),3)", "(((1,3),2),4)", "(((1,4),2),3)", "((1,3),(2,4))", "((1,4),(2,3))"), 12),
        (("(((1,2),3),4)", "(((1,2),4),3)", "(((1,3),2),4)", "(((1,4),3),2)", "(((2,4),1),3)", "((1,3),(2,4))"), 24),
        (("(((1,2),3),4)", "(((1,2),4),3)", "(((1,3),2),4)", "(((2,3),4),1)", "(((2,4),3),1)", "((1,3),(2,4))"), 24),
        (("(((1,2),3),4)", "(((1,2),4),3)", "(((1,3),2),4)", "(((2,4),1),3)", "((1,3),(2,4))", "((1,4),(2,3))"), 12),
        (("(((1,2),3),4)", "(((1,3),2),4)", "(((1,4),2),3)", "(((2,4),1),3)", "((1,3),(2,4))", "((1,4),(2,3))"), 24),
        (("(((1,2),3),4)", "(((1,3),2),4)", "(((2,4),1),3)", "(((3,4),1),2)", "((1,2),(3,4))", "((1,3),(2,4))"), 12),
        (("(((1,2),3),4)", "(((1,3),2),4)", "(((2,4),1),3)", "(((3,4),2),1)", "((1,2),(3,4))", "((1,3),(2,4))"), 24),
        (("(((1,2),3),4)", "(((1,3),2),4)", "(((2,4),3),1)", "(((3,4),2),1)", "((1,2),(3,4))", "((1,3),(2,4))"), 6),
    )
)


@dataclass(frozen=True)
class OrbitSummary:
    representative: Tuple[str, ...]
    orbit_size: int
    observed: int


@dataclass(frozen=True, eq=False)
class CellCensus:
    n: int
    samples: int
    seed: int
    discarded: int
    by_cardinality: Dict[int, int]
    chain_by_cardinality: Dict[int, int]
    max_cardinality: int
    max_chain_cardinality: int
    orbits: Tuple[OrbitSummary, ...]
    representative_hits: Tuple[bool, ...] = ()
    targeted_samples: int = 0
    anchors_found: int = 0
    cells: Dict[FrozenSet[str], int] = field(default_factory=dict, repr=False)

    @property
    def distinct_six_sets(self) -> int:
        return self.by_cardinality.get(6, 0)

    @property
    def distinct_maximal_sets(self) -> int:
        return self.by_cardinality.get(self.max_cardinality, 0)


class TopologyAction:
    """Symmetric-group action on topology indices of a FanOperator."""

    def __init__(self, operator: FanOperator):
        self.operator = operator
        index = {t: i for i, t in enumerate(operator.topologies)}
        first_chain = {}
        for chain, topo in zip(operator.chains, operator.topology_of.tolist()):
            first_chain.setdefault(topo, chain)
        reps = [first_chain[t] for t in range(len(operator.topologies))]
        self.images: List[Tuple[int, ...]] = [
            tuple(index[chain_topology(rep.relabel(perm))] for rep in reps)
            for perm in itertools.permutations(range(operator.n))
        ]

    def orbit(self, members: Sequence[int]) -> FrozenSet[Tuple[int, ...]]:
        return frozenset(tuple(sorted(image[t] for t in members)) for image in self.images)

    def orbit_of_topologies(self, topologies: FrozenSet[str]) -> FrozenSet[Tuple[int, ...]]:
        index = {t: i for i, t in enumerate(self.operator.topologies)}
        return self.orbit([index[t] for t in topologies])

    def names(self, members: Sequence[int]) -> Tuple[str, ...]:
        return tuple(sorted(self.operator.topologies[t] for t in members))


def sample_quotient_sphere(rng: np.random.Generator, size: int, n: int) -> np.ndarray:
    """Gaussian rows projected off the all-ones line and normalized."""
    data = rng.standard_normal((size, pair_count(n)))
    data -= data.mean(axis=1, keepdims=True)
    data /= np.linalg.norm(data, axis=1, keepdims=True)
    return data


def relabel_rows(rows: np.ndarray, permutation: Sequence[int], n: int) -> np.ndarray:
    """Pair vectors with taxon i renamed permutation[i], matching DissimilarityMap.permute."""
    index = pair_index_matrix(n)
    target = [index[permutation[i], permutation[j]] for i, j in pair_list(n)]
    out = np.empty_like(rows)
    out[:, target] = rows
    return out


def cell_interior_point(operator: FanOperator, topologies: Sequence[str]) -> Optional[Tuple[np.ndarray, float]]:
    """
    Unit point strictly inside one ranking's cone for every topology in the set.
    Each choice of rankings is one LP maximizing the smallest level gap t, with
    the point centered and boxed to [-1, 1].
    Returns:
        (point, margin) for the choice with the largest margin at unit norm, or
        None when no choice has a positive margin.
    """
    index = {t: i for i, t in enumerate(operator.topologies)}
    rankings = [np.flatnonzero(operator.topology_of == index[t]) for t in topologies]
    m = pair_count(operator.n)
    best: Optional[Tuple[np.ndarray, float]] = None
    for choice in itertools.product(*rankings):
        gaps = np.vstack([operator.gap_matrix(int(c)) for c in choice])
        res = linprog(
            c=np.r_[np.zeros(m), -1.0],
            A_ub=np.hstack([-gaps, np.ones((gaps.shape[0], 1))]),
            b_ub=np.zeros(gaps.shape[0]),
            A_eq=np.r_[np.ones(m), 0.0][None, :],
            b_eq=[0.0],
            bounds=[(-1.0, 1.0)] * m + [(0.0, None)],
            method="highs",
        )
        if not res.success or -res.fun <= _LP_MARGIN:
            continue
        point = res.x[:m]
        norm = float(np.linalg.norm(point))
        margin = -res.fun / norm
        if best is None or margin > best[1]:
            best = (point / norm, margin)
    return best


def _count_rows(member: np.ndarray) -> Counter:
    if member.shape[0] == 0:
        return Counter()
    packed = np.packbits(member, axis=1)
    rows, counts = np.unique(packed, axis=0, return_counts=True)
    return Counter({row.tobytes(): int(c) for row, c in zip(rows, counts)})


def _tally(operator: FanOperator, data: np.ndarray, tolerance: float):
    _, strict, boundary = operator.classify(data, tolerance)
    strict = strict[~boundary]
    topo = operator.topology_membership(strict)
    return _count_rows(topo), _count_rows(strict), int(boundary.sum())


def _census_chunk(operator: FanOperator, seed: np.random.SeedSequence, size: int, tolerance: float):
    rng = np.random.default_rng(seed)
    return _tally(operator, sample_quotient_sphere(rng, size, operator.n), tolerance)


def anchored_samples(
    operator: FanOperator,
    anchor_sets: Sequence[FrozenSet[str]],
    seed: np.random.SeedSequence,
    per_anchor: int,
    scale: float,
) -> Tuple[np.ndarray, int]:
    """
    Local clouds around every relabeling of each anchor set's interior point.
    Returns:
        (rows, anchors_found): unit rows to classify and the number of anchor
        sets with an interior point.
    """
    n, m = operator.n, pair_count(operator.n)
    rng = np.random.default_rng(seed)
    clouds = []
    found = 0
    for topologies in anchor_sets:
        interior = cell_interior_point(operator, sorted(topologies))
        if interior is None:
            logger.warning(f"Anchor set has no interior point: {sorted(topologies)}")
            continue
        found += 1
        point, margin = interior
        images = np.vstack([relabel_rows(point[None, :], perm, n) for perm in itertools.permutations(range(n))])
        noise = rng.standard_normal((len(images), per_anchor, m))
        noise -= noise.mean(axis=2, keepdims=True)
        cloud = images[:, None, :] + (scale * margin / math.sqrt(m)) * noise
        clouds.append(cloud.reshape(-1, m))
    if not clouds:
        return np.empty((0, m)), found
    rows = np.vstack(clouds)
    rows /= np.linalg.norm(rows, axis=1, keepdims=True)
    return rows, found


def _decode(key: bytes, width: int) -> List[int]:
    bits = np.unpackbits(np.frombuffer(key, dtype=np.uint8))[:width]
    return np.flatnonzero(bits).tolist()


def _cardinality_histogram(counts: Counter, width: int) -> Dict[int, int]:
    histogram: Counter = Counter(len(_decode(key, width)) for key in counts)
    return dict(sorted(histogram.items()))


def cell_census(
    n: int,
    samples: Optional[int] = None,
    seed: Optional[int] = None,
    chunk_size: Optional[int] = None,
    threads: Optional[int] = None,
    tolerance: Optional[float] = None,
    show_progress: bool = True,
    anchor_sets: Optional[Sequence[FrozenSet[str]]] = None,
    local_samples: Optional[int] = None,
) -> CellCensus:
    """
    Sample the quotient sphere, add anchored local samples and tally the distinct strict cone sets.
    Args:
        n: Taxon count, 3 to 5.
        samples: Number of uniform draws; defaults to census.samples.
        seed: Seed of the SeedSequence; defaults to census.seed.
        chunk_size: Draws per job; defaults to census.chunk_size.
        threads: Worker threads; resolved with the thread environment override.
        tolerance: Relative boundary tolerance; defaults to solver.tolerance.
        anchor_sets: Topology sets to seed local clouds at; defaults to the
            ORBIT_TABLE rows on four taxa and none otherwise.
        local_samples: Draws per anchor image; defaults to census.local_samples, 0 disables.
    Returns:
        CellCensus: Per-cardinality counts at topology and chain granularity and
        the orbits of the largest cone sets.
    """
    if n < 3:
        raise ValueError(f"cell census needs at least 3 taxa, got {n}")
    require_capacity("cell_census", n, CENSUS_MAX_TAXA)
    samples = census_cfg.samples if samples is None else samples
    seed = census_cfg.seed if seed is None else seed
    chunk_size = census_cfg.chunk_size if chunk_size is None else chunk_size
    tolerance = solver_cfg.tolerance if tolerance is None else tolerance
    local_samples = census_cfg.local_samples if local_samples is None else local_samples
    if anchor_sets is None:
        anchor_sets = [row for row, _ in ORBIT_TABLE] if n == 4 else []
    workers = resolve_thread_count(threads, census_cfg.threads)

    operator = fan_operator(n)
    jobs = math.ceil(samples / chunk_size)
    sizes = [min(chunk_size, samples - k * chunk_size) for k in range(jobs)]
    root = np.random.SeedSequence(seed)
    seeds = root.spawn(jobs)
    topo_counts: Counter = Counter()
    chain_counts: Counter = Counter()
    discarded = 0
    logger.info(f"Cell census n={n}: {samples} samples in {jobs} chunks on {workers} threads (seed {seed})")
    with ThreadPoolExecutor(max_workers=workers) as executor:
        results = executor.map(lambda job: _census_chunk(operator, seeds[job], sizes[job], tolerance), range(jobs))
        for topo, chains, dropped in tqdm(results, total=jobs, desc="census", disable=not show_progress):
            topo_counts.update(topo)
            chain_counts.update(chains)
            discarded += dropped

    targeted = 0
    anchors_found = 0
    if anchor_sets and local_samples > 0:
        rows, anchors_found = anchored_samples(operator, anchor_sets, root.spawn(1)[0], local_samples,
                                               census_cfg.local_scale)
        topo, chains, dropped = _tally(operator, rows, tolerance)
        topo_counts.update(topo)
        chain_counts.update(chains)
        discarded += dropped
        targeted = len(rows)
        logger.info(f"Cell census n={n}: {targeted} anchored samples around {anchors_found} anchor sets")

    width = len(operator.topologies)
    by_cardinality = _cardinality_histogram(topo_counts, width)
    chain_by_cardinality = _cardinality_histogram(chain_counts, len(operator.chains))
    max_cardinality = max(by_cardinality, default=0)
    cells = {
        frozenset(operator.topologies[t] for t in _decode(key, width)): count for key, count in topo_counts.items()
    }

    action = TopologyAction(operator)
    groups: Dict[FrozenSet[Tuple[int, ...]], int] = {}
    for key in topo_counts:
        members = _decode(key, width)
        if len(members) == max_cardinality:
            orbit = action.orbit(members)
            groups[orbit] = groups.get(orbit, 0) + 1
    orbits = tuple(
        sorted(
            (OrbitSummary(action.names(min(orbit)), len(orbit), observed) for orbit, observed in groups.items()),
            key=lambda o: o.representative,
        )
    )
    hits = tuple(row in cells for row, _ in ORBIT_TABLE) if n == 4 else ()
    report = CellCensus(
        n=n,
        samples=samples,
        seed=seed,
        discarded=discarded,
        by_cardinality=by_cardinality,
        chain_by_cardinality=chain_by_cardinality,
        max_cardinality=max_cardinality,
        max_chain_cardinality=max(chain_by_cardinality, default=0),
        orbits=orbits,
        representative_hits=hits,
        targeted_samples=targeted,
        anchors_found=anchors_found,
        cells=cells,
    )
    logger.info(
        f"Cell census n={n}: {len(cells)} distinct cone sets, max cardinality {max_cardinality} "
        f"({report.distinct_maximal_sets} sets, {len(orbits)} orbits), {discarded} boundary samples dropped"
    )
    return report


def q4_census(samples: Optional[int] = None, seed: Optional[int] = None, **kwargs) -> CellCensus:
    """Cell census on four taxa, checked against ORBIT_TABLE."""
    return cell_census(4, samples=samples, seed=seed, **kwargs)
