"""
Report Documents
----------------
Pydantic models for everything the CLI prints as JSON. Every model forbids
extra fields; optional fields are always emitted (as null when absent).
"""
import hashlib
import math
from fractions import Fraction
from typing import Dict, List, Literal, Optional

from pydantic import BaseModel, ConfigDict, Field

from core_model.chains import chain_topology, comb_chains
from core_model.dissimilarity import DissimilarityMap
from core_model.tree import tree_from_ultrametric
from fan_analysis.census import CellCensus
from fan_analysis.cone_set import ConeSet
from fan_analysis.probe import ProbeResult
from io_cli.newick import emit_newick, newick_pairwise_distances
from projection.projector import ProjectionOutcome
from search.results import SearchStats

Method = Literal["upgma", "extended", "exact", "brute"]


class _Document(BaseModel):
    model_config = ConfigDict(extra="forbid")


class InputDigest(_Document):
    taxa: List[str]
    n: int
    checksum: str = Field(..., description="sha256 of the labels and the pair vector")


class ChainStep(_Document):
    left: List[str]
    right: List[str]


class MergeRecord(ChainStep):
    level: float


class SolverStatsModel(_Document):
    visited_chains: int = 0
    dp_edges: int = 0
    pruned_edges: int = 0
    partitions: int = 0
    wall_time: float = 0.0


class ConeListing(_Document):
    strict: bool
    chains: List[List[ChainStep]]
    topologies: List[str]


class RunReport(_Document):
    input: InputDigest
    method: Method
    chain: List[MergeRecord]
    topology: str
    newick: str
    levels: List[float]
    squared_error: float
    squared_error_exact: Optional[str] = None
    upgma_squared_error: float
    improvement_over_upgma: float
    stats: SolverStatsModel
    cones: Optional[ConeListing] = None


class OrbitModel(_Document):
    representative: List[str]
    orbit_size: int
    observed: int


class CensusReport(_Document):
    n: int
    samples: int
    seed: int
    discarded: int
    targeted_samples: int
    anchors_found: int
    by_cardinality: Dict[int, int]
    chain_by_cardinality: Dict[int, int]
    max_cardinality: int
    max_chain_cardinality: int
    distinct_six_sets: int
    distinct_maximal_sets: int
    orbits: List[OrbitModel]
    representative_hits: List[bool]
    all_representatives_hit: Optional[bool] = None


class WitnessReport(_Document):
    n: int
    a: float
    b: float
    values: List[float]
    strict_chains: int
    strict_topologies: List[str]
    bound: int
    contains_all_root_combs: bool


class ProbeReport(_Document):
    n: int
    samples: int
    seed: int
    bound: int
    max_strict_chains: int
    max_strict_topologies: int
    max_nonstrict_structured: int
    exceeds_bound: bool
    attaining: List[List[float]]


SCHEMAS = {"run": RunReport, "census": CensusReport, "witness": WitnessReport, "probe": ProbeReport}


def input_digest(d: DissimilarityMap) -> InputDigest:
    digest = hashlib.sha256()
    digest.update("\x1f".join(d.taxa.labels).encode())
    digest.update(d.values.tobytes())
    return InputDigest(taxa=list(d.taxa.labels), n=d.n, checksum=digest.hexdigest())


def merge_records(outcome: ProjectionOutcome, labels) -> List[MergeRecord]:
    return [
        MergeRecord(left=[labels[i] for i in step.left], right=[labels[i] for i in step.right], level=float(level))
        for step, level in zip(outcome.chain.merges, outcome.levels)
    ]


def build_run_report(
    d: DissimilarityMap,
    method: str,
    outcome: ProjectionOutcome,
    stats: SearchStats,
    upgma_error,
    cones: Optional[ConeSet] = None,
) -> RunReport:
    labels = d.taxa.labels
    tree = tree_from_ultrametric(outcome.to_ultrametric(), labels)
    listing = None
    if cones is not None:
        listing = ConeListing(
            strict=cones.strict,
            chains=[
                [ChainStep(left=[labels[i] for i in s.left], right=[labels[i] for i in s.right]) for s in chain.merges]
                for chain in sorted(cones.chains, key=lambda c: c.key)
            ],
            topologies=sorted(cones.topologies),
        )
    return RunReport(
        input=input_digest(d),
        method=method,
        chain=merge_records(outcome, labels),
        topology=chain_topology(outcome.chain, labels),
        newick=emit_newick(tree),
        levels=[float(v) for v in outcome.levels],
        squared_error=float(outcome.squared_error),
        squared_error_exact=str(outcome.squared_error) if isinstance(outcome.squared_error, Fraction) else None,
        upgma_squared_error=float(upgma_error),
        improvement_over_upgma=float(upgma_error - outcome.squared_error),
        stats=SolverStatsModel(**stats.as_dict()),
        cones=listing,
    )


def verify_run_report(report: RunReport, d: DissimilarityMap, rel: float = 1e-9) -> bool:
    """Recompute the squared error from the report's Newick tree and the input map."""
    x = newick_pairwise_distances(report.newick, d.taxa.labels)
    error = math.fsum(((d.values - x.values) ** 2).tolist())
    return abs(error - report.squared_error) <= rel * max(1.0, abs(report.squared_error))


def build_census_report(census: CellCensus) -> CensusReport:
    hits = list(census.representative_hits)
    return CensusReport(
        n=census.n,
        samples=census.samples,
        seed=census.seed,
        discarded=census.discarded,
        targeted_samples=census.targeted_samples,
        anchors_found=census.anchors_found,
        by_cardinality=census.by_cardinality,
        chain_by_cardinality=census.chain_by_cardinality,
        max_cardinality=census.max_cardinality,
        max_chain_cardinality=census.max_chain_cardinality,
        distinct_six_sets=census.distinct_six_sets,
        distinct_maximal_sets=census.distinct_maximal_sets,
        orbits=[OrbitModel(representative=list(o.representative), orbit_size=o.orbit_size, observed=o.observed)
                for o in census.orbits],
        representative_hits=hits,
        all_representatives_hit=all(hits) if hits else None,
    )


def build_witness_report(d: DissimilarityMap, a, b, cones: ConeSet) -> WitnessReport:
    combs = set(comb_chains(d.n, root=0))
    return WitnessReport(
        n=d.n,
        a=float(a),
        b=float(b),
        values=d.values.tolist(),
        strict_chains=len(cones.chains),
        strict_topologies=sorted(cones.topologies),
        bound=math.factorial(d.n - 1),
        contains_all_root_combs=combs <= set(cones.chains),
    )


def build_probe_report(result: ProbeResult) -> ProbeReport:
    return ProbeReport(
        n=result.n,
        samples=result.samples,
        seed=result.seed,
        bound=result.bound,
        max_strict_chains=result.max_strict_chains,
        max_strict_topologies=result.max_strict_topologies,
        max_nonstrict_structured=result.max_nonstrict_structured,
        exceeds_bound=result.exceeds_bound,
        attaining=[list(v) for v in result.attaining],
    )
