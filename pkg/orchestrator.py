"""
Pipeline Orchestrator
--------------------
Ties the solvers, the fan analysis and the report documents together.
- FitPipeline: read a matrix, run one fitting method plus the UPGMA baseline, build a RunReport.
- FanAnalysisPipeline: census, comb witness and cone-count probe documents.
"""
import time
from typing import Callable, Dict, Optional, Tuple

from core_model.dissimilarity import DissimilarityMap
from fan_analysis.census import cell_census
from fan_analysis.cone_set import projection_cone_set
from fan_analysis.probe import conjecture_probe
from fan_analysis.witness import comb_witness
from io_cli.parsers import read_distance_matrix
from io_cli.report import (
    CensusReport,
    ProbeReport,
    RunReport,
    WitnessReport,
    build_census_report,
    build_probe_report,
    build_run_report,
    build_witness_report,
)
from projection.projector import ProjectionOutcome
from search.brute_force import brute_force_optimum
from search.exact import exact_search
from search.extended import extended_upgma
from search.results import SearchResult, SearchStats
from upgma.average_linkage import upgma
from utils.env import load_environment
from utils.logger import setup_logger

load_environment()
logger = setup_logger(__name__)


def _upgma_result(d: DissimilarityMap, exact: bool) -> SearchResult:
    start = time.perf_counter()
    trace = upgma(d, exact=exact)
    return SearchResult(trace.result, SearchStats(visited_chains=1, wall_time=time.perf_counter() - start))


class FitPipeline:
    """
    One fitting run: method dispatch, UPGMA baseline and report assembly.
    """
    METHODS: Dict[str, Callable[..., SearchResult]] = {
        "upgma": _upgma_result,
        "extended": lambda d, exact: extended_upgma(d, exact=exact),
        "exact": lambda d, exact: exact_search(d, exact=exact),
        "brute": lambda d, exact: brute_force_optimum(d, exact=exact),
    }

    def __init__(self, method: str = "exact", exact_rational: bool = False, list_cones: bool = False,
                 strict_cones: bool = False):
        """
        Args:
            method: One of upgma, extended, exact, brute.
            exact_rational: Solve with Fractions and report the exact error.
            list_cones: Attach the projection cone set of the input to the report.
            strict_cones: List interior memberships only.
        """
        if method not in self.METHODS:
            raise ValueError(f"unknown method {method!r}; choose from {sorted(self.METHODS)}")
        self.method = method
        self.exact_rational = exact_rational
        self.list_cones = list_cones
        self.strict_cones = strict_cones

    def solve(self, d: DissimilarityMap) -> Tuple[ProjectionOutcome, SearchStats]:
        result = self.METHODS[self.method](d, self.exact_rational)
        return result.best, result.stats

    def run(self, d: DissimilarityMap) -> RunReport:
        outcome, stats = self.solve(d)
        baseline = outcome if self.method == "upgma" else upgma(d, exact=self.exact_rational).result
        cones = projection_cone_set(d, strict=self.strict_cones, exact=self.exact_rational) if self.list_cones else None
        report = build_run_report(d, self.method, outcome, stats, baseline.squared_error, cones)
        logger.info(
            f"{self.method} fit on {d.n} taxa: squared error {report.squared_error:.6g} "
            f"(UPGMA {report.upgma_squared_error:.6g})"
        )
        return report

    def run_file(self, path: str, fmt: Optional[str] = None) -> RunReport:
        return self.run(read_distance_matrix(path, fmt))


class FanAnalysisPipeline:
    """Census, witness and probe runs over the projection-cone fan."""

    def __init__(self, threads: Optional[int] = None, show_progress: bool = True):
        self.threads = threads
        self.show_progress = show_progress

    def census(self, n: int = 4, samples: Optional[int] = None, seed: Optional[int] = None,
               chunk_size: Optional[int] = None) -> CensusReport:
        census = cell_census(n, samples=samples, seed=seed, chunk_size=chunk_size, threads=self.threads,
                             show_progress=self.show_progress)
        return build_census_report(census)

    def witness(self, n: int, a: float = 0.0, b: float = 1.0) -> WitnessReport:
        d = comb_witness(n, a, b)
        return build_witness_report(d, a, b, projection_cone_set(d, strict=True))

    def probe(self, n: int, samples: int = 10_000, seed: Optional[int] = None) -> ProbeReport:
        return build_probe_report(conjecture_probe(n, samples=samples, seed=seed))


if __name__ == "__main__":
    from io_cli.cli import cli_main

    raise SystemExit(cli_main())
