"""
Solver results shared by every search method.
"""
from dataclasses import asdict, dataclass, field

from projection.projector import ProjectionOutcome


@dataclass
class SearchStats:
    visited_chains: int = 0
    dp_edges: int = 0
    pruned_edges: int = 0
    partitions: int = 0
    wall_time: float = 0.0

    def as_dict(self) -> dict:
        return asdict(self)


@dataclass(frozen=True, eq=False)
class SearchResult:
    best: ProjectionOutcome
    stats: SearchStats = field(default_factory=SearchStats)

    @property
    def squared_error(self):
        return self.best.squared_error
