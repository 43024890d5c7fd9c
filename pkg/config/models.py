from typing import Literal, Optional

from pydantic import BaseModel, Field


class ProjectConfig(BaseModel):
    name: str = Field(..., description="Project name")
    version: str = Field(default="0.1.0")


class SolverConfig(BaseModel):
    tolerance: float = Field(default=1e-9, gt=0, description="Absolute tolerance on averages after scaling data to unit max-abs")
    max_enumeration_taxa: int = Field(default=8, ge=8)
    exhaustive_max_taxa: int = Field(default=7, ge=7)
    exact_max_taxa: int = Field(default=12, ge=10)
    rational_max_taxa: int = Field(default=7, ge=3)
    tie_enumeration_max_taxa: int = Field(default=6, ge=3)


class CensusConfig(BaseModel):
    samples: int = Field(default=1_000_000, gt=0)
    seed: int = 7
    chunk_size: int = Field(default=50_000, gt=0)
    threads: Optional[int] = Field(default=None, gt=0)
    probe_noise: float = Field(default=1e-6, gt=0)
    local_samples: int = Field(default=256, ge=0, description="Draws per anchor image in the anchored census phase")
    local_scale: float = Field(default=0.5, gt=0, le=1, description="Anchor cloud radius as a fraction of the anchor margin")


class IOConfig(BaseModel):
    symmetry_tolerance: float = Field(default=1e-6, ge=0)
    newick_digits: int = Field(default=12, ge=1, le=17)
    default_format: Literal["phylip", "csv"] = "phylip"
