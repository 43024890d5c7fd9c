import logging
from typing import List, Optional, Tuple

import hydra
from omegaconf import OmegaConf

from .models import CensusConfig, IOConfig, ProjectConfig, SolverConfig


def get_config(overrides: Optional[List[str]] = None) -> Tuple[ProjectConfig, SolverConfig, CensusConfig, IOConfig]:
    """
    Compose config.yaml with Hydra and convert each section to its Pydantic model.
    Args:
        overrides: Hydra override strings, e.g. ["solver.tolerance=1e-8"].
    Returns:
        Tuple of (project, solver, census, io) configs.
    """
    try:
        with hydra.initialize(config_path=".", version_base=None):
            cfg = hydra.compose(config_name="config.yaml", overrides=overrides or [])
    except Exception as e:
        logging.error(f"Error loading configuration: {e}")
        raise
    sections = OmegaConf.to_container(cfg, resolve=True)
    project = ProjectConfig(**sections["project"])
    solver = SolverConfig(**sections["solver"])
    census = CensusConfig(**sections["census"])
    io = IOConfig(**sections["io"])
    return project, solver, census, io


# Usage example (from any module):
# from config import solver_cfg
project_cfg, solver_cfg, census_cfg, io_cfg = get_config()
