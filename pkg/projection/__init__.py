# __init__.py
from projection.fan_operator import FanOperator, fan_operator, member_chains
from projection.isotonic import isotonic_regression
from projection.projector import (
    ProjectionOutcome,
    in_projection_cone,
    level_indicator_matrix,
    level_means,
    project_cone,
    project_subspace,
    squared_error,
)
