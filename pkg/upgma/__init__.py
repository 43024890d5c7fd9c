# __init__.py
from upgma.average_linkage import (
    UpgmaTrace,
    certify_upgma_projection,
    upgma,
    upgma_incremental,
    upgma_tie_chains,
)
