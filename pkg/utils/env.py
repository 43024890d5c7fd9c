import os
from typing import Optional

from dotenv import load_dotenv

from utils.logger import setup_logger

logger = setup_logger(__name__)

THREADS_ENV_VAR = "ULTRAMETRIC_THREADS"


def load_environment():
    """Load variables from .env into the OS environment (idempotent, never overrides)."""
    found = load_dotenv(override=False)
    logger.debug(f"[ENV] .env loaded: {found}")


def resolve_thread_count(requested: Optional[int] = None, configured: Optional[int] = None) -> int:
    """
    Worker thread count: explicit request, then ULTRAMETRIC_THREADS, then config, then all cores.
    """
    if requested is not None:
        return max(1, int(requested))
    raw = os.getenv(THREADS_ENV_VAR)
    if raw:
        try:
            return max(1, int(raw))
        except ValueError:
            logger.warning(f"Ignoring non-integer {THREADS_ENV_VAR}={raw!r}")
    if configured is not None:
        return max(1, int(configured))
    return os.cpu_count() or 1
