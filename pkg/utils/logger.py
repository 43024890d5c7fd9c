# logger.py

"""
Logger utility for the equidistant tree toolkit.
- Loads configuration from config/logging.yaml once per process.
- Provides setup_logger() for all modules.
"""
import logging
import os
from logging.config import dictConfig
from typing import Optional

import yaml

LOGGING_CONFIG_PATH = os.path.join(os.path.dirname(__file__), '../config/logging.yaml')

_configured = False


def setup_logger(name: Optional[str] = None) -> logging.Logger:
    """
    Set up logging from the YAML config and return a named logger.
    Args:
        name (str): Optional logger name for submodule logging.
    Returns:
        logging.Logger: Configured logger instance.
    """
    global _configured
    if not _configured:
        try:
            with open(LOGGING_CONFIG_PATH, 'r') as f:
                config = yaml.safe_load(f)
            dictConfig(config)
        except (OSError, yaml.YAMLError, ValueError) as e:
            logging.basicConfig(level=logging.INFO)
            logging.getLogger(__name__).warning(f"Falling back to basic logging: {e}")
        _configured = True
    return logging.getLogger(name)

# Example usage in other modules:
# from utils.logger import setup_logger
# logger = setup_logger(__name__)
# logger.info('Logger initialized successfully!')
