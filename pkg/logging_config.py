"""
Centralized logging configuration for xstable
"""

import logging

import settings

BASE_LOGGER = "xstable"


def setup_logging(level: str = None):
    """
    Configure logging for the entire application.

    Args:
        level: Level name overriding settings.LOG_LEVEL, e.g. "DEBUG"
    """
    name = (level or settings.LOG_LEVEL).upper()
    numeric = logging.getLevelName(name)
    if not isinstance(numeric, int):
        raise ValueError(f"unknown log level '{level}'")
    logging.basicConfig(
        level=numeric,
        format=settings.LOG_FORMAT,
        filename=settings.LOG_FILE
    )
    logging.getLogger(BASE_LOGGER).setLevel(numeric)


def get_logger(module_name: str = None) -> logging.Logger:
    """
    Get a logger under the xstable namespace.

    Args:
        module_name: Subsystem name, e.g. "lattice" gives "xstable.lattice"

    Returns:
        Logger instance
    """
    return logging.getLogger(f"{BASE_LOGGER}.{module_name}" if module_name else BASE_LOGGER)


def get_main_logger():
    """Get the top-level xstable logger"""
    return get_logger()


def get_lattice_logger():
    """Get the subset lattice and table logger"""
    return get_logger("lattice")


def get_models_logger():
    """Get the exponent model logger"""
    return get_logger("models")


def get_diagnostics_logger():
    """Get the independence diagnostics logger"""
    return get_logger("diagnostics")


def get_density_logger():
    """Get the density and derivative logger"""
    return get_logger("density")


def get_simulation_logger():
    """Get the sampling and Monte Carlo logger"""
    return get_logger("simulation")


def get_cli_logger():
    """Get the command line logger"""
    return get_logger("cli")
