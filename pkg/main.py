#!/usr/bin/env python3
"""
xstable - command line entry point
"""

import click

from cli import diag_command, lattice_command, simulate_command, verify_command
from logging_config import setup_logging


@click.group()
@click.option("--log-level", default=None, type=click.Choice(["DEBUG", "INFO", "WARNING", "ERROR"], case_sensitive=False),
              help="Logging level (default: XSTABLE_LOG_LEVEL or INFO)")
def xstable(log_level):
    """Dependence structure of simple max-stable laws"""
    setup_logging(log_level)


xstable.add_command(lattice_command)
xstable.add_command(diag_command)
xstable.add_command(verify_command)
xstable.add_command(simulate_command)


if __name__ == "__main__":
    xstable()
