"""
Command line front end: model specs in, CSV tables and run reports out
"""

from .commands import diag_command, lattice_command, simulate_command, verify_command
from .reports import RunReport, format_value, run_report, write_csv
from .suites import SUITE_NAMES, SuiteContext, SuiteResult, run_suites

__all__ = [
    'lattice_command', 'diag_command', 'verify_command', 'simulate_command',
    'RunReport', 'run_report', 'write_csv', 'format_value',
    'SuiteContext', 'SuiteResult', 'SUITE_NAMES', 'run_suites',
]
