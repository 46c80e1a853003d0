"""
Independence and conditional-independence diagnostics d_{A,B}, chi_{A,B}
"""

from .grids import Grid, default_grid, parse_grid, tensor_grid
from .pairs import chi_pair, d_pair, d_pair_from_lattice
from .verdicts import (
    MultiwayReport,
    PairDiagnostic,
    all_pairs_diagnostics,
    ci_necessary_verdict,
    default_tolerance,
    independence_verdict,
    multiway_verdict,
    pair_diagnostic,
)

__all__ = [
    'Grid', 'default_grid', 'parse_grid', 'tensor_grid',
    'chi_pair', 'd_pair', 'd_pair_from_lattice',
    'PairDiagnostic', 'MultiwayReport', 'pair_diagnostic', 'independence_verdict', 'ci_necessary_verdict',
    'all_pairs_diagnostics', 'multiway_verdict', 'default_tolerance',
]
