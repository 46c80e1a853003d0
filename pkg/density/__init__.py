"""
Density engine: mixed partials, partition sums, densities, conditional CDFs and the growth probe
"""

from .conditional import conditional_cdf
from .derivatives import (
    EXACT_IF_AVAILABLE,
    FINITE_DIFFERENCE,
    DerivativeCache,
    DerivativeRequest,
    mixed_difference,
    mixed_partial_v,
)
from .growth import GrowthProbeReport, growth_probe
from .partition_sum import PartitionSumResult, cdf_mixed_partial, density, partition_sum_w
from .quadrature import density_integral

__all__ = [
    'DerivativeRequest', 'DerivativeCache', 'EXACT_IF_AVAILABLE', 'FINITE_DIFFERENCE',
    'mixed_partial_v', 'mixed_difference',
    'PartitionSumResult', 'partition_sum_w', 'density', 'cdf_mixed_partial',
    'conditional_cdf', 'GrowthProbeReport', 'growth_probe', 'density_integral',
]
