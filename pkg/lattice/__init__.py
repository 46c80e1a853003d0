"""
Subset-lattice combinatorics and the V / d / chi table inversions
"""

from .partitions import SetPartition, bell_number, enumerate_partitions, partition_masks
from .subsets import EvaluationPoint, IndexSet, enumerate_subsets, parse_index_set, parse_point
from .tables import (
    LatticeTable,
    chi_from_d,
    chi_from_v,
    d_from_chi,
    d_from_v,
    round_trip_residuals,
    v_from_chi,
    v_from_d,
)

__all__ = [
    'IndexSet', 'EvaluationPoint', 'SetPartition', 'LatticeTable',
    'enumerate_subsets', 'enumerate_partitions', 'partition_masks', 'bell_number',
    'parse_index_set', 'parse_point',
    'd_from_v', 'v_from_d', 'chi_from_d', 'd_from_chi', 'chi_from_v', 'v_from_chi',
    'round_trip_residuals',
]
