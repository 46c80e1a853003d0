"""
Set-partition sums W^N_M and the densities G^A_B = W^A_B exp(-V^A)
"""

import math
from dataclasses import dataclass

from errors import ModelInconsistencyError, NonSmoothModelError, StructuralError
from lattice.partitions import bell_number, partition_masks
from lattice.subsets import EvaluationPoint, IndexSet
from logging_config import get_density_logger
from models.base import ExponentModel
from .derivatives import EXACT_IF_AVAILABLE, DerivativeCache

logger = get_density_logger()


@dataclass(frozen=True)
class PartitionSumResult:
    """W^N_M(x) with the number of partitions of M it summed over"""
    outer: IndexSet
    inner: IndexSet
    value: float
    partition_count: int


def partition_sum_by_mask(cache: DerivativeCache, outer: int, inner: int, point: EvaluationPoint) -> float:
    """
    W^N_M(x) = sum over partitions pi of M of (-1)^|pi| prod_{J in pi} V^N_J(x),
    with W^N_{} = 1.
    """
    if inner == 0:
        return 1.0
    if inner & ~outer:
        raise StructuralError("partition sums need M inside N")
    total = 0.0
    for blocks in partition_masks(inner):
        term = -1.0 if len(blocks) % 2 else 1.0
        for block in blocks:
            term *= cache.get(outer, block, point.coords)
            if term == 0.0:
                break
        total += term
    return total


def partition_sum_w(model: ExponentModel, outer: IndexSet, inner: IndexSet, point: EvaluationPoint,
                    method: str = EXACT_IF_AVAILABLE, cache: DerivativeCache = None) -> PartitionSumResult:
    """W^N_M(x) for M inside N; the empty M gives 1"""
    model.check_point(point)
    if not inner <= outer:
        raise StructuralError(f"partition sums need {inner} inside {outer}")
    cache = cache or DerivativeCache(model, method)
    value = partition_sum_by_mask(cache, outer.mask(model.ground), inner.mask(model.ground), point)
    result = PartitionSumResult(outer, inner, value, bell_number(len(inner)))
    logger.debug(f"W^{outer}_{inner} = {value:.6g} over {result.partition_count} partitions, "
                 f"{cache.misses} derivative evaluations")
    return result


def _require_smooth(model: ExponentModel) -> None:
    if not model.smooth_density:
        raise NonSmoothModelError(model.kind)


def cdf_mixed_partial(model: ExponentModel, marginal: IndexSet, wrt: IndexSet, point: EvaluationPoint,
                      method: str = EXACT_IF_AVAILABLE) -> float:
    """G^A_B(x) = W^A_B(x) exp(-V^A(x))"""
    _require_smooth(model)
    weight = partition_sum_w(model, marginal, wrt, point, method).value
    return weight * math.exp(-model.exponent(marginal, point))


def density(model: ExponentModel, marginal: IndexSet, point: EvaluationPoint,
            method: str = EXACT_IF_AVAILABLE) -> float:
    """Density of X_A at x_A, W^A_A(x) exp(-V^A(x))"""
    _require_smooth(model)
    weight = partition_sum_w(model, marginal, marginal, point, method).value
    if weight <= 0.0:
        raise ModelInconsistencyError(
            f"{model.describe()} claims a positive density but W^{marginal}_{marginal} = {weight:.6g} at {point}"
        )
    return weight * math.exp(-model.exponent(marginal, point))
