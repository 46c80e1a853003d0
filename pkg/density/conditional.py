"""
Regular conditional CDF G(x_A | x_B)
"""

import math

import numpy as np

from errors import ModelInconsistencyError, NonSmoothModelError
from lattice.subsets import EvaluationPoint, IndexSet, require_disjoint
from logging_config import get_density_logger
from models.base import ExponentModel
from .derivatives import EXACT_IF_AVAILABLE, DerivativeCache
from .partition_sum import partition_sum_by_mask

logger = get_density_logger()

MONOTONE_FACTORS = (1.25, 2.0, 8.0)
CDF_SLACK = 1e-9


def conditional_cdf(model: ExponentModel, first: IndexSet, second: IndexSet, point: EvaluationPoint,
                    method: str = EXACT_IF_AVAILABLE, check_monotone: bool = False) -> float:
    """
    G(x_A | x_B) = exp(-[V^{A u B} - V^B]) W^{A u B}_B / W^B_B

    With check_monotone the value is also recomputed with each A-coordinate
    enlarged, and a decrease raises ModelInconsistencyError.
    """
    if not model.smooth_density:
        raise NonSmoothModelError(model.kind)
    require_disjoint(first, second)
    model.check_point(point)
    value = _conditional_value(model, first, second, point, method)

    if check_monotone:
        labels = model.ground.labels
        for label in first.labels:
            previous = value
            for factor in MONOTONE_FACTORS:
                coords = np.array(point.coords)
                coords[labels.index(label)] *= factor
                moved = _conditional_value(model, first, second, EvaluationPoint(model.ground, coords), method)
                if moved < previous - CDF_SLACK:
                    raise ModelInconsistencyError(
                        f"G(x_A | x_B) decreases in x_{label}: {previous:.12g} -> {moved:.12g}"
                    )
                previous = moved
    return value


def _conditional_value(model: ExponentModel, first: IndexSet, second: IndexSet, point: EvaluationPoint,
                       method: str) -> float:
    cache = DerivativeCache(model, method)
    joint_mask = (first | second).mask(model.ground)
    given_mask = second.mask(model.ground)

    given_weight = partition_sum_by_mask(cache, given_mask, given_mask, point)
    if given_weight <= 0.0:
        raise ModelInconsistencyError(f"W^B_B = {given_weight:.6g} is not positive at {point}")
    joint_weight = partition_sum_by_mask(cache, joint_mask, given_mask, point)

    gap = model.exponent_mask(joint_mask, point.coords) - model.exponent_mask(given_mask, point.coords)
    value = math.exp(-gap) * joint_weight / given_weight
    if not 0.0 < value <= 1.0 + CDF_SLACK:
        raise ModelInconsistencyError(f"conditional CDF {value:.12g} outside (0, 1] at {point}")
    return min(value, 1.0)
