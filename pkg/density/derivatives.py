"""
Mixed partial derivatives V^A_B of exponent functions
"""

import itertools
from dataclasses import dataclass
from typing import Callable, Dict, Sequence, Tuple

import numpy as np

import settings
from errors import DomainError, NonSmoothModelError, StructuralError
from lattice.subsets import EvaluationPoint, IndexSet, bit_positions
from logging_config import get_density_logger
from models.base import ExponentModel

logger = get_density_logger()

EXACT_IF_AVAILABLE = "exact_if_available"
FINITE_DIFFERENCE = "finite_difference"
METHODS = (EXACT_IF_AVAILABLE, FINITE_DIFFERENCE)


@dataclass(frozen=True)
class DerivativeRequest:
    """V^A_B(x): differentiate the marginal on A with respect to the variables in B"""
    marginal: IndexSet
    wrt: IndexSet
    point: EvaluationPoint
    method: str = EXACT_IF_AVAILABLE

    def __post_init__(self):
        if self.method not in METHODS:
            raise DomainError(f"unknown derivative method '{self.method}', expected one of {METHODS}")
        if self.wrt.is_empty():
            raise DomainError("derivatives need a non-empty set of variables")
        if not self.wrt <= self.marginal:
            raise StructuralError(f"differentiation variables {self.wrt} are not inside {self.marginal}")
        if not self.marginal <= self.point.ground:
            raise StructuralError(f"{self.marginal} is not a subset of the ground set {self.point.ground}")


def central_difference(func: Callable[[np.ndarray], float], coords: np.ndarray,
                       positions: Sequence[int], steps: np.ndarray) -> float:
    """Iterated central difference over positions: 2**k evaluations"""
    total = 0.0
    for signs in itertools.product((1.0, -1.0), repeat=len(positions)):
        shifted = coords.copy()
        shifted[list(positions)] += np.asarray(signs) * steps
        total += float(np.prod(signs)) * func(shifted)
    return total / float(np.prod(2.0 * steps))


def mixed_difference(func: Callable[[np.ndarray], float], coords: np.ndarray, positions: Sequence[int]) -> float:
    """
    Mixed partial of func in the listed coordinates: central differences with
    relative steps h_i = eps^(1/(k+2)) x_i and one Richardson level.
    """
    order = len(positions)
    if order > settings.FD_MAX_ORDER:
        raise DomainError(f"finite differences limited to order {settings.FD_MAX_ORDER}, got {order}")
    coords = np.asarray(coords, dtype=float)
    if np.any(coords[list(positions)] < settings.FD_MIN_COORDINATE):
        raise DomainError(f"finite differences need coordinates >= {settings.FD_MIN_COORDINATE}")

    steps = np.finfo(float).eps ** (1.0 / (order + 2)) * coords[list(positions)]
    ratio = settings.RICHARDSON_RATIO
    coarse = central_difference(func, coords, positions, steps)
    fine = central_difference(func, coords, positions, steps / ratio)
    return (ratio ** 2 * fine - coarse) / (ratio ** 2 - 1.0)


def _use_exact(model: ExponentModel, method: str) -> bool:
    if method == EXACT_IF_AVAILABLE and model.exact_derivatives:
        return True
    if not model.smooth_density:
        raise NonSmoothModelError(model.kind)
    return False


def derivative_by_mask(model: ExponentModel, mask: int, wrt: int, coords: np.ndarray,
                       method: str = EXACT_IF_AVAILABLE) -> float:
    """V^A_B with A and B given as ground-relative bitmasks"""
    if _use_exact(model, method):
        return model.derivative_mask(mask, wrt, coords)
    return mixed_difference(lambda shifted: model.exponent_mask(mask, shifted), coords, bit_positions(wrt))


def mixed_partial_v(model: ExponentModel, marginal: IndexSet, wrt: IndexSet, point: EvaluationPoint,
                    method: str = EXACT_IF_AVAILABLE) -> float:
    """Mixed partial of V^A with respect to the variables in B at x"""
    request = DerivativeRequest(marginal, wrt, point, method)
    model.check_point(point)
    return derivative_by_mask(
        model, request.marginal.mask(model.ground), request.wrt.mask(model.ground), point.coords, method
    )


class DerivativeCache:
    """Memo of V^N_J keyed by (N, J, x) for one ground set"""

    def __init__(self, model: ExponentModel, method: str = EXACT_IF_AVAILABLE):
        self.model = model
        self.method = method
        self._values: Dict[Tuple[int, int, bytes], float] = {}
        self.misses = 0

    def get(self, mask: int, wrt: int, coords: np.ndarray) -> float:
        key = (mask, wrt, coords.tobytes())
        if key not in self._values:
            self.misses += 1
            self._values[key] = derivative_by_mask(self.model, mask, wrt, coords, self.method)
        return self._values[key]

    def __len__(self) -> int:
        return len(self._values)
