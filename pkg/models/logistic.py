"""
Symmetric and asymmetric logistic exponent functions
"""

from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence

import numpy as np

import settings
from errors import DomainError, ModelValidationError
from lattice.subsets import EvaluationPoint, IndexSet, bit_positions
from lattice.tables import LatticeTable, subset_sum
from logging_config import get_models_logger
from .base import ExponentModel

logger = get_models_logger()


def falling_factorial(alpha: float, order: int) -> float:
    """alpha (alpha - 1) ... (alpha - order + 1)"""
    return float(np.prod(alpha - np.arange(order)))


def _logistic_partial(scaled: np.ndarray, coords: np.ndarray, alpha: float, wrt: List[int]) -> float:
    """
    Mixed partial of S^alpha with S = sum_i scaled_i, where each scaled_i is a
    power of x_i with d scaled_i / d x_i = -(1/alpha) scaled_i / x_i.
    S is additively separable, so only the chain rule through S survives.
    """
    total = float(scaled.sum())
    if total <= 0.0:
        return 0.0
    order = len(wrt)
    inner = np.prod(-scaled[wrt] / (alpha * coords[wrt]))
    return falling_factorial(alpha, order) * total ** (alpha - order) * float(inner)


def _check_alpha(alpha: float) -> float:
    alpha = float(alpha)
    if not np.isfinite(alpha) or not 0.0 < alpha <= 1.0:
        raise ModelValidationError(f"dependence parameter alpha must lie in (0, 1], got {alpha}")
    return alpha


class LogisticModel(ExponentModel):
    """
    Symmetric logistic law, V^A(x_A) = (sum_{i in A} x_i^(-1/alpha))^alpha.

    alpha = 1 is the independence law; every alpha in (0, 1] has a positive
    continuous density.
    """

    kind = "logistic"

    def __init__(self, ground: IndexSet, alpha: float, smooth_density: bool = True):
        super().__init__(ground, smooth_density=smooth_density, exact_derivatives=True)
        self.alpha = _check_alpha(alpha)

    def describe(self) -> str:
        return f"logistic model alpha={self.alpha:g} on {self.ground}"

    def _scaled(self, coords: np.ndarray) -> np.ndarray:
        return coords ** (-1.0 / self.alpha)

    def exponent_mask(self, mask: int, coords: np.ndarray) -> float:
        positions = bit_positions(mask)
        return float(self._scaled(coords[positions]).sum() ** self.alpha)

    def exponent_table(self, point: EvaluationPoint) -> LatticeTable:
        self.check_point(point)
        singles = np.zeros(1 << self.size)
        singles[[1 << position for position in range(self.size)]] = self._scaled(point.coords)
        return LatticeTable(self.ground, subset_sum(singles) ** self.alpha, "V")

    def derivative_mask(self, mask: int, wrt: int, coords: np.ndarray) -> float:
        positions = bit_positions(mask)
        local = {position: index for index, position in enumerate(positions)}
        scaled = self._scaled(coords[positions])
        return _logistic_partial(scaled, coords[positions], self.alpha, [local[p] for p in bit_positions(wrt)])

    def restrict(self, subset: IndexSet) -> "LogisticModel":
        if subset.is_empty() or not subset <= self.ground:
            raise DomainError(f"{subset} is not a non-empty subset of {self.ground}")
        return LogisticModel(subset, self.alpha, smooth_density=self.smooth_density)


@dataclass(frozen=True)
class LogisticComponent:
    """One term (sum_{i in B} (theta_i / x_i)^(1/alpha_B))^alpha_B of an asymmetric logistic law"""
    subset: IndexSet
    alpha: float
    thetas: Dict[int, float]

    def __post_init__(self):
        if self.subset.is_empty():
            raise ModelValidationError("asymmetric logistic components need a non-empty subset")
        _check_alpha(self.alpha)
        if set(self.thetas) != set(self.subset.labels):
            raise ModelValidationError(f"component {self.subset} needs one weight per label, got {sorted(self.thetas)}")
        for label, theta in self.thetas.items():
            if not np.isfinite(theta) or theta < 0:
                raise ModelValidationError(f"weight theta_{{{label},{self.subset}}} must be nonnegative, got {theta}")


class AsymmetricLogisticModel(ExponentModel):
    """
    Asymmetric logistic law
        V(x) = sum_B (sum_{i in B} (theta_{i,B} / x_i)^(1/alpha_B))^alpha_B
    with sum_{B containing i} theta_{i,B} = 1 for every coordinate i.
    """

    kind = "asymmetric_logistic"

    def __init__(self, ground: IndexSet, components: Sequence[LogisticComponent],
                 smooth_density: Optional[bool] = None):
        components = list(components)
        if smooth_density is None:
            smooth_density = default_smooth_flag(components)
        super().__init__(ground, smooth_density=smooth_density, exact_derivatives=True)
        if not components:
            raise ModelValidationError("asymmetric logistic model needs at least one component")
        self.components = components

        labels = ground.labels
        self.alphas = np.array([component.alpha for component in components])
        self.thetas = np.zeros((len(components), self.size))
        for row, component in enumerate(components):
            if not component.subset <= ground:
                raise ModelValidationError(f"component {component.subset} leaves the ground set {ground}")
            for label, theta in component.thetas.items():
                self.thetas[row, labels.index(label)] = theta
        self.component_masks = [component.subset.mask(ground) for component in components]

        sums = self.thetas.sum(axis=0)
        off = np.flatnonzero(np.abs(sums - 1.0) > settings.MOMENT_TOLERANCE)
        if off.size:
            raise ModelValidationError(
                f"weights of coordinate {labels[int(off[0])]} sum to {sums[off[0]]:.15g}, expected 1"
            )
        for array in (self.alphas, self.thetas):
            array.setflags(write=False)

    def describe(self) -> str:
        return f"asymmetric logistic model with {len(self.components)} components on {self.ground}"

    def _scaled(self, row: int, coords: np.ndarray) -> np.ndarray:
        return (self.thetas[row] / coords) ** (1.0 / self.alphas[row])

    def exponent_mask(self, mask: int, coords: np.ndarray) -> float:
        positions = bit_positions(mask)
        total = 0.0
        for row, component_mask in enumerate(self.component_masks):
            if not component_mask & mask:
                continue
            scaled = self._scaled(row, coords)[positions]
            total += float(scaled.sum() ** self.alphas[row])
        return total

    def exponent_table(self, point: EvaluationPoint) -> LatticeTable:
        self.check_point(point)
        values = np.zeros(1 << self.size)
        singletons = [1 << position for position in range(self.size)]
        for row in range(len(self.components)):
            singles = np.zeros(1 << self.size)
            singles[singletons] = self._scaled(row, point.coords)
            values += subset_sum(singles) ** self.alphas[row]
        return LatticeTable(self.ground, values, "V")

    def derivative_mask(self, mask: int, wrt: int, coords: np.ndarray) -> float:
        positions = bit_positions(mask)
        local = {position: index for index, position in enumerate(positions)}
        targets = [local[position] for position in bit_positions(wrt)]
        total = 0.0
        for row, component_mask in enumerate(self.component_masks):
            # components missing a differentiation variable are constant in it
            if wrt & ~component_mask:
                continue
            scaled = self._scaled(row, coords)[positions]
            total += _logistic_partial(scaled, coords[positions], float(self.alphas[row]), targets)
        return total

    def restrict(self, subset: IndexSet) -> "AsymmetricLogisticModel":
        if subset.is_empty() or not subset <= self.ground:
            raise DomainError(f"{subset} is not a non-empty subset of {self.ground}")
        kept = []
        for component in self.components:
            overlap = component.subset & subset
            if overlap.is_empty():
                continue
            kept.append(LogisticComponent(
                overlap, component.alpha, {label: component.thetas[label] for label in overlap.labels}
            ))
        return AsymmetricLogisticModel(subset, kept, smooth_density=self.smooth_density)


def default_smooth_flag(components: Sequence[LogisticComponent]) -> bool:
    """
    Positive continuous density is claimed by default when every component
    on two or more labels has alpha < 1 and strictly positive weights.
    """
    for component in components:
        if len(component.subset) < 2:
            continue
        if component.alpha >= 1.0 or min(component.thetas.values()) <= 0.0:
            return False
    return True
