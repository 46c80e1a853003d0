"""
Discrete spectral measures and max-linear models
"""

import hashlib
from dataclasses import dataclass
from typing import Optional, Sequence, Tuple

import numpy as np

import settings
from errors import DomainError, ModelValidationError
from lattice.subsets import EvaluationPoint, IndexSet, require_disjoint
from lattice.tables import LatticeTable
from logging_config import get_models_logger
from .base import ExponentModel

logger = get_models_logger()


class DiscreteSpectralMeasure(ExponentModel):
    """
    Finite spectral measure H = sum_k m_k delta_{omega_k}.

    Only the loadings m_k * omega_k enter the exponent functions, so
    directions are kept as given and the reference norm is metadata.
    """

    kind = "discrete"

    def __init__(self, ground: IndexSet, weights: Sequence[float], directions: Sequence[Sequence[float]],
                 norm_tag: str = "max"):
        # V is piecewise linear in 1/x, so there is never a density
        super().__init__(ground, smooth_density=False, exact_derivatives=False)
        self.weights = np.asarray(weights, dtype=float).copy()
        self.directions = np.atleast_2d(np.asarray(directions, dtype=float)).copy()
        self.norm_tag = norm_tag
        self._check_atoms()
        self.loadings = self.weights[:, None] * self.directions
        for array in (self.weights, self.directions, self.loadings):
            array.setflags(write=False)

    def _check_atoms(self) -> None:
        if self.weights.size == 0:
            raise ModelValidationError("spectral measure needs at least one atom")
        if self.directions.shape != (self.weights.size, self.size):
            raise ModelValidationError(
                f"directions must have shape ({self.weights.size}, {self.size}), got {self.directions.shape}"
            )
        if not np.all(np.isfinite(self.weights)) or np.any(self.weights <= 0):
            raise ModelValidationError("atom weights must be positive and finite")
        if not np.all(np.isfinite(self.directions)) or np.any(self.directions < 0):
            raise ModelValidationError("atom directions must be nonnegative and finite")
        empty = np.flatnonzero(~np.any(self.directions > 0, axis=1))
        if empty.size:
            raise ModelValidationError(f"atom {int(empty[0])} has an all-zero direction")

    @property
    def atom_count(self) -> int:
        return self.weights.size

    def describe(self) -> str:
        return f"discrete spectral measure with {self.atom_count} atoms on {self.ground}"

    def digest(self) -> str:
        return hashlib.sha256(self.loadings.tobytes()).hexdigest()[:16]

    def moment_sums(self) -> np.ndarray:
        """sum_k m_k omega_{k,i} per coordinate; all ones for a simple max-stable law"""
        return self.loadings.sum(axis=0)

    def scaled_loadings(self, coords: np.ndarray) -> np.ndarray:
        """a_{k,i} = m_k omega_{k,i} / x_i"""
        return self.loadings / coords

    def exponent_mask(self, mask: int, coords: np.ndarray) -> float:
        columns = [position for position in range(self.size) if mask >> position & 1]
        scaled = self.loadings[:, columns] / coords[columns]
        return float(scaled.max(axis=1).sum())

    def _extreme_tables(self, coords: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
        """
        Per-atom max and min of a_{k,i} over every subset, shape (2**n, K).
        Row 0 holds max = 0 and min = +inf for the empty set.
        """
        scaled = self.scaled_loadings(coords)
        maxima = np.zeros((1 << self.size, self.atom_count))
        minima = np.full((1 << self.size, self.atom_count), np.inf)
        for position in range(self.size):
            low, high = 1 << position, 1 << (position + 1)
            # masks in [low, high) are the masks below low plus bit `position`
            maxima[low:high] = np.maximum(maxima[:low], scaled[:, position])
            minima[low:high] = np.minimum(minima[:low], scaled[:, position])
        return maxima, minima

    def exponent_table(self, point: EvaluationPoint) -> LatticeTable:
        self.check_point(point)
        maxima, _ = self._extreme_tables(point.coords)
        return LatticeTable(self.ground, maxima.sum(axis=1), "V")

    def spectral_tables(self, point: EvaluationPoint) -> Tuple[LatticeTable, LatticeTable]:
        """
        Exact atom sums
            d_A(x)   = sum_k [min_{i in A} a_{k,i} - max_{j not in A} a_{k,j}]_+
            chi_A(x) = sum_k min_{i in A} a_{k,i}
        with max over the empty set equal to 0.
        """
        self.check_point(point)
        maxima, minima = self._extreme_tables(point.coords)
        minima[0] = 0.0
        # maxima[::-1][A] is the max over the complement of A
        d_values = np.clip(minima - maxima[::-1], 0.0, None).sum(axis=1)
        chi_values = minima.sum(axis=1)
        return LatticeTable(self.ground, d_values, "d"), LatticeTable(self.ground, chi_values, "chi")

    def spectral_pair(self, first: IndexSet, second: IndexSet, point: EvaluationPoint) -> Tuple[float, float]:
        """
        Exact atom sums for a disjoint pair (A, B) with C the remaining labels
            d_{A,B}   = sum_k [min(max_A a_k, max_B a_k) - max_C a_k]_+
            chi_{A,B} = sum_k min(max_A a_k, max_B a_k)
        """
        self.check_point(point)
        require_disjoint(first, second)
        rest = self.ground - first - second
        scaled = self.scaled_loadings(point.coords)
        labels = self.ground.labels

        def block_max(block: IndexSet) -> np.ndarray:
            if block.is_empty():
                return np.zeros(self.atom_count)
            return scaled[:, [labels.index(label) for label in block.labels]].max(axis=1)

        shared = np.minimum(block_max(first), block_max(second))
        d_value = float(np.clip(shared - block_max(rest), 0.0, None).sum())
        return d_value, float(shared.sum())

    def shares_atom(self, first: IndexSet, second: IndexSet) -> bool:
        """
        True when some atom charges both an A- and a B-coordinate. For a
        discrete measure chi_{A,B} vanishes identically exactly when it
        returns False.
        """
        require_disjoint(first, second)
        labels = self.ground.labels
        on_first = np.any(self.directions[:, [labels.index(label) for label in first.labels]] > 0, axis=1)
        on_second = np.any(self.directions[:, [labels.index(label) for label in second.labels]] > 0, axis=1)
        return bool(np.any(on_first & on_second))

    def restrict(self, subset: IndexSet) -> "DiscreteSpectralMeasure":
        labels = self.ground.labels
        columns = [labels.index(label) for label in subset.labels]
        if len(columns) != len(subset):
            raise DomainError(f"{subset} is not a subset of {self.ground}")
        kept = self.directions[:, columns]
        rows = np.any(kept > 0, axis=1)
        return DiscreteSpectralMeasure(
            subset, self.weights[rows], kept[rows], norm_tag=self.norm_tag
        )


@dataclass
class SpectralValidationReport:
    """Moment-condition check of a discrete spectral measure"""
    moment_sums: np.ndarray
    tolerance: float
    measure: Optional[DiscreteSpectralMeasure] = None

    @property
    def passed(self) -> bool:
        return bool(np.all(np.abs(self.moment_sums - 1.0) <= self.tolerance))

    def failures(self) -> dict:
        return {
            position: float(total)
            for position, total in enumerate(self.moment_sums)
            if abs(total - 1.0) > self.tolerance
        }


def validate(measure: DiscreteSpectralMeasure, renormalize: bool = False) -> SpectralValidationReport:
    """
    Report per-coordinate moment sums against 1.

    With renormalize the report carries a copy whose coordinates are
    rescaled so every moment sum is exactly 1.
    """
    measure._check_atoms()
    sums = measure.moment_sums()
    report = SpectralValidationReport(sums, settings.MOMENT_TOLERANCE, measure)
    if renormalize:
        report.measure = DiscreteSpectralMeasure(
            measure.ground, measure.weights, measure.directions / sums,
            norm_tag=measure.norm_tag
        )
        report.moment_sums = report.measure.moment_sums()
    if not report.passed:
        logger.info(f"Moment conditions fail for {measure.describe()}: {report.failures()}")
    return report


def max_linear(coefficients: Sequence[Sequence[float]], ground: IndexSet,
               renormalize: bool = False) -> DiscreteSpectralMeasure:
    """
    Spectral measure of X_i = max_k c_{k,i} Z_k for independent unit Frechet Z_k,
    so that V(x) = sum_k max_i c_{k,i} / x_i.

    Columns must sum to 1; renormalize divides every column by its sum.
    """
    matrix = np.atleast_2d(np.asarray(coefficients, dtype=float))
    if matrix.shape[1] != len(ground):
        raise ModelValidationError(f"coefficient matrix needs {len(ground)} columns, got {matrix.shape[1]}")
    if not np.all(np.isfinite(matrix)) or np.any(matrix < 0):
        raise ModelValidationError("max-linear coefficients must be nonnegative and finite")

    column_sums = matrix.sum(axis=0)
    degenerate = np.flatnonzero(column_sums <= 0)
    if degenerate.size:
        raise ModelValidationError(f"degenerate margin: column {ground.labels[int(degenerate[0])]} is zero")
    if renormalize:
        matrix = matrix / column_sums
    elif np.any(np.abs(column_sums - 1.0) > settings.MOMENT_TOLERANCE):
        raise ModelValidationError(
            f"max-linear columns must sum to 1, got {column_sums.tolist()} (use renormalize)"
        )

    rows = np.any(matrix > 0, axis=1)
    if not np.all(rows):
        logger.debug(f"Dropping {int(np.sum(~rows))} all-zero rows of the coefficient matrix")
    matrix = matrix[rows]
    weights = matrix.max(axis=1)
    return DiscreteSpectralMeasure(ground, weights, matrix / weights[:, None], norm_tag="max")


def independence_measure(ground: IndexSet) -> DiscreteSpectralMeasure:
    """Unit-vector atoms: the fully independent law"""
    return DiscreteSpectralMeasure(ground, np.ones(len(ground)), np.eye(len(ground)), norm_tag="max")
