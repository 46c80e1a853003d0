"""
Exponent-function interface shared by every model
"""

from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from typing import List

import numpy as np

import settings
from errors import DomainError, NonSmoothModelError, StructuralError
from lattice.subsets import EvaluationPoint, IndexSet
from lattice.tables import LatticeTable, check_lattice_size
from logging_config import get_models_logger

logger = get_models_logger()


class ExponentModel(ABC):
    """
    A simple max-stable law given through its exponent functions
    V^A(x_A) = -log P(X_A <= x_A) for every non-empty A of the ground set.

    Engines work on bitmasks relative to the ascending label order of
    ground and on coordinate arrays aligned with it; coordinates outside
    the evaluated subset are ignored.
    """

    kind = "abstract"

    def __init__(self, ground: IndexSet, smooth_density: bool, exact_derivatives: bool):
        check_lattice_size(len(ground))
        self.ground = ground
        self.smooth_density = smooth_density
        self.exact_derivatives = exact_derivatives

    @property
    def size(self) -> int:
        return len(self.ground)

    @property
    def full_mask(self) -> int:
        return (1 << self.size) - 1

    @abstractmethod
    def exponent_mask(self, mask: int, coords: np.ndarray) -> float:
        """V^A for the subset encoded by mask"""

    def derivative_mask(self, mask: int, wrt: int, coords: np.ndarray) -> float:
        """Closed-form mixed partial of V^A with respect to the variables in wrt"""
        raise NonSmoothModelError(self.kind)

    @abstractmethod
    def restrict(self, subset: IndexSet) -> "ExponentModel":
        """Model of the subvector X_S on the ground set S"""

    def describe(self) -> str:
        return f"{self.kind} model on {self.ground}"

    def exponent(self, subset: IndexSet, point: EvaluationPoint) -> float:
        self.check_point(point)
        if subset.is_empty():
            raise DomainError("exponent functions need a non-empty index set")
        return self.exponent_mask(subset.mask(self.ground), point.coords)

    def exponent_table(self, point: EvaluationPoint) -> LatticeTable:
        """{V^A(x_A)} for every non-empty A at a fixed point"""
        self.check_point(point)
        values = np.zeros(1 << self.size)
        for mask in range(1, 1 << self.size):
            values[mask] = self.exponent_mask(mask, point.coords)
        return LatticeTable(self.ground, values, "V")

    def check_point(self, point: EvaluationPoint) -> None:
        if point.ground != self.ground:
            raise StructuralError(f"point lives on {point.ground}, model on {self.ground}")


def v_eval(model: ExponentModel, subset: IndexSet, point: EvaluationPoint) -> float:
    """V^A(x_A); finite and nonnegative"""
    return model.exponent(subset, point)


def extremal_coefficient(model: ExponentModel, subset: IndexSet) -> float:
    """theta_A = V^A(1_A): 1 under complete dependence, |A| under independence"""
    return model.exponent(subset, EvaluationPoint.constant(model.ground))


@dataclass
class ModelProbeReport:
    """Outcome of the margin, homogeneity and monotonicity probes"""
    margin_error: float
    homogeneity_error: float
    monotonicity_violations: int
    tolerance: float
    notes: List[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return (
            self.margin_error <= self.tolerance
            and self.homogeneity_error <= self.tolerance
            and self.monotonicity_violations == 0
        )


def _probe_points(model: ExponentModel) -> List[EvaluationPoint]:
    values = settings.PROBE_VALUES
    points = [EvaluationPoint.constant(model.ground, value) for value in values]
    for shift in range(len(values)):
        points.append(EvaluationPoint(
            model.ground, [values[(position + shift) % len(values)] for position in range(model.size)]
        ))
    return points


def validate_model(model: ExponentModel, tolerance: float = None) -> ModelProbeReport:
    """
    Probe unit-Frechet margins, homogeneity of order -1 and monotonicity
    under inclusion on a small deterministic grid.
    """
    tolerance = tolerance or settings.PROBE_TOLERANCE
    full_tables = model.size <= 12
    margin_error = 0.0
    homogeneity_error = 0.0
    violations = 0

    for point in _probe_points(model):
        coords = point.coords
        for position in range(model.size):
            value = model.exponent_mask(1 << position, coords)
            margin_error = max(margin_error, abs(value * coords[position] - 1.0))

        if full_tables:
            base = model.exponent_table(point).values
        else:
            masks = [1 << position for position in range(model.size)] + [model.full_mask]
            base = {mask: model.exponent_mask(mask, coords) for mask in masks}

        for scale in settings.PROBE_SCALES:
            scaled = point.scaled(scale)
            if full_tables:
                moved = model.exponent_table(scaled).values[1:] * scale
                reference = base[1:]
            else:
                moved = np.array([model.exponent_mask(mask, scaled.coords) * scale for mask in base])
                reference = np.array(list(base.values()))
            error = np.max(np.abs(moved - reference) / np.maximum(reference, np.finfo(float).tiny))
            homogeneity_error = max(homogeneity_error, float(error))

        if full_tables:
            masks = np.arange(1 << model.size)
            for position in range(model.size):
                bit = 1 << position
                lower = masks[(masks & bit) == 0]
                slack = tolerance * (1.0 + np.abs(base[lower | bit]))
                violations += int(np.sum(base[lower | bit] < base[lower] - slack))

    report = ModelProbeReport(margin_error, homogeneity_error, violations, tolerance)
    if not full_tables:
        report.notes.append("monotonicity probed on singletons and the full set only")
    logger.debug(f"Probe report for {model.describe()}: {report}")
    return report

