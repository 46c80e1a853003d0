"""
Pairwise coefficients chi_{A,B} and d_{A,B} from exponent functions and d-tables
"""

from dataclasses import dataclass
from typing import Mapping, Optional, Tuple

import numpy as np

import settings
from errors import ModelInconsistencyError, StructuralError
from lattice.subsets import EvaluationPoint, IndexSet, require_disjoint
from lattice.tables import LatticeTable
from logging_config import get_diagnostics_logger
from models.base import ExponentModel

logger = get_diagnostics_logger()


@dataclass(frozen=True)
class PairMasks:
    """Bitmasks of A, B and C = I minus (A u B) relative to a ground set"""
    first: int
    second: int
    rest: int

    @classmethod
    def build(cls, ground: IndexSet, first: IndexSet, second: IndexSet) -> "PairMasks":
        require_disjoint(first, second)
        rest = ground - first - second
        return cls(first.mask(ground), second.mask(ground), rest.mask(ground))

    def chi_terms(self) -> Tuple[int, int, int]:
        """Masks of V^A + V^B - V^{A u B}"""
        return self.first, self.second, self.first | self.second

    def d_terms(self) -> Tuple[int, int, int, int]:
        """Masks of V^{A u C} + V^{B u C} - V^I - V^C"""
        full = self.first | self.second | self.rest
        return self.first | self.rest, self.second | self.rest, full, self.rest


def clamp_nonnegative(values: np.ndarray, scale: np.ndarray, what: str) -> np.ndarray:
    """
    Clamp rounding negatives of a quantity that is nonnegative for every
    genuine model. Below -CLAMP_SLACK * scale the model is inconsistent.
    """
    values = np.asarray(values, dtype=float)
    scale = np.maximum(np.asarray(scale, dtype=float), np.finfo(float).tiny)
    if np.any(values < -settings.CLAMP_SLACK * scale):
        worst = float(np.min(values / scale))
        raise ModelInconsistencyError(f"{what} is negative beyond rounding (relative value {worst:.3g})")
    if np.any(values < -settings.WARN_SLACK * scale):
        logger.warning(f"Clamping negative {what} within rounding slack (min {float(values.min()):.3g})")
    return np.maximum(values, 0.0)


def pair_values(v_values: np.ndarray, masks: PairMasks,
                columns: Optional[Mapping[int, int]] = None) -> Tuple[np.ndarray, np.ndarray]:
    """
    (d_{A,B}, chi_{A,B}) from V-tables, one table per row of v_values.
    Slot 0 of a V-table holds V^{} = 0, so C = {} needs no special case.
    With columns, rows are compact and columns maps each mask to its column.
    """
    v_values = np.atleast_2d(v_values)
    column = (lambda mask: mask) if columns is None else columns.__getitem__
    a, b, ab = (v_values[:, column(mask)] for mask in masks.chi_terms())
    ac, bc, full, c = (v_values[:, column(mask)] for mask in masks.d_terms())
    chi = clamp_nonnegative(a + b - ab, np.maximum(a + b, ab), "chi_{A,B}")
    d = clamp_nonnegative(ac + bc - full - c, np.maximum(ac + bc, full + c), "d_{A,B}")
    return d, chi


def _point_values(model: ExponentModel, masks: Tuple[int, ...], point: EvaluationPoint) -> np.ndarray:
    model.check_point(point)
    return np.array([model.exponent_mask(mask, point.coords) if mask else 0.0 for mask in masks])


def chi_pair(model: ExponentModel, first: IndexSet, second: IndexSet, point: EvaluationPoint) -> float:
    """chi_{A,B}(x) = V^A + V^B - V^{A u B}"""
    masks = PairMasks.build(model.ground, first, second)
    a, b, ab = _point_values(model, masks.chi_terms(), point)
    return float(clamp_nonnegative(a + b - ab, max(a + b, ab), "chi_{A,B}"))


def d_pair(model: ExponentModel, first: IndexSet, second: IndexSet, point: EvaluationPoint) -> float:
    """d_{A,B}(x) = V^{A u C} + V^{B u C} - V(x) - V^C, with V^{} = 0"""
    masks = PairMasks.build(model.ground, first, second)
    ac, bc, full, c = _point_values(model, masks.d_terms(), point)
    return float(clamp_nonnegative(ac + bc - full - c, max(ac + bc, full + c), "d_{A,B}"))


def d_pair_from_lattice(d_table: LatticeTable, first: IndexSet, second: IndexSet, chi: bool = False) -> float:
    """
    Sum of d_L over L meeting both A and B and missing C. With chi=True the
    C constraint is dropped and the sum is chi_{A,B}.
    """
    if d_table.kind != "d":
        raise StructuralError(f"expected a d-table, got a {d_table.kind}-table")
    masks = PairMasks.build(d_table.ground, first, second)
    every = np.arange(d_table.values.size)
    selected = ((every & masks.first) != 0) & ((every & masks.second) != 0)
    if not chi:
        selected &= (every & masks.rest) == 0
    return float(d_table.values[selected].sum())
