"""
Growth probe along x/t: exponential growth of exp(d_{A,B}) against the
polynomial growth of the partition-sum ratio.

Under conditional independence of X_A and X_B given X_C both sides of

    exp(d_{A,B}(x/t)) = [W^{A u C}_C W^{B u C}_C / (W^{A u B u C}_C W^C_C)](x/t)

agree, but the left grows like exp(t d_{A,B}(x)) while the right grows at
most polynomially in t. A positive rate therefore rules CI out.
"""

import math
from dataclasses import dataclass, field
from typing import List, Sequence

import numpy as np
from scipy.stats import linregress

import settings
from errors import DomainError, ModelInconsistencyError, NonSmoothModelError
from lattice.subsets import EvaluationPoint, IndexSet, require_disjoint
from logging_config import get_density_logger
from models.base import ExponentModel
from diagnostics.pairs import d_pair
from workers import run_parallel
from .derivatives import EXACT_IF_AVAILABLE, DerivativeCache
from .partition_sum import partition_sum_by_mask

logger = get_density_logger()


@dataclass
class GrowthProbeReport:
    """Per-t values of log L and R with their fitted growth"""
    first: IndexSet
    second: IndexSet
    rest: IndexSet
    t_grid: List[float]
    log_l: List[float]
    ratio: List[float]
    d_value: float
    rate: float
    rate_r2: float
    poly_slope: float
    tol: float
    notes: List[str] = field(default_factory=list)

    @property
    def exponential(self) -> bool:
        return self.rate_r2 >= settings.GROWTH_MIN_R2 and self.rate > settings.GROWTH_MIN_RATE

    @property
    def ci_impossible(self) -> bool:
        return self.rate > self.tol

    def rows(self) -> List[tuple]:
        return list(zip(self.t_grid, self.log_l, self.ratio))


def _ratio(model: ExponentModel, masks: Sequence[int], point: EvaluationPoint, method: str) -> float:
    first, second, rest = masks
    if rest == 0:
        return 1.0
    cache = DerivativeCache(model, method)
    numerator = (partition_sum_by_mask(cache, first | rest, rest, point)
                 * partition_sum_by_mask(cache, second | rest, rest, point))
    denominator = (partition_sum_by_mask(cache, first | second | rest, rest, point)
                   * partition_sum_by_mask(cache, rest, rest, point))
    if denominator <= 0.0 or numerator <= 0.0:
        raise ModelInconsistencyError(f"partition-sum ratio has non-positive factors at {point}")
    return numerator / denominator


def growth_probe(model: ExponentModel, first: IndexSet, second: IndexSet, point: EvaluationPoint,
                 t_grid: Sequence[float] = None, tol: float = None, method: str = EXACT_IF_AVAILABLE,
                 threads: int = None) -> GrowthProbeReport:
    """Evaluate log L(t) = d_{A,B}(x/t) and R(t) on t_grid and fit their growth"""
    if not model.smooth_density:
        raise NonSmoothModelError(model.kind)
    require_disjoint(first, second)
    model.check_point(point)
    t_grid = [float(t) for t in (t_grid or settings.GROWTH_T_GRID)]
    if len(t_grid) < 2 or any(t <= 0 for t in t_grid) or any(b <= a for a, b in zip(t_grid, t_grid[1:])):
        raise DomainError("growth probe needs an increasing grid of at least two positive t")
    tol = 1e-9 * (1 + model.size) if tol is None else tol

    rest = model.ground - first - second
    masks = (first.mask(model.ground), second.mask(model.ground), rest.mask(model.ground))

    def evaluate(t: float):
        shrunk = point.scaled(1.0 / t)
        return d_pair(model, first, second, shrunk), _ratio(model, masks, shrunk, method)

    values = run_parallel(evaluate, t_grid, threads)
    log_l = [value[0] for value in values]
    ratio = [value[1] for value in values]

    exponential_fit = linregress(t_grid, log_l)
    polynomial_fit = linregress(np.log(t_grid), np.log(ratio))
    report = GrowthProbeReport(
        first, second, rest, t_grid, log_l, ratio,
        d_value=d_pair(model, first, second, point),
        rate=float(exponential_fit.slope),
        rate_r2=float(exponential_fit.rvalue ** 2),
        poly_slope=float(polynomial_fit.slope),
        tol=tol,
    )
    if rest.is_empty():
        report.notes.append("C is empty: W^._{} = 1 and R(t) = 1")
    logger.info(
        f"Growth probe {first} vs {second}: rate {report.rate:.6g} (R^2 {report.rate_r2:.6f}), "
        f"log-log slope of R {report.poly_slope:.3f}, d_pair {report.d_value:.6g}"
    )
    if not math.isclose(report.rate, report.d_value, rel_tol=1e-3, abs_tol=tol):
        report.notes.append("fitted rate differs from d_{A,B}(x)")
    return report
