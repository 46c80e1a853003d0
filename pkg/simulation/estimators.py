"""
Empirical CDF and chi_{A,B} estimators with standard errors
"""

import math
from dataclasses import dataclass, field
from typing import List, Optional

import numpy as np

import settings
from errors import SamplerError
from lattice.subsets import EvaluationPoint, IndexSet, require_disjoint
from logging_config import get_simulation_logger
from models.base import ExponentModel
from .max_linear import SampleBatch

logger = get_simulation_logger()


@dataclass(frozen=True)
class Estimate:
    """Monte Carlo point estimate and its standard error"""
    value: float
    se: float

    def within(self, target: float, multiplier: float = 3.0) -> bool:
        return abs(self.value - target) <= multiplier * self.se


def _below(batch: SampleBatch, subset: IndexSet, point: EvaluationPoint) -> np.ndarray:
    """Indicator of {X_i <= x_i for all i in subset} per draw"""
    limits = point.restrict(subset).coords
    return np.all(batch.columns(subset) <= limits, axis=1)


def ecdf(batch: SampleBatch, point: EvaluationPoint, subset: IndexSet = None) -> float:
    """Fraction of draws with X_S <= x_S; S defaults to the whole ground set"""
    return float(_below(batch, subset or batch.ground, point).mean())


def empirical_chi(batch: SampleBatch, first: IndexSet, second: IndexSet, point: EvaluationPoint) -> Estimate:
    """
    chi_hat = V_hat^A + V_hat^B - V_hat^{A u B} with V_hat^S = -log ECDF_S(x_S);
    the standard error comes from the delta method on the three indicators.
    """
    require_disjoint(first, second)
    events = [_below(batch, subset, point) for subset in (first, second, first | second)]
    shares = [float(event.mean()) for event in events]
    if any(not 0.0 < share < 1.0 for share in shares):
        raise SamplerError(f"probe outside sample range: ECDF values {shares} at {point}")

    value = -math.log(shares[0]) - math.log(shares[1]) + math.log(shares[2])
    # per-draw influence of the estimator
    influence = (
        -(events[0] - shares[0]) / shares[0]
        - (events[1] - shares[1]) / shares[1]
        + (events[2] - shares[2]) / shares[2]
    )
    return Estimate(value, float(influence.std() / math.sqrt(batch.n)))


@dataclass(frozen=True)
class EcdfProbe:
    """ECDF of the batch against exp(-V) at one probe point"""
    point: EvaluationPoint
    ecdf: float
    expected: float
    se: float

    @property
    def within_3se(self) -> bool:
        return abs(self.ecdf - self.expected) <= 3.0 * self.se


@dataclass
class EcdfCheck:
    probes: List[EcdfProbe]
    allowed_misses: int = settings.ECDF_ALLOWED_MISSES
    notes: List[str] = field(default_factory=list)

    @property
    def misses(self) -> int:
        return sum(not probe.within_3se for probe in self.probes)

    @property
    def passed(self) -> bool:
        return self.misses <= self.allowed_misses


def probe_points(ground: IndexSet, count: int = None) -> List[EvaluationPoint]:
    """Deterministic probes: geometric levels in [0.5, 4], alternate coordinates stretched by 1.5"""
    count = count or settings.ECDF_PROBE_COUNT
    points = []
    for position, level in enumerate(np.geomspace(0.5, 4.0, count)):
        coords = [level * (1.5 if (position + column) % 2 else 1.0) for column in range(len(ground))]
        points.append(EvaluationPoint(ground, coords))
    return points


def ecdf_check(model: ExponentModel, batch: SampleBatch, probes: Optional[List[EvaluationPoint]] = None) -> EcdfCheck:
    """Compare the ECDF with exp(-V) at the probe points, 3 binomial SE each"""
    probes = probes or probe_points(batch.ground)
    rows = []
    for point in probes:
        expected = math.exp(-model.exponent(model.ground, point))
        rows.append(EcdfProbe(point, ecdf(batch, point), expected, math.sqrt(expected * (1.0 - expected) / batch.n)))
    check = EcdfCheck(rows)
    logger.info(f"ECDF check: {check.misses} of {len(rows)} probes outside 3 SE")
    return check
