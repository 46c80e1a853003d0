"""
Spectral samplers and Monte Carlo versions of the atom-sum integrals
"""

import math
from abc import ABC, abstractmethod
from typing import Dict, Sequence, Tuple

import numpy as np

from errors import DomainError, ModelValidationError, SamplerError
from lattice.subsets import EvaluationPoint, IndexSet, require_disjoint
from logging_config import get_simulation_logger
from models.spectral import DiscreteSpectralMeasure
from .estimators import Estimate
from .streams import INTEGRAL_STREAM, VALIDATION_STREAM, check_seed, substream

logger = get_simulation_logger()

VALIDATION_DRAWS = 20_000
# moment estimates may differ from 1 by floating rounding even when the SE vanishes
ROUNDING_SLACK = 1e-12


class SpectralSampler(ABC):
    """
    Draws pairs (w, omega) with E[w f(omega)] = integral of f over H for
    every f homogeneous of order 1.
    """

    def __init__(self, ground: IndexSet):
        self.ground = ground
        self.validated = False

    @property
    def size(self) -> int:
        return len(self.ground)

    @abstractmethod
    def draw(self, generator: np.random.Generator, n: int) -> Tuple[np.ndarray, np.ndarray]:
        """(weights of shape (n,), directions of shape (n, |I|))"""

    def describe(self) -> str:
        return f"{type(self).__name__} on {self.ground}"

    def moment_estimates(self, n: int, seed: int) -> Tuple[np.ndarray, np.ndarray]:
        weights, directions = self.draw(substream(seed, VALIDATION_STREAM), n)
        terms = weights[:, None] * directions
        return terms.mean(axis=0), terms.std(axis=0) / math.sqrt(n)

    def validate(self, seed: int, n: int = VALIDATION_DRAWS) -> None:
        """Every first-moment estimate must lie within 3 SE of 1"""
        means, errors = self.moment_estimates(n, seed)
        off = np.flatnonzero(np.abs(means - 1.0) > 3.0 * errors + ROUNDING_SLACK)
        if off.size:
            label = self.ground.labels[int(off[0])]
            raise SamplerError(
                f"{self.describe()} failed moment validation: coordinate {label} "
                f"estimate {means[off[0]]:.6g} +- {errors[off[0]]:.3g}"
            )
        self.validated = True
        logger.debug(f"{self.describe()} passed moment validation with {n} draws")


class AtomResampler(SpectralSampler):
    """Resamples the atoms of a discrete measure in proportion to their weights"""

    def __init__(self, measure: DiscreteSpectralMeasure):
        super().__init__(measure.ground)
        self.measure = measure
        self.total_mass = float(measure.weights.sum())
        self.probabilities = measure.weights / self.total_mass

    def draw(self, generator: np.random.Generator, n: int) -> Tuple[np.ndarray, np.ndarray]:
        atoms = generator.choice(self.measure.atom_count, size=n, p=self.probabilities)
        return np.full(n, self.total_mass), self.measure.directions[atoms]


class DirichletSampler(SpectralSampler):
    """
    Dirichlet spectral family through its extremal functions
    W_i = Gamma(alpha_i) / alpha_i, drawn with weight 1. Equal alphas give
    the symmetric case.
    """

    def __init__(self, ground: IndexSet, alphas: Sequence[float]):
        super().__init__(ground)
        self.alphas = np.asarray(alphas, dtype=float)
        if self.alphas.shape != (len(ground),):
            raise ModelValidationError(f"Dirichlet sampler needs {len(ground)} parameters, got {self.alphas.size}")
        if not np.all(np.isfinite(self.alphas)) or np.any(self.alphas <= 0):
            raise ModelValidationError("Dirichlet parameters must be positive and finite")

    @classmethod
    def symmetric(cls, ground: IndexSet, alpha: float) -> "DirichletSampler":
        return cls(ground, np.full(len(ground), alpha))

    def draw(self, generator: np.random.Generator, n: int) -> Tuple[np.ndarray, np.ndarray]:
        directions = generator.gamma(self.alphas, size=(n, self.size)) / self.alphas
        return np.ones(n), directions


def _block_max(scaled: np.ndarray, columns: Sequence[int]) -> np.ndarray:
    if not columns:
        return np.zeros(scaled.shape[0])
    return scaled[:, list(columns)].max(axis=1)


def _estimate(values: np.ndarray) -> Estimate:
    return Estimate(float(values.mean()), float(values.std() / math.sqrt(values.size)))


def mc_lemma_integrals(sampler: SpectralSampler, first: IndexSet, point: EvaluationPoint, n: int, seed: int,
                       second: IndexSet = None) -> Dict[str, Estimate]:
    """
    Monte Carlo means of the atom-sum integrands:
        d_A    [min_A a - max_{A^c} a]_+
        chi_A  min_A a
    and with a second set B, C = I minus (A u B),
        d_AB   [min(max_A a, max_B a) - max_C a]_+
        chi_AB min(max_A a, max_B a)
    where a_i = w omega_i / x_i for each draw.
    """
    seed = check_seed(seed)
    if n < 1:
        raise DomainError("sample size must be at least 1")
    if first.is_empty():
        raise DomainError("index sets must be non-empty")
    if point.ground != sampler.ground:
        raise DomainError(f"point lives on {point.ground}, sampler on {sampler.ground}")
    if not sampler.validated:
        sampler.validate(seed)

    weights, directions = sampler.draw(substream(seed, INTEGRAL_STREAM), n)
    scaled = weights[:, None] * directions / point.coords
    labels = sampler.ground.labels

    def columns(subset: IndexSet):
        return [labels.index(label) for label in subset.labels]

    inside = columns(first)
    outside = columns(sampler.ground - first)
    smallest = scaled[:, inside].min(axis=1)
    estimates = {
        "d_A": _estimate(np.clip(smallest - _block_max(scaled, outside), 0.0, None)),
        "chi_A": _estimate(smallest),
    }
    if second is not None:
        require_disjoint(first, second)
        shared = np.minimum(_block_max(scaled, inside), _block_max(scaled, columns(second)))
        rest = columns(sampler.ground - first - second)
        estimates["d_AB"] = _estimate(np.clip(shared - _block_max(scaled, rest), 0.0, None))
        estimates["chi_AB"] = _estimate(shared)
    summary = ", ".join(f"{name}={estimate.value:.6g}" for name, estimate in estimates.items())
    logger.debug(f"Atom-sum integrals from {n} draws of {sampler.describe()}: {summary}")
    return estimates
