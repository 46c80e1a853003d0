"""
Exact simulation of discrete spectral (max-linear) laws
"""

from dataclasses import dataclass

import numpy as np

import settings
from errors import SamplerError
from lattice.subsets import IndexSet
from logging_config import get_simulation_logger
from models.base import ExponentModel
from models.spectral import DiscreteSpectralMeasure
from workers import run_parallel
from .streams import SAMPLE_STREAM, check_seed, chunk_sizes, substream, unit_frechet

logger = get_simulation_logger()


@dataclass(frozen=True, eq=False)
class SampleBatch:
    """n realizations of X in the ascending label order of ground"""
    ground: IndexSet
    values: np.ndarray
    seed: int
    model_id: str

    @property
    def n(self) -> int:
        return self.values.shape[0]

    def columns(self, subset: IndexSet) -> np.ndarray:
        labels = self.ground.labels
        return self.values[:, [labels.index(label) for label in subset.labels]]


def _draw_chunk(loadings: np.ndarray, seed: int, index: int, rows: int) -> np.ndarray:
    frechet = unit_frechet(substream(seed, SAMPLE_STREAM, index), (rows, loadings.shape[0]))
    # X_i = max_k m_k omega_{k,i} Z_k
    return np.max(frechet[:, :, None] * loadings[None, :, :], axis=1)


def simulate_max_linear(measure: DiscreteSpectralMeasure, n: int, seed: int,
                        threads: int = None, chunk_size: int = None) -> SampleBatch:
    """
    n independent draws of X_i = max_k m_k omega_{k,i} Z_k with Z_k unit Frechet.
    Chunk j always uses substream (seed, j), so the batch does not depend on
    the thread count.
    """
    seed = check_seed(seed)
    sizes = chunk_sizes(int(n), chunk_size or settings.SAMPLE_CHUNK_SIZE)
    loadings = np.asarray(measure.loadings)

    chunks = run_parallel(lambda job: _draw_chunk(loadings, seed, *job), list(enumerate(sizes)), threads)
    values = np.vstack(chunks)
    values.setflags(write=False)
    logger.info(f"Simulated {values.shape[0]} draws of {measure.describe()} with seed {seed}")
    return SampleBatch(measure.ground, values, seed, measure.digest())


def simulate(model: ExponentModel, n: int, seed: int, threads: int = None) -> SampleBatch:
    """Exact sampling; only discrete spectral models have a sampler"""
    if not isinstance(model, DiscreteSpectralMeasure):
        raise SamplerError(f"no sampler for this model kind: {model.kind}")
    return simulate_max_linear(model, n, seed, threads)
