"""
Counter-based random substreams and unit Frechet variates
"""

from typing import Tuple

import numpy as np

from errors import DomainError

# first spawn-key component, one per purpose
SAMPLE_STREAM = 0
VALIDATION_STREAM = 1
INTEGRAL_STREAM = 2


def check_seed(seed: int) -> int:
    if seed is None:
        raise DomainError("randomized operations need an explicit seed")
    seed = int(seed)
    if not 0 <= seed < 2 ** 64:
        raise DomainError(f"seed must be a 64-bit unsigned integer, got {seed}")
    return seed


def substream(seed: int, *key: int) -> np.random.Generator:
    """
    Philox generator for the substream key of seed. Equal (seed, key) pairs
    give identical streams whatever else was drawn before.
    """
    sequence = np.random.SeedSequence(check_seed(seed), spawn_key=tuple(key))
    return np.random.Generator(np.random.Philox(sequence))


def open_uniform(generator: np.random.Generator, shape: Tuple[int, ...]) -> np.ndarray:
    """Uniform draws on the open interval (0, 1)"""
    draws = generator.random(shape)
    return np.maximum(draws, np.finfo(float).tiny)


def unit_frechet(generator: np.random.Generator, shape: Tuple[int, ...]) -> np.ndarray:
    """Z = -1 / log(U), P(Z <= z) = exp(-1/z)"""
    return -1.0 / np.log(open_uniform(generator, shape))


def chunk_sizes(total: int, chunk_size: int) -> list:
    if total < 1:
        raise DomainError("sample size must be at least 1")
    full, remainder = divmod(total, chunk_size)
    return [chunk_size] * full + ([remainder] if remainder else [])
