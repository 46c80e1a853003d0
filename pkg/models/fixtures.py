"""
Reference models used by the verification suites and the tests
"""

from typing import Sequence

import numpy as np

from lattice.subsets import IndexSet, union_all
from .logistic import AsymmetricLogisticModel, LogisticComponent
from .spectral import DiscreteSpectralMeasure, max_linear, validate

# X1 = Z1, X4 = max(Z1, Z2), X5 = max(Z1, Z2, Z3) before standardizing the margins
EXAMPLE2_COEFFICIENTS = [[1.0, 1.0, 1.0], [0.0, 1.0, 1.0], [0.0, 0.0, 1.0]]
EXAMPLE2_LABELS = (1, 4, 5)


def example2_triple() -> DiscreteSpectralMeasure:
    """Standardized (X1, X4, X5): rows (1, 1/2, 1/3), (0, 1/2, 1/3), (0, 0, 1/3)"""
    return max_linear(EXAMPLE2_COEFFICIENTS, IndexSet.of(*EXAMPLE2_LABELS), renormalize=True)


def example2_pair() -> DiscreteSpectralMeasure:
    """Standardized (X1, X5): rows (1, 1/3), (0, 1/3), (0, 1/3); V(1, 1) = 5/3"""
    return max_linear([[3.0, 1.0], [0.0, 1.0], [0.0, 1.0]], IndexSet.of(1, 5), renormalize=True)


def random_discrete_measure(ground: IndexSet, atoms: int, seed: int,
                            sparsity: float = 0.3) -> DiscreteSpectralMeasure:
    """Seed-pinned discrete measure, renormalized so every moment sum is 1"""
    rng = np.random.default_rng(seed)
    size = len(ground)
    directions = rng.uniform(0.05, 1.0, size=(atoms, size))
    directions *= rng.uniform(size=(atoms, size)) > sparsity
    for row in np.flatnonzero(~np.any(directions > 0, axis=1)):
        directions[row, rng.integers(size)] = rng.uniform(0.05, 1.0)
    for column in np.flatnonzero(~np.any(directions > 0, axis=0)):
        directions[rng.integers(atoms), column] = rng.uniform(0.05, 1.0)
    directions /= directions.max(axis=1, keepdims=True)
    weights = rng.uniform(0.2, 2.0, size=atoms)
    measure = DiscreteSpectralMeasure(ground, weights, directions)
    return validate(measure, renormalize=True).measure


def block_product_measure(blocks: Sequence[IndexSet], atoms_per_block: int, seed: int) -> DiscreteSpectralMeasure:
    """Independent discrete blocks: no atom charges two blocks"""
    ground = union_all(blocks)
    labels = ground.labels
    weights, directions = [], []
    for offset, block in enumerate(blocks):
        local = random_discrete_measure(block, atoms_per_block, seed + offset)
        for weight, direction in zip(local.weights, local.directions):
            embedded = np.zeros(len(ground))
            for label, value in zip(block.labels, direction):
                embedded[labels.index(label)] = value
            weights.append(weight)
            directions.append(embedded)
    return DiscreteSpectralMeasure(ground, weights, directions)


def block_logistic_model(blocks: Sequence[IndexSet], alpha: float) -> AsymmetricLogisticModel:
    """Independent symmetric logistic blocks sharing one alpha"""
    components = [
        LogisticComponent(block, alpha, {label: 1.0 for label in block.labels}) for block in blocks
    ]
    return AsymmetricLogisticModel(union_all(blocks), components)
