"""
Tensor Gauss-Legendre integration of densities in log-coordinates
"""

import itertools

import numpy as np
from scipy.special import roots_legendre

import settings
from lattice.subsets import EvaluationPoint, IndexSet
from logging_config import get_density_logger
from models.base import ExponentModel
from .derivatives import EXACT_IF_AVAILABLE
from .partition_sum import density

logger = get_density_logger()


def log_nodes(count: int = None, log_range=None):
    """Nodes x = exp(u) and weights including the Jacobian exp(u)"""
    count = count or settings.QUADRATURE_NODES
    low, high = log_range or settings.QUADRATURE_LOG_RANGE
    nodes, weights = roots_legendre(count)
    half = 0.5 * (high - low)
    u = low + half * (nodes + 1.0)
    return np.exp(u), weights * half * np.exp(u)


def density_integral(model: ExponentModel, marginal: IndexSet = None, count: int = None,
                     log_range=None, method: str = EXACT_IF_AVAILABLE) -> float:
    """Integral of the density of X_A over (0, inf)^A; close to 1 for a genuine density"""
    marginal = marginal or model.ground
    sub_model = model.restrict(marginal)
    nodes, weights = log_nodes(count, log_range)
    total = 0.0
    for indices in itertools.product(range(nodes.size), repeat=len(marginal)):
        point = EvaluationPoint(marginal, nodes[list(indices)])
        total += float(np.prod(weights[list(indices)])) * density(sub_model, marginal, point, method)
    logger.info(f"Density of {marginal} integrates to {total:.8f} over {nodes.size}^{len(marginal)} nodes")
    return total
