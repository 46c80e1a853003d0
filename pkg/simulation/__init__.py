"""
Simulation of discrete spectral laws, empirical estimators and spectral samplers
"""

from .estimators import EcdfCheck, EcdfProbe, Estimate, ecdf, ecdf_check, empirical_chi, probe_points
from .max_linear import SampleBatch, simulate, simulate_max_linear
from .samplers import AtomResampler, DirichletSampler, SpectralSampler, mc_lemma_integrals
from .streams import substream, unit_frechet

__all__ = [
    'SampleBatch', 'simulate', 'simulate_max_linear',
    'Estimate', 'ecdf', 'empirical_chi', 'ecdf_check', 'EcdfCheck', 'EcdfProbe', 'probe_points',
    'SpectralSampler', 'AtomResampler', 'DirichletSampler', 'mc_lemma_integrals',
    'substream', 'unit_frechet',
]
