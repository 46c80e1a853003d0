"""
Model zoo: exponent-function interface, discrete spectral measures, logistic laws and spec files
"""

from .base import ExponentModel, ModelProbeReport, extremal_coefficient, v_eval, validate_model
from .logistic import AsymmetricLogisticModel, LogisticComponent, LogisticModel
from .spec_file import LoadedModel, load_spec, parse_spec
from .spectral import (
    DiscreteSpectralMeasure,
    SpectralValidationReport,
    independence_measure,
    max_linear,
    validate,
)


def restrict(model: ExponentModel, subset) -> ExponentModel:
    """Exponent model of the subvector X_S"""
    return model.restrict(subset)


def spectral_tables(measure: DiscreteSpectralMeasure, point):
    """(d table, chi table) from exact atom sums"""
    return measure.spectral_tables(point)


def spectral_pair(measure: DiscreteSpectralMeasure, first, second, point):
    """(d_{A,B}, chi_{A,B}) from exact atom sums"""
    return measure.spectral_pair(first, second, point)


__all__ = [
    'ExponentModel', 'ModelProbeReport', 'DiscreteSpectralMeasure', 'SpectralValidationReport',
    'LogisticModel', 'AsymmetricLogisticModel', 'LogisticComponent', 'LoadedModel',
    'v_eval', 'extremal_coefficient', 'validate_model', 'validate', 'max_linear', 'independence_measure',
    'restrict', 'spectral_tables', 'spectral_pair', 'load_spec', 'parse_spec',
]
