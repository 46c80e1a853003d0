"""
Error hierarchy shared by all xstable packages
"""


class XStableError(ValueError):
    """Base class for every error raised by xstable"""


class StructuralError(XStableError):
    """Incomplete or mismatched lattice tables, subsets outside the ground set"""


class DomainError(XStableError):
    """Arguments outside the domain: empty sets, non-positive coordinates, caps exceeded"""


class ModelValidationError(XStableError):
    """Model parameters violate their constraints"""


class ModelInconsistencyError(XStableError):
    """Computed quantities contradict what a genuine max-stable model must satisfy"""


class NonSmoothModelError(XStableError):
    """Derivative-based operation requested on a model without a smooth density"""

    def __init__(self, kind: str):
        super().__init__(f"non-smooth model: {kind} has no positive continuous density")
        self.kind = kind


class SamplerError(XStableError):
    """Sampling is unavailable or a sampler failed its self-validation"""


class SpecFileError(XStableError):
    """Model specification file could not be parsed or failed schema validation"""
