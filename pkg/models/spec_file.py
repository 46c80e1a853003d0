"""
JSON model specification files

    {
      "kind": "max_linear",
      "indices": [1, 4, 5],
      "params": {"coefficients": [[1, 1, 1], [0, 1, 1], [0, 0, 1]], "renormalize": true},
      "flags": {"smooth_density": false}
    }

The full schema is documented in docs/model_spec.md.
"""

import hashlib
import json
from dataclasses import dataclass
from pathlib import Path
from typing import Annotated, List, Literal, Optional, Union

from pydantic import BaseModel, ConfigDict, Field, TypeAdapter, ValidationError, field_validator, model_validator

import settings
from errors import ModelValidationError, SpecFileError, XStableError
from lattice.subsets import IndexSet
from logging_config import get_models_logger
from .base import ExponentModel, validate_model
from .logistic import AsymmetricLogisticModel, LogisticComponent, LogisticModel
from .spectral import DiscreteSpectralMeasure, max_linear, validate

logger = get_models_logger()


class SpecModel(BaseModel):
    model_config = ConfigDict(extra="forbid")


class Flags(SpecModel):
    smooth_density: Optional[bool] = None


class Atom(SpecModel):
    weight: float = Field(gt=0)
    direction: List[float]


class DiscreteParams(SpecModel):
    atoms: List[Atom] = Field(min_length=1)
    norm: str = "max"
    renormalize: bool = False


class MaxLinearParams(SpecModel):
    coefficients: List[List[float]] = Field(min_length=1)
    renormalize: bool = False


class LogisticParams(SpecModel):
    alpha: float = Field(gt=0, le=1)


class ComponentParams(SpecModel):
    subset: List[int] = Field(min_length=1)
    alpha: float = Field(gt=0, le=1)
    thetas: List[float]

    @model_validator(mode="after")
    def check_lengths(self):
        if len(self.thetas) != len(self.subset):
            raise ValueError(f"component {self.subset} has {len(self.thetas)} weights")
        return self


class AsymmetricLogisticParams(SpecModel):
    components: List[ComponentParams] = Field(min_length=1)


class BaseSpec(SpecModel):
    indices: List[int] = Field(min_length=1, max_length=settings.MAX_LATTICE_SIZE)
    flags: Flags = Flags()

    @field_validator("indices")
    @classmethod
    def unique_indices(cls, indices):
        if len(set(indices)) != len(indices):
            raise ValueError("index labels must be unique")
        return indices


class DiscreteSpec(BaseSpec):
    kind: Literal["discrete"]
    params: DiscreteParams


class MaxLinearSpec(BaseSpec):
    kind: Literal["max_linear"]
    params: MaxLinearParams


class LogisticSpec(BaseSpec):
    kind: Literal["logistic"]
    params: LogisticParams


class AsymmetricLogisticSpec(BaseSpec):
    kind: Literal["asymmetric_logistic"]
    params: AsymmetricLogisticParams


ModelSpec = Annotated[
    Union[DiscreteSpec, MaxLinearSpec, LogisticSpec, AsymmetricLogisticSpec],
    Field(discriminator="kind"),
]
SPEC_ADAPTER = TypeAdapter(ModelSpec)


@dataclass
class LoadedModel:
    """A validated model together with its source document"""
    model: ExponentModel
    spec: BaseSpec
    digest: str
    source: str


def document_digest(document: dict) -> str:
    canonical = json.dumps(document, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(canonical.encode()).hexdigest()[:16]


def _columns(spec: BaseSpec, rows: List[List[float]], what: str) -> List[List[float]]:
    """Re-order per-label rows from the document order of indices into ascending label order"""
    order = sorted(range(len(spec.indices)), key=lambda position: spec.indices[position])
    for number, row in enumerate(rows):
        if len(row) != len(spec.indices):
            raise ModelValidationError(f"{what} {number} has {len(row)} entries, expected {len(spec.indices)}")
    return [[row[position] for position in order] for row in rows]


def build_model(spec: BaseSpec) -> ExponentModel:
    """Construct and validate the model a parsed spec describes"""
    ground = IndexSet(frozenset(spec.indices))
    smooth = spec.flags.smooth_density
    if smooth and isinstance(spec, (DiscreteSpec, MaxLinearSpec)):
        raise ModelValidationError(f"{spec.kind} models have no density, smooth_density must be false")

    if isinstance(spec, DiscreteSpec):
        directions = _columns(spec, [atom.direction for atom in spec.params.atoms], "atom")
        measure = DiscreteSpectralMeasure(
            ground, [atom.weight for atom in spec.params.atoms], directions,
            norm_tag=spec.params.norm,
        )
        report = validate(measure, renormalize=spec.params.renormalize)
        if not report.passed:
            raise ModelValidationError(f"moment conditions fail, per-coordinate sums {report.failures()}")
        model = report.measure
    elif isinstance(spec, MaxLinearSpec):
        coefficients = _columns(spec, spec.params.coefficients, "coefficient row")
        model = max_linear(coefficients, ground, renormalize=spec.params.renormalize)
    elif isinstance(spec, LogisticSpec):
        model = LogisticModel(ground, spec.params.alpha, smooth_density=True if smooth is None else smooth)
    else:
        components = []
        for component in spec.params.components:
            if not set(component.subset) <= set(spec.indices):
                raise ModelValidationError(f"component {component.subset} uses labels outside {spec.indices}")
            components.append(LogisticComponent(
                IndexSet(frozenset(component.subset)), component.alpha, dict(zip(component.subset, component.thetas))
            ))
        model = AsymmetricLogisticModel(ground, components, smooth_density=smooth)

    probe = validate_model(model)
    if not probe.passed:
        raise ModelValidationError(
            f"model probe failed: margin error {probe.margin_error:.3g}, "
            f"homogeneity error {probe.homogeneity_error:.3g}, "
            f"{probe.monotonicity_violations} monotonicity violations"
        )
    return model


def parse_spec(text: str, source: str = "<string>") -> LoadedModel:
    try:
        document = json.loads(text)
    except json.JSONDecodeError as e:
        raise SpecFileError(f"{source}: invalid JSON at line {e.lineno}, column {e.colno}: {e.msg}")

    try:
        spec = SPEC_ADAPTER.validate_python(document)
    except ValidationError as e:
        problems = "; ".join(
            f"{'.'.join(str(part) for part in error['loc']) or 'document'}: {error['msg']}"
            for error in e.errors()
        )
        raise SpecFileError(f"{source}: schema error: {problems}")

    try:
        model = build_model(spec)
    except XStableError as e:
        raise SpecFileError(f"{source}: {e}") from e

    digest = document_digest(document)
    logger.info(f"Loaded {model.describe()} from {source} (digest {digest})")
    return LoadedModel(model, spec, digest, source)


def load_spec(path) -> LoadedModel:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as e:
        raise SpecFileError(f"cannot read model spec {path}: {e.strerror}")
    return parse_spec(text, str(path))
