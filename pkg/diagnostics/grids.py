"""
Evaluation grids for diagnostic sweeps
"""

from dataclasses import dataclass
from typing import Iterator, List, Sequence

import numpy as np

import settings
from errors import DomainError, StructuralError
from lattice.subsets import EvaluationPoint, IndexSet, parse_point
from logging_config import get_diagnostics_logger

logger = get_diagnostics_logger()


@dataclass(frozen=True, eq=False)
class Grid:
    """Finite set of evaluation points, one row of coords per point"""
    ground: IndexSet
    coords: np.ndarray

    def __post_init__(self):
        coords = np.atleast_2d(np.asarray(self.coords, dtype=float)).copy()
        if coords.shape[0] == 0:
            raise DomainError("evaluation grid is empty")
        if coords.shape[1] != len(self.ground):
            raise StructuralError(f"grid rows have {coords.shape[1]} coordinates, ground set {self.ground} needs {len(self.ground)}")
        if not np.all(np.isfinite(coords)) or np.any(coords <= 0):
            raise DomainError("grid coordinates must be strictly positive and finite")
        coords.setflags(write=False)
        object.__setattr__(self, "coords", coords)

    @classmethod
    def from_points(cls, points: Sequence[EvaluationPoint]) -> "Grid":
        if not points:
            raise DomainError("evaluation grid is empty")
        ground = points[0].ground
        if any(point.ground != ground for point in points):
            raise StructuralError("grid points live on different ground sets")
        return cls(ground, np.vstack([point.coords for point in points]))

    def __len__(self) -> int:
        return self.coords.shape[0]

    def points(self) -> Iterator[EvaluationPoint]:
        for row in self.coords:
            yield EvaluationPoint(self.ground, row)

    def chunks(self, count: int) -> List["Grid"]:
        """Split into at most count contiguous pieces"""
        pieces = np.array_split(np.arange(len(self)), max(1, min(count, len(self))))
        return [Grid(self.ground, self.coords[piece]) for piece in pieces if piece.size]

    def restrict(self, subset: IndexSet) -> "Grid":
        labels = self.ground.labels
        columns = [labels.index(label) for label in subset.labels]
        return Grid(subset, self.coords[:, columns])

    def scaled(self, factor: float) -> "Grid":
        return Grid(self.ground, self.coords * factor)


def tensor_grid(ground: IndexSet, values: Sequence[float] = None, cap: int = None) -> Grid:
    """
    The tensor grid values^|ground| in lexicographic order. Grids above cap
    keep cap points at evenly spaced flat indices of that enumeration.
    """
    values = np.asarray(values if values is not None else settings.GRID_VALUES, dtype=float)
    cap = cap or settings.GRID_MAX_POINTS
    size = len(ground)
    shape = (values.size,) * size
    total = values.size ** size

    if total <= cap:
        flat = np.arange(total)
    else:
        flat = np.unique(np.linspace(0, total - 1, cap).round().astype(np.int64))
        logger.info(f"Tensor grid of {total} points subsampled to {flat.size}")
    indices = np.unravel_index(flat, shape)
    return Grid(ground, np.column_stack([values[index] for index in indices]))


def default_grid(ground: IndexSet) -> Grid:
    return tensor_grid(ground, settings.GRID_VALUES, settings.GRID_MAX_POINTS)


def parse_grid(text: str, ground: IndexSet) -> Grid:
    """
    Grid specifications:
        default
        tensor:v1,v2,...          tensor grid over the listed values
        points:x1,..,xd;x1,..,xd  explicit points in ascending label order
    """
    text = (text or "default").strip()
    if text == "default":
        return default_grid(ground)
    kind, _, body = text.partition(":")
    if kind == "tensor":
        try:
            values = [float(token) for token in body.split(",") if token.strip()]
        except ValueError:
            raise DomainError(f"invalid tensor grid '{text}'")
        if not values:
            raise DomainError("tensor grid needs at least one value")
        return tensor_grid(ground, values)
    if kind == "points":
        points = [parse_point(chunk, ground) for chunk in body.split(";") if chunk.strip()]
        return Grid.from_points(points)
    raise DomainError(f"unknown grid specification '{text}', expected default, tensor:... or points:...")
