"""
Dense lattice tables and the inversions between exponent functions V^A,
their Moebius inversion d_A and the coefficients chi_A at a fixed point x.

A table over a ground set of n labels is a float array of length 2**n
indexed by bitmask. Slot 0 stands for the empty set and always holds 0
(the V^{} = 0 convention); it is not one of the 2**n - 1 entries.
"""

from dataclasses import dataclass
from typing import Dict, Iterator, List, Mapping, Tuple

import numpy as np

import settings
from errors import DomainError, StructuralError
from logging_config import get_lattice_logger
from .subsets import IndexSet, popcounts, subset_masks

logger = get_lattice_logger()

KINDS = ("V", "d", "chi")


@dataclass(frozen=True, eq=False)
class LatticeTable:
    """Values of V, d or chi for every non-empty subset of ground"""
    ground: IndexSet
    values: np.ndarray
    kind: str

    def __post_init__(self):
        if self.kind not in KINDS:
            raise StructuralError(f"unknown table kind '{self.kind}', expected one of {KINDS}")
        check_lattice_size(len(self.ground))
        values = np.asarray(self.values, dtype=float).copy()
        if values.shape != (1 << len(self.ground),):
            raise StructuralError(
                f"{self.kind}-table needs {(1 << len(self.ground)) - 1} entries, got {values.size - 1}"
            )
        if not np.all(np.isfinite(values[1:])):
            raise StructuralError(f"{self.kind}-table has non-finite entries")
        values[0] = 0.0
        values.setflags(write=False)
        object.__setattr__(self, "values", values)

    @classmethod
    def from_mapping(cls, ground: IndexSet, mapping: Mapping[IndexSet, float], kind: str) -> "LatticeTable":
        values = np.zeros(1 << len(ground))
        missing = []
        for mask in subset_masks(len(ground)):
            subset = IndexSet.from_mask(mask, ground)
            if subset not in mapping:
                missing.append(str(subset))
                continue
            values[mask] = mapping[subset]
        if missing:
            raise StructuralError(f"{kind}-table is missing entries for {', '.join(missing[:5])}")
        return cls(ground, values, kind)

    def __len__(self) -> int:
        return self.values.size - 1

    def __getitem__(self, subset: IndexSet) -> float:
        if subset.is_empty():
            raise DomainError("lattice tables have no entry for the empty set")
        return float(self.values[subset.mask(self.ground)])

    def items(self) -> Iterator[Tuple[IndexSet, float]]:
        """(subset, value) pairs in enumeration order"""
        for mask in subset_masks(len(self.ground)):
            yield IndexSet.from_mask(mask, self.ground), float(self.values[mask])

    def as_dict(self) -> Dict[IndexSet, float]:
        return dict(self.items())

    def scale(self) -> float:
        return float(np.max(np.abs(self.values))) if self.values.size > 1 else 0.0

    def zero_entries(self) -> np.ndarray:
        """Boolean mask of entries that count as zero under the table-relative tolerance"""
        return np.abs(self.values) <= settings.ZERO_TOLERANCE * (1.0 + self.scale())

    def negative_entries(self) -> List[IndexSet]:
        """Entries below zero beyond the tolerance; genuine d- and chi-tables have none"""
        tolerance = settings.ZERO_TOLERANCE * (1.0 + self.scale())
        masks = np.flatnonzero(self.values < -tolerance)
        return [IndexSet.from_mask(int(mask), self.ground) for mask in masks]


def check_lattice_size(size: int) -> None:
    if size < 1:
        raise DomainError("empty ground set")
    if size > settings.MAX_LATTICE_SIZE:
        raise DomainError(f"lattice operations limited to {settings.MAX_LATTICE_SIZE} indices, got {size}")


def _require(table: LatticeTable, kind: str) -> None:
    if table.kind != kind:
        raise StructuralError(f"expected a {kind}-table, got a {table.kind}-table")


def _cube(values: np.ndarray) -> np.ndarray:
    size = values.size.bit_length() - 1
    return values.reshape((2,) * size)


def subset_sum(values: np.ndarray) -> np.ndarray:
    """out[A] = sum of values[B] over B subset of A"""
    cube = _cube(values.astype(float))
    for axis in range(cube.ndim):
        cube = np.cumsum(cube, axis=axis)
    return cube.reshape(-1)


def subset_difference(values: np.ndarray) -> np.ndarray:
    """Inverse of subset_sum"""
    cube = _cube(values.astype(float))
    for axis in range(cube.ndim):
        cube = np.diff(cube, axis=axis, prepend=0.0)
    return cube.reshape(-1)


def superset_sum(values: np.ndarray) -> np.ndarray:
    """out[A] = sum of values[B] over B superset of A"""
    return subset_sum(values[::-1])[::-1]


def superset_difference(values: np.ndarray) -> np.ndarray:
    """Inverse of superset_sum"""
    return subset_difference(values[::-1])[::-1]


def _alternating(values: np.ndarray, ground_size: int) -> np.ndarray:
    """values[B] * (-1)^(|B|+1)"""
    signs = np.where(popcounts(ground_size) % 2 == 1, 1.0, -1.0)
    return values * signs


def d_from_v(v_table: LatticeTable) -> LatticeTable:
    """
    d_A(x) = sum over B containing A^c of (-1)^{|B & A| + 1} V^B(x_B).

    Uses the equivalent form: subset sums of d over S equal V^I - V^{I minus S}.
    """
    _require(v_table, "V")
    values = v_table.values
    # values[::-1][S] is V at the complement of S
    complement_gaps = values[-1] - values[::-1]
    return LatticeTable(v_table.ground, subset_difference(complement_gaps), "d")


def v_from_d(d_table: LatticeTable) -> LatticeTable:
    """V^A(x_A) = sum of d_B(x) over B meeting A"""
    _require(d_table, "d")
    sums = subset_sum(d_table.values)
    return LatticeTable(d_table.ground, sums[-1] - sums[::-1], "V")


def chi_from_d(d_table: LatticeTable) -> LatticeTable:
    """chi_A = sum of d_B over B containing A"""
    _require(d_table, "d")
    return LatticeTable(d_table.ground, superset_sum(d_table.values), "chi")


def d_from_chi(chi_table: LatticeTable) -> LatticeTable:
    """d_A = sum over B containing A of (-1)^{|B minus A|} chi_B"""
    _require(chi_table, "chi")
    return LatticeTable(chi_table.ground, superset_difference(chi_table.values), "d")


def chi_from_v(v_table: LatticeTable) -> LatticeTable:
    """chi_A = sum over non-empty B inside A of (-1)^{|B|+1} V^B"""
    _require(v_table, "V")
    size = len(v_table.ground)
    return LatticeTable(v_table.ground, subset_sum(_alternating(v_table.values, size)), "chi")


def v_from_chi(chi_table: LatticeTable) -> LatticeTable:
    """V^A = sum over non-empty B inside A of (-1)^{|B|+1} chi_B"""
    _require(chi_table, "chi")
    size = len(chi_table.ground)
    return LatticeTable(chi_table.ground, subset_sum(_alternating(chi_table.values, size)), "V")


def round_trip_residuals(v_table: LatticeTable) -> Dict[str, float]:
    """Largest entrywise error of V->d->V, d->chi->d and V->chi->V->chi"""
    d_table = d_from_v(v_table)
    chi_table = chi_from_v(v_table)
    residuals = {
        "V": float(np.max(np.abs(v_from_d(d_table).values - v_table.values))),
        "d": float(np.max(np.abs(d_from_chi(chi_from_d(d_table)).values - d_table.values))),
        "chi": float(np.max(np.abs(chi_from_v(v_from_chi(chi_table)).values - chi_table.values))),
    }
    logger.debug(f"Round-trip residuals over {len(v_table)} entries: {residuals}")
    return residuals
