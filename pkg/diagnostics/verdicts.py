"""
Independence and conditional-independence verdicts over evaluation grids
"""

from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from errors import StructuralError
from lattice.subsets import IndexSet, disjoint_pairs, require_disjoint, union_all
from logging_config import get_diagnostics_logger
from models.base import ExponentModel
from models.spectral import DiscreteSpectralMeasure
from workers import run_parallel
from .grids import Grid
from .pairs import PairMasks, d_pair, pair_values

logger = get_diagnostics_logger()

RULE_THEOREM = "theorem"
RULE_INAPPLICABLE = "inapplicable"


def default_tolerance(ground: IndexSet) -> float:
    return 1e-9 * (1 + len(ground))


@dataclass
class PairDiagnostic:
    """Grid sups of d_{A,B} and chi_{A,B} with the verdicts they support"""
    first: IndexSet
    second: IndexSet
    rest: IndexSet
    grid_size: int
    sup_d: float
    sup_chi: float
    independent: bool
    ci_possible: bool
    ci_rule: str
    certificate: str
    tol: float
    notes: List[str] = field(default_factory=list)

    @property
    def ci_rule_applicable(self) -> bool:
        return self.ci_rule != RULE_INAPPLICABLE

    def summary(self) -> str:
        verdict = "independent" if self.independent else "dependent"
        ci = "CI possible" if self.ci_possible else "CI ruled out"
        return (f"{self.first} vs {self.second} given {self.rest}: {verdict}, {ci} "
                f"(sup_d={self.sup_d:.6g}, sup_chi={self.sup_chi:.6g}, rule {self.ci_rule})")


def _exponent_rows(model: ExponentModel, grid: Grid, masks: List[int], use_tables: bool) -> np.ndarray:
    """V^S at every grid point for the listed masks, one column per mask"""
    rows = np.zeros((len(grid), len(masks)))
    for row, point in enumerate(grid.points()):
        if use_tables:
            rows[row] = model.exponent_table(point).values[masks]
        else:
            rows[row] = [model.exponent_mask(mask, point.coords) if mask else 0.0 for mask in masks]
    return rows


def _sweep(model: ExponentModel, grid: Grid, pairs: Sequence[PairMasks], threads: int) -> np.ndarray:
    """Max over the grid of (d, chi) per pair, shape (len(pairs), 2)"""
    needed = sorted({0} | {mask for masks in pairs for mask in masks.chi_terms() + masks.d_terms()})
    columns = {mask: column for column, mask in enumerate(needed)}
    use_tables = len(needed) * 2 > (1 << model.size)

    def sweep_chunk(chunk: Grid) -> np.ndarray:
        rows = _exponent_rows(model, chunk, needed, use_tables)
        sups = np.zeros((len(pairs), 2))
        for position, masks in enumerate(pairs):
            d_values, chi_values = pair_values(rows, masks, columns)
            sups[position] = d_values.max(), chi_values.max()
        return sups

    chunks = grid.chunks(max(1, threads) * 4)
    # max-reduction keeps the result independent of the chunking
    return np.max(np.stack(run_parallel(sweep_chunk, chunks, threads)), axis=0)


def _verdict(model: ExponentModel, first: IndexSet, second: IndexSet, grid: Grid,
             sup_d: float, sup_chi: float, tol: float) -> PairDiagnostic:
    rest = model.ground - first - second
    notes = []
    independent = sup_chi <= tol
    certificate = "grid"

    if isinstance(model, DiscreteSpectralMeasure):
        # no atom charging both sides is equivalent to chi_{A,B} vanishing everywhere
        exact = not model.shares_atom(first, second)
        if exact != independent:
            notes.append(f"grid sup_chi={sup_chi:.3g} disagrees with the atom-support certificate")
            logger.warning(f"{first} vs {second}: {notes[-1]}")
        independent = exact
        certificate = "exact"
    elif independent:
        notes.append("independent on tested grid")

    if model.smooth_density:
        ci_rule = RULE_THEOREM
        ci_possible = independent and sup_d <= tol
    else:
        ci_rule = RULE_INAPPLICABLE
        ci_possible = True
        if sup_d > tol:
            notes.append("d_{A,B} > 0 does not rule out CI without a positive continuous density")
    if not ci_possible and sup_d <= tol:
        notes.append("sup_d within tolerance, CI excluded by dependence")

    diagnostic = PairDiagnostic(
        first, second, rest, len(grid), float(sup_d), float(sup_chi), bool(independent),
        bool(ci_possible), ci_rule, certificate, tol, notes,
    )
    logger.debug(diagnostic.summary())
    return diagnostic


def pair_diagnostic(model: ExponentModel, first: IndexSet, second: IndexSet, grid: Grid,
                    tol: float = None, threads: int = None) -> PairDiagnostic:
    """Sweep d_{A,B} and chi_{A,B} over the grid and derive both verdicts"""
    tol = default_tolerance(model.ground) if tol is None else tol
    if grid.ground != model.ground:
        raise StructuralError(f"grid lives on {grid.ground}, model on {model.ground}")
    masks = PairMasks.build(model.ground, first, second)
    (sup_d, sup_chi), = _sweep(model, grid, [masks], threads or 1)
    return _verdict(model, first, second, grid, sup_d, sup_chi, tol)


def independence_verdict(model: ExponentModel, first: IndexSet, second: IndexSet, grid: Grid,
                         tol: float = None, threads: int = None) -> PairDiagnostic:
    """X_A and X_B independent iff chi_{A,B} vanishes; decided by the grid sup of chi"""
    return pair_diagnostic(model, first, second, grid, tol, threads)


def ci_necessary_verdict(model: ExponentModel, first: IndexSet, second: IndexSet, grid: Grid,
                         tol: float = None, threads: int = None) -> PairDiagnostic:
    """
    CI of X_A and X_B given X_C forces d_{A,B} = 0 when the law has a positive
    continuous density, and then also independence. The verdict never claims
    CI holds; without a density it only records that the rule does not apply.
    """
    return pair_diagnostic(model, first, second, grid, tol, threads)


def all_pairs_diagnostics(model: ExponentModel, grid: Grid, tol: float = None,
                          threads: int = None) -> List[PairDiagnostic]:
    """Diagnostics for every unordered disjoint pair, one V-table per grid point"""
    tol = default_tolerance(model.ground) if tol is None else tol
    pairs = disjoint_pairs(model.ground)
    masks = [PairMasks.build(model.ground, first, second) for first, second in pairs]
    sups = _sweep(model, grid, masks, threads or 1)
    logger.info(f"Swept {len(pairs)} pairs over {len(grid)} grid points")
    return [
        _verdict(model, first, second, grid, sup_d, sup_chi, tol)
        for (first, second), (sup_d, sup_chi) in zip(pairs, sups)
    ]


@dataclass
class MultiwayReport:
    """Pairwise chi sups, marginal d sups and the joint factorization residual of several blocks"""
    blocks: List[IndexSet]
    rest: IndexSet
    pair_chi: Dict[Tuple[int, int], float]
    pair_d: Dict[Tuple[int, int], float]
    pairwise_independent: bool
    factorization_residual: Optional[float]
    tol: float
    notes: List[str] = field(default_factory=list)

    @property
    def jointly_independent(self) -> bool:
        return self.pairwise_independent and self.factorization_residual is not None \
            and self.factorization_residual <= self.tol


def multiway_verdict(model: ExponentModel, blocks: Sequence[IndexSet], grid: Grid,
                     tol: float = None) -> MultiwayReport:
    """
    Pairwise independence of the blocks A_1..A_k, and when it holds the joint
    factorization V^{u A_i} = sum_i V^{A_i} on the grid. For each block pair
    the report also carries the grid sup of d over the marginal on
    A_i u A_j u R, with R the labels outside every block.
    """
    tol = default_tolerance(model.ground) if tol is None else tol
    blocks = list(blocks)
    for position, first in enumerate(blocks):
        for second in blocks[position + 1:]:
            require_disjoint(first, second)
    covered = union_all(blocks)
    if not covered <= model.ground:
        raise StructuralError(f"blocks {covered} leave the ground set {model.ground}")
    rest = model.ground - covered

    pair_chi, pair_d = {}, {}
    for i, first in enumerate(blocks):
        for j in range(i + 1, len(blocks)):
            second = blocks[j]
            pair_chi[(i, j)] = pair_diagnostic(model, first, second, grid, tol).sup_chi
            marginal_set = first | second | rest
            marginal = model.restrict(marginal_set)
            marginal_grid = grid.restrict(marginal_set)
            pair_d[(i, j)] = max(d_pair(marginal, first, second, point) for point in marginal_grid.points())

    report = MultiwayReport(blocks, rest, pair_chi, pair_d, all(v <= tol for v in pair_chi.values()), None, tol)
    if not report.pairwise_independent:
        report.notes.append("pairwise dependence detected, factorization skipped")
        return report

    block_masks = [block.mask(model.ground) for block in blocks]
    covered_mask = covered.mask(model.ground)
    residual = 0.0
    for point in grid.points():
        joint = model.exponent_mask(covered_mask, point.coords)
        parts = sum(model.exponent_mask(mask, point.coords) for mask in block_masks)
        residual = max(residual, abs(joint - parts))
    report.factorization_residual = residual
    logger.info(f"Joint factorization residual over {len(grid)} points: {residual:.3g}")
    return report
