"""
Verification suites run by `xstable verify`
"""

import math
import time
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional

import numpy as np

from density import density, density_integral, growth_probe, mixed_difference, mixed_partial_v
from density.derivatives import FINITE_DIFFERENCE
from diagnostics import (
    all_pairs_diagnostics,
    chi_pair,
    d_pair,
    d_pair_from_lattice,
    default_grid,
    multiway_verdict,
    tensor_grid,
)
from errors import NonSmoothModelError
from lattice import EvaluationPoint, IndexSet, chi_from_v, d_from_v, enumerate_subsets, round_trip_residuals
from lattice.subsets import disjoint_pairs
from logging_config import get_cli_logger
from models import DiscreteSpectralMeasure, ExponentModel, LogisticModel
from models.fixtures import block_product_measure, example2_pair, example2_triple, random_discrete_measure
from simulation import (
    AtomResampler,
    DirichletSampler,
    ecdf_check,
    empirical_chi,
    mc_lemma_integrals,
    simulate_max_linear,
)

logger = get_cli_logger()

THEOREM_ALPHAS = [0.3, 0.5, 0.7, 0.9]
DENSITY_ALPHAS = [0.5, 0.8]
SIMULATION_DRAWS = 200_000


@dataclass
class Criterion:
    """One named check with its measured value"""
    name: str
    measured: float
    threshold: float
    passed: bool
    detail: str = ""


@dataclass
class SuiteResult:
    name: str
    criteria: List[Criterion] = field(default_factory=list)
    skipped: Optional[str] = None
    elapsed: float = 0.0
    tables: Dict[str, list] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return self.skipped is not None or all(criterion.passed for criterion in self.criteria)

    def at_most(self, name: str, measured: float, threshold: float, detail: str = "") -> None:
        self.criteria.append(Criterion(name, float(measured), threshold, bool(measured <= threshold), detail))

    def at_least(self, name: str, measured: float, threshold: float, detail: str = "") -> None:
        self.criteria.append(Criterion(name, float(measured), threshold, bool(measured >= threshold), detail))

    def check(self, name: str, ok: bool, detail: str = "") -> None:
        self.criteria.append(Criterion(name, 1.0 if ok else 0.0, 1.0, bool(ok), detail))


@dataclass
class SuiteContext:
    seed: int
    threads: int = 1
    model: Optional[ExponentModel] = None


def _fixture_models(seed: int, count: int = 50) -> List[DiscreteSpectralMeasure]:
    rng = np.random.default_rng(seed)
    models = []
    for number in range(count):
        size = int(rng.integers(3, 7))
        atoms = int(rng.integers(2, 9))
        models.append(random_discrete_measure(IndexSet.of(*range(1, size + 1)), atoms, seed + number))
    return models


def _random_points(ground: IndexSet, count: int, rng: np.random.Generator) -> List[EvaluationPoint]:
    return [EvaluationPoint(ground, rng.uniform(0.5, 2.0, size=len(ground))) for _ in range(count)]


def suite_mobius(context: SuiteContext) -> SuiteResult:
    result = SuiteResult("mobius")
    rng = np.random.default_rng(context.seed)
    models = _fixture_models(context.seed)
    if context.model is not None:
        models.append(context.model)
    worst = 0.0
    for model in models:
        for point in _random_points(model.ground, 20, rng):
            residuals = round_trip_residuals(model.exponent_table(point))
            worst = max(worst, max(residuals.values()))
    result.at_most("round_trip_residual", worst, 1e-10, f"{len(models)} models x 20 points")
    return result


def suite_lemmas(context: SuiteContext) -> SuiteResult:
    result = SuiteResult("lemmas")
    rng = np.random.default_rng(context.seed + 1)
    models = _fixture_models(context.seed)
    if isinstance(context.model, DiscreteSpectralMeasure):
        models.append(context.model)
    table_gap, pair_gap, lattice_gap = 0.0, 0.0, 0.0
    for model in models:
        pairs = disjoint_pairs(model.ground)
        for point in _random_points(model.ground, 20, rng):
            v_table = model.exponent_table(point)
            d_table, chi_table = model.spectral_tables(point)
            table_gap = max(
                table_gap,
                float(np.max(np.abs(d_from_v(v_table).values - d_table.values))),
                float(np.max(np.abs(chi_from_v(v_table).values - chi_table.values))),
            )
            for first, second in pairs:
                exact_d, exact_chi = model.spectral_pair(first, second, point)
                via_v_d, via_v_chi = d_pair(model, first, second, point), chi_pair(model, first, second, point)
                pair_gap = max(pair_gap, abs(exact_d - via_v_d), abs(exact_chi - via_v_chi))
                lattice_gap = max(lattice_gap, abs(d_pair_from_lattice(d_table, first, second) - exact_d))
    result.at_most("atom_sum_tables_vs_inversion", table_gap, 1e-12)
    result.at_most("atom_sum_pairs_vs_exponents", pair_gap, 1e-12)
    result.at_most("lattice_pair_sum_vs_atom_sum", lattice_gap, 1e-10)
    return result


def suite_example2(context: SuiteContext) -> SuiteResult:
    result = SuiteResult("example2")
    triple = example2_triple()
    one, five = IndexSet.of(1), IndexSet.of(5)
    at_ones = EvaluationPoint.from_mapping({1: 1.0, 4: 1.0, 5: 1.0})
    shifted = EvaluationPoint.from_mapping({1: 0.5, 4: 2.0, 5: 1.0})

    result.at_most("d_1_5_at_ones", abs(d_pair(triple, one, five, at_ones)), 1e-12)
    result.at_most("d_1_5_at_shifted", abs(d_pair(triple, one, five, shifted) - 1 / 12), 1e-12)
    result.at_most("chi_1_5_at_shifted", abs(chi_pair(triple, one, five, shifted) - 1 / 3), 1e-12)
    d_table, _ = triple.spectral_tables(at_ones)
    result.at_most("d_1_at_ones", abs(d_table[one] - 0.5), 1e-12)

    pair = example2_pair()
    result.at_most("pair_V_at_ones", abs(pair.exponent(pair.ground, EvaluationPoint.constant(pair.ground)) - 5 / 3), 1e-12)
    # CI of X1 and X5 given X4 holds here although d_{1,5} > 0: no density, so the necessary condition fails
    result.check("density_flag_false", not triple.smooth_density, "d-characterization inapplicable without a density")
    return result


def suite_theorem(context: SuiteContext) -> SuiteResult:
    result = SuiteResult("theorem")
    rates = []
    smallest_chi, smallest_d, consistent = math.inf, math.inf, True
    for size in (3, 4):
        ground = IndexSet.of(*range(1, size + 1))
        grid = default_grid(ground)
        for alpha in THEOREM_ALPHAS:
            diagnostics = all_pairs_diagnostics(LogisticModel(ground, alpha), grid, threads=context.threads)
            for diagnostic in diagnostics:
                smallest_chi = min(smallest_chi, diagnostic.sup_chi)
                smallest_d = min(smallest_d, diagnostic.sup_d)
                consistent &= not diagnostic.independent and not diagnostic.ci_possible
            rates.append([size, alpha, min(diagnostic.sup_d for diagnostic in diagnostics)])
        independent = all_pairs_diagnostics(LogisticModel(ground, 1.0), grid, threads=context.threads)
        result.at_most(f"alpha_1_sups_size_{size}",
                       max(max(item.sup_d, item.sup_chi) for item in independent), 1e-10)

    result.at_least("min_sup_chi", smallest_chi, 0.01)
    result.at_least("min_sup_d", smallest_d, 1e-4)
    result.check("ci_ruled_out_whenever_dependent", consistent)
    result.tables["rates"] = rates

    if context.model is not None and context.model.smooth_density:
        diagnostics = all_pairs_diagnostics(context.model, default_grid(context.model.ground), threads=context.threads)
        result.check("model_ci_iff_independent",
                     all(item.ci_possible == item.independent for item in diagnostics))
    return result


def suite_growth(context: SuiteContext) -> SuiteResult:
    result = SuiteResult("growth")
    ground = IndexSet.of(1, 2, 3)
    model = LogisticModel(ground, 0.5)
    report = growth_probe(model, IndexSet.of(1), IndexSet.of(2), EvaluationPoint.constant(ground),
                          threads=context.threads)
    result.at_most("rate_vs_d_pair", abs(report.rate - report.d_value) / report.d_value, 1e-3)
    result.at_least("rate_fit_r2", report.rate_r2, 0.999)
    result.at_most("ratio_loglog_slope", abs(report.poly_slope), len(ground) + 2)
    result.check("ci_impossible", report.ci_impossible)
    result.tables["probe"] = [list(row) for row in report.rows()]
    return result


def _gap(value: float, reference: float) -> float:
    """Relative gap, absolute once the reference drops below 1"""
    return abs(value - reference) / max(abs(reference), 1.0)


def _density_checks(result: SuiteResult, model: ExponentModel, tag: str) -> None:
    ground = model.ground
    values = [0.5, 1.0, 2.0]
    grid = tensor_grid(ground, values)
    worst_density, worst_fd, worst_homogeneity = 0.0, 0.0, 0.0
    subsets = enumerate_subsets(ground)
    for point in grid.points():
        exact = density(model, ground, point)
        positions = list(range(len(ground)))
        numeric = mixed_difference(lambda coords: math.exp(-model.exponent_mask(model.full_mask, coords)),
                                   point.coords, positions)
        worst_density = max(worst_density, abs(numeric - exact) / exact)
        for wrt in subsets:
            reference = mixed_partial_v(model, ground, wrt, point)
            moved = mixed_partial_v(model, ground, wrt, point.scaled(3.0)) * 3.0 ** (len(wrt) + 1)
            worst_homogeneity = max(worst_homogeneity, _gap(moved, reference))
            if len(wrt) <= 2:
                numeric_partial = mixed_partial_v(model, ground, wrt, point, FINITE_DIFFERENCE)
                worst_fd = max(worst_fd, _gap(numeric_partial, reference))
    result.at_most(f"{tag}_density_vs_fd", worst_density, 1e-4)
    result.at_most(f"{tag}_partial_fd_vs_exact", worst_fd, 1e-6)
    result.at_most(f"{tag}_partial_homogeneity", worst_homogeneity, 1e-5)


def suite_density(context: SuiteContext) -> SuiteResult:
    result = SuiteResult("density")
    if context.model is not None:
        if not context.model.smooth_density:
            result.skipped = str(NonSmoothModelError(context.model.kind))
            logger.warning(f"density suite skipped: {result.skipped}")
            return result
        _density_checks(result, context.model, "model")
        return result

    for alpha in DENSITY_ALPHAS:
        for size in (2, 3):
            _density_checks(result, LogisticModel(IndexSet.of(*range(1, size + 1)), alpha), f"alpha_{alpha}_size_{size}")
        total = density_integral(LogisticModel(IndexSet.of(1, 2), alpha))
        result.at_most(f"alpha_{alpha}_bivariate_integral", abs(total - 1.0), 1e-3)
    return result


def suite_pairwise(context: SuiteContext) -> SuiteResult:
    result = SuiteResult("pairwise")
    blocks = [IndexSet.of(1, 2), IndexSet.of(3, 4), IndexSet.of(5, 6)]
    measure = block_product_measure(blocks, atoms_per_block=3, seed=context.seed)
    grid = tensor_grid(measure.ground, [0.25, 0.5, 1.0, 2.0, 4.0], cap=100)
    report = multiway_verdict(measure, blocks, grid, tol=1e-12)
    result.at_most("cross_block_chi", max(report.pair_chi.values()), 1e-12)
    result.check("pairwise_independent", report.pairwise_independent)
    residual = report.factorization_residual if report.factorization_residual is not None else math.inf
    result.at_most("factorization_residual", residual, 1e-12, f"{len(grid)} grid points")
    return result


def suite_simulate(context: SuiteContext) -> SuiteResult:
    result = SuiteResult("simulate")
    models = [example2_pair()]
    if isinstance(context.model, DiscreteSpectralMeasure):
        models.append(context.model)

    batches = []
    for number, measure in enumerate(models):
        batch = simulate_max_linear(measure, SIMULATION_DRAWS, context.seed, threads=context.threads)
        batches.append(batch)
        check = ecdf_check(measure, batch)
        result.at_most(f"model_{number}_ecdf_misses", check.misses, check.allowed_misses,
                       f"{len(check.probes)} probes")

    pair = models[0]
    estimate = empirical_chi(batches[0], IndexSet.of(1), IndexSet.of(5), EvaluationPoint.constant(pair.ground))
    result.at_most("empirical_chi_z", abs(estimate.value - 1 / 3) / estimate.se, 3.0,
                   f"chi_hat={estimate.value:.6f} se={estimate.se:.2e}")

    triple = example2_triple()
    point = EvaluationPoint.from_mapping({1: 0.5, 4: 2.0, 5: 1.0})
    one, five = IndexSet.of(1), IndexSet.of(5)
    estimates = mc_lemma_integrals(AtomResampler(triple), one, point, SIMULATION_DRAWS, context.seed, five)
    d_table, chi_table = triple.spectral_tables(point)
    exact_d, exact_chi = triple.spectral_pair(one, five, point)
    targets = {"d_A": d_table[one], "chi_A": chi_table[one], "d_AB": exact_d, "chi_AB": exact_chi}
    result.check("atom_resampler_within_3se",
                 all(estimates[name].within(target, 3.0) or abs(estimates[name].value - target) <= 1e-12
                     for name, target in targets.items()))

    sampler = DirichletSampler.symmetric(IndexSet.of(1, 2, 3), 2.0)
    sampler.validate(context.seed)
    result.check("dirichlet_moments_within_3se", sampler.validated)
    return result


SUITES: Dict[str, Callable[[SuiteContext], SuiteResult]] = {
    "mobius": suite_mobius,
    "lemmas": suite_lemmas,
    "example2": suite_example2,
    "theorem": suite_theorem,
    "growth": suite_growth,
    "density": suite_density,
    "pairwise": suite_pairwise,
    "simulate": suite_simulate,
}
SUITE_NAMES = list(SUITES) + ["all"]


def run_suites(name: str, context: SuiteContext) -> List[SuiteResult]:
    names = list(SUITES) if name == "all" else [name]
    results = []
    for suite_name in names:
        started = time.perf_counter()
        suite = SUITES[suite_name](context)
        suite.elapsed = time.perf_counter() - started
        status = "skipped" if suite.skipped else ("pass" if suite.passed else "FAIL")
        logger.info(f"Suite {suite_name}: {status} in {suite.elapsed:.2f}s")
        for criterion in suite.criteria:
            if not criterion.passed:
                logger.warning(f"  {criterion.name}: measured {criterion.measured:.6g}, threshold {criterion.threshold:g}")
        results.append(suite)
    return results
