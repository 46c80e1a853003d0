import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from diagnostics import (
    Grid,
    all_pairs_diagnostics,
    chi_pair,
    ci_necessary_verdict,
    d_pair,
    d_pair_from_lattice,
    default_grid,
    default_tolerance,
    independence_verdict,
    multiway_verdict,
    pair_diagnostic,
    parse_grid,
    tensor_grid,
)
from diagnostics.pairs import clamp_nonnegative
from diagnostics.verdicts import RULE_INAPPLICABLE, RULE_THEOREM
from errors import DomainError, ModelInconsistencyError, StructuralError
from lattice import EvaluationPoint, IndexSet
from lattice.subsets import disjoint_pairs
from models import LogisticModel, independence_measure
from models.fixtures import block_logistic_model, block_product_measure, random_discrete_measure

ONE, FIVE = IndexSet.of(1), IndexSet.of(5)


class TestGrids:

    def test_default_grid_is_lexicographic(self):
        grid = default_grid(IndexSet.of(1, 2))
        assert len(grid) == 25
        assert grid.coords[0].tolist() == [0.25, 0.25]
        assert grid.coords[1].tolist() == [0.25, 0.5]
        assert grid.coords[-1].tolist() == [4.0, 4.0]

    def test_cap_subsamples(self):
        grid = tensor_grid(IndexSet.of(1, 2, 3), [0.5, 1.0, 2.0, 4.0, 8.0], cap=10)
        assert len(grid) == 10
        assert grid.coords[0].tolist() == [0.5, 0.5, 0.5]
        assert grid.coords[-1].tolist() == [8.0, 8.0, 8.0]

    def test_parse_grid(self):
        ground = IndexSet.of(1, 4, 5)
        assert len(parse_grid("default", ground)) == 125
        assert len(parse_grid("tensor:1,2", ground)) == 8
        points = parse_grid("points:1,0.5,2;3,3,3", ground)
        assert points.coords.tolist() == [[1.0, 0.5, 2.0], [3.0, 3.0, 3.0]]

    @pytest.mark.parametrize("text", ["tensor:", "tensor:a,b", "sobol:10", "points:1,-1,1"])
    def test_parse_grid_errors(self, text):
        with pytest.raises(DomainError):
            parse_grid(text, IndexSet.of(1, 4, 5))

    def test_grid_validation(self):
        with pytest.raises(DomainError):
            Grid(IndexSet.of(1, 2), [[1.0, 0.0]])
        with pytest.raises(StructuralError):
            Grid(IndexSet.of(1, 2), [[1.0, 1.0, 1.0]])

    def test_chunks_and_restrict(self):
        grid = default_grid(IndexSet.of(1, 2, 3))
        chunks = grid.chunks(7)
        assert sum(len(chunk) for chunk in chunks) == len(grid)
        assert np.array_equal(np.vstack([chunk.coords for chunk in chunks]), grid.coords)
        assert grid.restrict(IndexSet.of(1, 3)).coords.shape == (125, 2)


class TestPairs:

    def test_example2_values(self, triple, ones, shifted):
        assert d_pair(triple, ONE, FIVE, ones) == pytest.approx(0.0, abs=1e-12)
        assert d_pair(triple, ONE, FIVE, shifted) == pytest.approx(1 / 12, abs=1e-12)
        assert chi_pair(triple, ONE, FIVE, shifted) == pytest.approx(1 / 3, abs=1e-12)

    def test_independence_has_zero_chi(self):
        ground = IndexSet.of(1, 2, 3)
        measure = independence_measure(ground)
        point = EvaluationPoint(ground, [0.3, 1.0, 7.0])
        assert chi_pair(measure, IndexSet.of(1), IndexSet.of(2, 3), point) == pytest.approx(0.0, abs=1e-14)
        assert d_pair(measure, IndexSet.of(1), IndexSet.of(2), point) == pytest.approx(0.0, abs=1e-14)

    def test_empty_rest(self, pair):
        point = EvaluationPoint(pair.ground, [1.0, 1.0])
        # with C empty d_{A,B} equals chi_{A,B}
        assert d_pair(pair, ONE, FIVE, point) == pytest.approx(chi_pair(pair, ONE, FIVE, point))
        assert chi_pair(pair, ONE, FIVE, point) == pytest.approx(1 / 3)

    @given(st.integers(min_value=0, max_value=2 ** 32), st.integers(min_value=2, max_value=5))
    def test_three_routes_agree(self, seed, size):
        ground = IndexSet.of(*range(1, size + 1))
        measure = random_discrete_measure(ground, 5, seed)
        point = EvaluationPoint(ground, np.random.default_rng(seed).uniform(0.5, 2.0, size))
        d_table, _ = measure.spectral_tables(point)
        for first, second in disjoint_pairs(ground):
            exact_d, exact_chi = measure.spectral_pair(first, second, point)
            assert abs(d_pair(measure, first, second, point) - exact_d) <= 1e-12
            assert abs(chi_pair(measure, first, second, point) - exact_chi) <= 1e-12
            assert abs(d_pair_from_lattice(d_table, first, second) - exact_d) <= 1e-10
            assert abs(d_pair_from_lattice(d_table, first, second, chi=True) - exact_chi) <= 1e-10

    def test_invalid_pairs(self, triple, ones):
        with pytest.raises(StructuralError):
            chi_pair(triple, IndexSet.of(1, 4), IndexSet.of(4), ones)
        with pytest.raises(DomainError):
            d_pair(triple, IndexSet(), FIVE, ones)
        with pytest.raises(StructuralError):
            d_pair(triple, IndexSet.of(2), FIVE, ones)

    def test_clamp(self):
        assert clamp_nonnegative(np.array([-1e-12, 0.5]), np.array([1.0, 1.0]), "chi").tolist() == [0.0, 0.5]
        with pytest.raises(ModelInconsistencyError):
            clamp_nonnegative(np.array([-1e-3]), np.array([1.0]), "chi")


coordinate = st.floats(min_value=0.2, max_value=5.0)
points3 = st.lists(coordinate, min_size=3, max_size=3)
GROUND3 = IndexSet.of(1, 2, 3)
BLOCKS = [IndexSet.of(1, 2), IndexSet.of(3)]


def zero_pattern(model, grid):
    tol = default_tolerance(model.ground)
    return [(item.sup_d <= tol, item.sup_chi <= tol) for item in all_pairs_diagnostics(model, grid, tol)]


class TestPairInvariants:

    @given(st.floats(min_value=0.2, max_value=1.0), points3)
    def test_logistic_d_between_zero_and_chi(self, alpha, coords):
        model = LogisticModel(GROUND3, alpha)
        point = EvaluationPoint(GROUND3, coords)
        for first, second in disjoint_pairs(GROUND3):
            d_value = d_pair(model, first, second, point)
            assert 0.0 <= d_value <= chi_pair(model, first, second, point) + 1e-12

    @given(st.integers(min_value=0, max_value=2 ** 32), st.integers(min_value=3, max_value=4))
    def test_discrete_d_between_zero_and_chi(self, seed, size):
        ground = IndexSet.of(*range(1, size + 1))
        measure = random_discrete_measure(ground, 6, seed)
        point = EvaluationPoint(ground, np.random.default_rng(seed).uniform(0.2, 5.0, size))
        for first, second in disjoint_pairs(ground):
            d_value = d_pair(measure, first, second, point)
            assert 0.0 <= d_value <= chi_pair(measure, first, second, point) + 1e-12

    @given(st.floats(min_value=0.2, max_value=1.0), points3, st.floats(min_value=0.1, max_value=10.0))
    def test_logistic_pair_homogeneity(self, alpha, coords, t):
        model = LogisticModel(GROUND3, alpha)
        point = EvaluationPoint(GROUND3, coords)
        for first, second in disjoint_pairs(GROUND3):
            assert t * d_pair(model, first, second, point.scaled(t)) == pytest.approx(
                d_pair(model, first, second, point), abs=1e-10)
            assert t * chi_pair(model, first, second, point.scaled(t)) == pytest.approx(
                chi_pair(model, first, second, point), abs=1e-10)

    @given(st.integers(min_value=0, max_value=2 ** 32), st.floats(min_value=0.1, max_value=10.0))
    def test_discrete_pair_homogeneity(self, seed, t):
        measure = random_discrete_measure(GROUND3, 6, seed)
        point = EvaluationPoint(GROUND3, np.random.default_rng(seed).uniform(0.2, 5.0, 3))
        for first, second in disjoint_pairs(GROUND3):
            assert t * d_pair(measure, first, second, point.scaled(t)) == pytest.approx(
                d_pair(measure, first, second, point), abs=1e-10)

    def test_independence_zero_on_grid(self):
        pattern = zero_pattern(independence_measure(GROUND3), default_grid(GROUND3))
        assert pattern == [(True, True)] * len(pattern)

    @given(st.floats(min_value=0.2, max_value=0.95))
    def test_logistic_nonzero_on_grid(self, alpha):
        pattern = zero_pattern(LogisticModel(GROUND3, alpha), default_grid(GROUND3))
        assert pattern == [(False, False)] * len(pattern)

    @given(st.floats(min_value=0.2, max_value=0.95))
    def test_block_logistic_zero_sets_agree(self, alpha):
        pattern = zero_pattern(block_logistic_model(BLOCKS, alpha), tensor_grid(GROUND3, [0.5, 1.0, 2.0]))
        assert all(d_zero == chi_zero for d_zero, chi_zero in pattern)
        assert (True, True) in pattern
        assert (False, False) in pattern

    @given(st.integers(min_value=0, max_value=2 ** 32))
    def test_block_product_zero_sets_agree(self, seed):
        measure = block_product_measure(BLOCKS, 3, seed)
        pattern = zero_pattern(measure, tensor_grid(GROUND3, [0.5, 1.0, 2.0]))
        assert all(d_zero == chi_zero for d_zero, chi_zero in pattern)
        assert (True, True) in pattern


class TestVerdicts:

    def test_example2_is_dependent_without_ci_rule(self, triple):
        grid = Grid.from_points([
            EvaluationPoint.from_mapping({1: 1.0, 4: 1.0, 5: 1.0}),
            EvaluationPoint.from_mapping({1: 0.5, 4: 2.0, 5: 1.0}),
        ])
        diagnostic = pair_diagnostic(triple, ONE, FIVE, grid)
        assert diagnostic.rest == IndexSet.of(4)
        assert diagnostic.sup_d == pytest.approx(1 / 12)
        assert diagnostic.sup_chi == pytest.approx(1 / 3)
        assert not diagnostic.independent
        assert diagnostic.ci_possible
        assert diagnostic.ci_rule == RULE_INAPPLICABLE
        assert diagnostic.certificate == "exact"
        assert diagnostic.notes

    def test_logistic_dependence_rules_out_ci(self, ground3):
        model = LogisticModel(ground3, 0.5)
        diagnostic = ci_necessary_verdict(model, IndexSet.of(1), IndexSet.of(2), default_grid(ground3))
        assert diagnostic.ci_rule == RULE_THEOREM
        assert diagnostic.sup_d > 1e-4
        assert not diagnostic.independent
        assert not diagnostic.ci_possible

    def test_logistic_alpha_one_is_independent(self, ground3):
        model = LogisticModel(ground3, 1.0)
        diagnostic = independence_verdict(model, IndexSet.of(1), IndexSet.of(2, 3), default_grid(ground3))
        assert diagnostic.independent
        assert diagnostic.ci_possible
        assert diagnostic.certificate == "grid"
        assert "independent on tested grid" in diagnostic.notes

    def test_discrete_independence_is_certified(self, ground3):
        diagnostic = pair_diagnostic(independence_measure(ground3), IndexSet.of(1), IndexSet.of(3),
                                     default_grid(ground3))
        assert diagnostic.independent
        assert diagnostic.certificate == "exact"

    def test_all_pairs_independent_of_threads(self, ground3):
        model = LogisticModel(ground3, 0.7)
        grid = default_grid(ground3)
        serial = all_pairs_diagnostics(model, grid, threads=1)
        threaded = all_pairs_diagnostics(model, grid, threads=3)
        assert len(serial) == 6
        assert [(item.sup_d, item.sup_chi) for item in serial] == [(item.sup_d, item.sup_chi) for item in threaded]

    def test_all_pairs_ci_iff_independent_for_smooth_models(self, ground3):
        model = block_logistic_model([IndexSet.of(1, 2), IndexSet.of(3)], 0.5)
        for diagnostic in all_pairs_diagnostics(model, default_grid(ground3)):
            assert diagnostic.ci_possible == diagnostic.independent
            splits_block = bool(diagnostic.first.members & {1, 2}) and bool(diagnostic.second.members & {1, 2})
            assert diagnostic.independent == (not splits_block)

    def test_grid_must_match_model(self, triple):
        with pytest.raises(StructuralError):
            pair_diagnostic(triple, ONE, FIVE, default_grid(IndexSet.of(1, 2, 3)))

    def test_default_tolerance(self, ground3):
        assert default_tolerance(ground3) == pytest.approx(4e-9)


class TestMultiway:

    def test_block_product_factorizes(self):
        blocks = [IndexSet.of(1, 2), IndexSet.of(3, 4), IndexSet.of(5, 6)]
        measure = block_product_measure(blocks, atoms_per_block=3, seed=17)
        grid = tensor_grid(measure.ground, [0.25, 0.5, 1.0, 2.0, 4.0], cap=100)
        report = multiway_verdict(measure, blocks, grid, tol=1e-12)
        assert report.pairwise_independent
        assert report.factorization_residual <= 1e-12
        assert report.jointly_independent
        assert max(report.pair_chi.values()) <= 1e-12
        assert report.rest.is_empty()

    def test_dependent_blocks_skip_factorization(self, ground3):
        model = LogisticModel(ground3, 0.5)
        report = multiway_verdict(model, [IndexSet.of(1), IndexSet.of(2)], default_grid(ground3))
        assert not report.pairwise_independent
        assert report.factorization_residual is None
        assert not report.jointly_independent
        assert report.rest == IndexSet.of(3)
        assert report.pair_d[(0, 1)] > 0.0

    def test_overlapping_blocks(self, ground3):
        with pytest.raises(StructuralError):
            multiway_verdict(LogisticModel(ground3, 0.5), [IndexSet.of(1, 2), IndexSet.of(2)],
                             default_grid(ground3))
