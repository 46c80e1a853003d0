import json
import math

import numpy as np
import pytest

from conftest import SPECS
from diagnostics import ci_necessary_verdict, default_grid
from errors import ModelValidationError, SpecFileError
from lattice import EvaluationPoint, IndexSet
from models import (
    AsymmetricLogisticModel,
    DiscreteSpectralMeasure,
    LogisticComponent,
    LogisticModel,
    extremal_coefficient,
    independence_measure,
    load_spec,
    max_linear,
    parse_spec,
    restrict,
    spectral_pair,
    spectral_tables,
    v_eval,
    validate,
    validate_model,
)
from models.fixtures import block_logistic_model, block_product_measure, random_discrete_measure
from models.logistic import default_smooth_flag, falling_factorial
from models.spec_file import document_digest


def asymmetric_components():
    return [
        LogisticComponent(IndexSet.of(1, 2), 0.4, {1: 0.6, 2: 0.3}),
        LogisticComponent(IndexSet.of(2, 3), 0.7, {2: 0.7, 3: 0.5}),
        LogisticComponent(IndexSet.of(1, 3), 0.5, {1: 0.4, 3: 0.5}),
    ]


class TestDiscreteSpectralMeasure:

    def test_example2_loadings(self, triple):
        assert np.allclose(triple.loadings, [[1, 1 / 2, 1 / 3], [0, 1 / 2, 1 / 3], [0, 0, 1 / 3]])
        assert np.allclose(triple.moment_sums(), 1.0)

    def test_exponent_values(self, triple, pair, ones):
        assert v_eval(triple, triple.ground, ones) == pytest.approx(11 / 6)
        assert v_eval(triple, IndexSet.of(4), ones) == pytest.approx(1.0)
        assert extremal_coefficient(pair, pair.ground) == pytest.approx(5 / 3)

    def test_table_matches_per_subset_exponents(self, triple, shifted):
        table = triple.exponent_table(shifted)
        for subset, value in table.items():
            assert value == pytest.approx(triple.exponent(subset, shifted), rel=1e-15)

    def test_atom_sums(self, triple, shifted):
        d_table, chi_table = spectral_tables(triple, shifted)
        assert d_table[IndexSet.of(5)] == pytest.approx(1 / 3)
        d_value, chi_value = spectral_pair(triple, IndexSet.of(1), IndexSet.of(5), shifted)
        assert d_value == pytest.approx(1 / 12)
        assert chi_value == pytest.approx(1 / 3)
        assert chi_table[IndexSet.of(1, 5)] == pytest.approx(1 / 3)

    def test_shares_atom(self, triple):
        assert triple.shares_atom(IndexSet.of(1), IndexSet.of(5))
        assert not independence_measure(IndexSet.of(1, 2)).shares_atom(IndexSet.of(1), IndexSet.of(2))

    def test_restrict_to_pair(self, triple, pair):
        marginal = restrict(triple, IndexSet.of(1, 5))
        point = EvaluationPoint(pair.ground, [0.7, 1.9])
        assert marginal.exponent(marginal.ground, point) == pytest.approx(pair.exponent(pair.ground, point))
        assert marginal.atom_count == 3

    @pytest.mark.parametrize("weights, directions", [
        ([0.0], [[1.0, 1.0]]),
        ([1.0], [[-0.1, 1.0]]),
        ([1.0], [[0.0, 0.0]]),
        ([1.0], [[1.0, 1.0, 1.0]]),
        ([], []),
    ])
    def test_invalid_atoms(self, weights, directions):
        with pytest.raises(ModelValidationError):
            DiscreteSpectralMeasure(IndexSet.of(1, 2), weights, directions)

    def test_validate_reports_failures(self):
        measure = DiscreteSpectralMeasure(IndexSet.of(1, 2), [1.0, 1.0], [[1.0, 0.5], [0.0, 1.0]])
        report = validate(measure)
        assert not report.passed
        assert report.failures() == {1: 1.5}
        fixed = validate(measure, renormalize=True)
        assert fixed.passed
        assert np.allclose(fixed.measure.moment_sums(), 1.0)

    def test_digest_is_stable(self):
        ground = IndexSet.of(1, 2, 3)
        assert random_discrete_measure(ground, 4, 11).digest() == random_discrete_measure(ground, 4, 11).digest()
        assert random_discrete_measure(ground, 4, 11).digest() != random_discrete_measure(ground, 4, 12).digest()


class TestMaxLinear:

    def test_degenerate_margin(self):
        with pytest.raises(ModelValidationError, match="degenerate margin: column 5 is zero"):
            max_linear([[1.0, 0.0], [1.0, 0.0]], IndexSet.of(1, 5))

    def test_column_sums_must_be_one(self):
        with pytest.raises(ModelValidationError, match="renormalize"):
            max_linear([[1.0, 1.0], [1.0, 0.0]], IndexSet.of(1, 2))

    def test_zero_rows_are_dropped(self):
        measure = max_linear([[0.5, 1.0], [0.0, 0.0], [0.5, 0.0]], IndexSet.of(1, 2))
        assert measure.atom_count == 2
        assert np.allclose(measure.moment_sums(), 1.0)

    def test_negative_coefficients(self):
        with pytest.raises(ModelValidationError):
            max_linear([[1.5, 1.0], [-0.5, 0.0]], IndexSet.of(1, 2))


class TestLogistic:

    def test_falling_factorial(self):
        assert falling_factorial(0.5, 0) == 1.0
        assert falling_factorial(0.5, 3) == pytest.approx(0.375)

    @pytest.mark.parametrize("alpha", [0.0, -0.2, 1.5, math.nan])
    def test_alpha_range(self, ground3, alpha):
        with pytest.raises(ModelValidationError):
            LogisticModel(ground3, alpha)

    def test_margins_and_extremal_coefficient(self, ground3):
        model = LogisticModel(ground3, 0.5)
        point = EvaluationPoint(ground3, [0.3, 1.0, 2.5])
        for label in ground3:
            assert model.exponent(IndexSet.of(label), point) == pytest.approx(1.0 / point[label])
        assert extremal_coefficient(model, ground3) == pytest.approx(3 ** 0.5)

    def test_alpha_one_is_independence(self, ground3):
        point = EvaluationPoint(ground3, [0.3, 1.0, 2.5])
        logistic = LogisticModel(ground3, 1.0).exponent_table(point).values
        independent = independence_measure(ground3).exponent_table(point).values
        assert np.allclose(logistic, independent, rtol=1e-14)

    def test_table_matches_masks(self, ground3):
        model = LogisticModel(ground3, 0.35)
        point = EvaluationPoint(ground3, [0.3, 1.0, 2.5])
        table = model.exponent_table(point).values
        for mask in range(1, 8):
            assert table[mask] == pytest.approx(model.exponent_mask(mask, point.coords), rel=1e-13)

    def test_first_partial_of_margin(self, ground3):
        model = LogisticModel(ground3, 0.6)
        coords = np.array([0.8, 1.0, 2.0])
        assert model.derivative_mask(0b001, 0b001, coords) == pytest.approx(-1.0 / 0.8 ** 2)

    def test_restrict(self, ground3):
        model = LogisticModel(ground3, 0.5).restrict(IndexSet.of(1, 3))
        assert model.ground == IndexSet.of(1, 3)
        assert model.alpha == 0.5

    def test_probe_validation(self, ground3, triple):
        for model in (LogisticModel(ground3, 0.5), triple, AsymmetricLogisticModel(ground3, asymmetric_components())):
            assert validate_model(model).passed


class TestAsymmetricLogistic:

    def test_weights_must_sum_to_one(self, ground3):
        components = asymmetric_components()[:2]
        with pytest.raises(ModelValidationError, match="coordinate 1"):
            AsymmetricLogisticModel(ground3, components)

    def test_component_checks(self):
        with pytest.raises(ModelValidationError):
            LogisticComponent(IndexSet.of(1, 2), 0.5, {1: 1.0})
        with pytest.raises(ModelValidationError):
            LogisticComponent(IndexSet.of(1, 2), 0.5, {1: 1.0, 2: -0.1})
        with pytest.raises(ModelValidationError):
            LogisticComponent(IndexSet(), 0.5, {})

    def test_component_outside_ground(self):
        components = [LogisticComponent(IndexSet.of(1, 9), 0.5, {1: 1.0, 9: 1.0})]
        with pytest.raises(ModelValidationError):
            AsymmetricLogisticModel(IndexSet.of(1, 2), components)

    def test_exponent_and_table(self, ground3):
        model = AsymmetricLogisticModel(ground3, asymmetric_components())
        point = EvaluationPoint(ground3, [0.4, 1.2, 3.0])
        table = model.exponent_table(point)
        for subset, value in table.items():
            assert value == pytest.approx(model.exponent(subset, point), rel=1e-13)
        for label in ground3:
            assert table[IndexSet.of(label)] == pytest.approx(1.0 / point[label])

    def test_restrict_keeps_margins(self, ground3):
        model = AsymmetricLogisticModel(ground3, asymmetric_components()).restrict(IndexSet.of(1, 2))
        full = AsymmetricLogisticModel(ground3, asymmetric_components())
        point = EvaluationPoint(ground3, [0.4, 1.2, 3.0])
        sub_point = point.restrict(IndexSet.of(1, 2))
        assert model.exponent(model.ground, sub_point) == pytest.approx(full.exponent(IndexSet.of(1, 2), point))

    def test_smooth_flag_default(self):
        assert default_smooth_flag(asymmetric_components())
        flat = [LogisticComponent(IndexSet.of(1, 2), 1.0, {1: 1.0, 2: 1.0})]
        assert not default_smooth_flag(flat)

    def test_block_fixtures(self):
        blocks = [IndexSet.of(1, 2), IndexSet.of(3, 4)]
        logistic = block_logistic_model(blocks, 0.5)
        measure = block_product_measure(blocks, 3, seed=5)
        assert logistic.smooth_density
        assert np.allclose(measure.moment_sums(), 1.0)
        assert not measure.shares_atom(blocks[0], blocks[1])


class TestSpecFiles:

    @pytest.mark.parametrize("name", sorted(path.name for path in SPECS.glob("*.json")))
    def test_shipped_specs_load(self, name):
        loaded = load_spec(SPECS / name)
        assert len(loaded.digest) == 16
        assert validate_model(loaded.model).passed

    def test_example2_spec_matches_fixture(self, triple, shifted):
        model = load_spec(SPECS / "example2_triple.json").model
        assert not model.smooth_density
        assert model.exponent(model.ground, shifted) == pytest.approx(triple.exponent(triple.ground, shifted))

    @pytest.mark.parametrize("document", [
        {"kind": "max_linear", "indices": [1, 4, 5],
         "params": {"coefficients": [[1, 1, 1], [0, 1, 1], [0, 0, 1]], "renormalize": True},
         "flags": {"smooth_density": True}},
        {"kind": "discrete", "indices": [1, 2],
         "params": {"atoms": [{"weight": 1.0, "direction": [1.0, 0.0]}, {"weight": 1.0, "direction": [0.0, 1.0]}]},
         "flags": {"smooth_density": True}},
    ])
    def test_density_flag_rejected_for_atomic_kinds(self, document):
        with pytest.raises(SpecFileError, match="smooth_density must be false"):
            parse_spec(json.dumps(document))

    def test_example2_spec_keeps_ci_possible(self):
        model = load_spec(SPECS / "example2_triple.json").model
        diagnostic = ci_necessary_verdict(model, IndexSet.of(1), IndexSet.of(5), default_grid(model.ground))
        assert diagnostic.ci_rule == "inapplicable"
        assert diagnostic.ci_possible
        assert not diagnostic.independent

    def test_columns_follow_document_order(self, triple, shifted):
        document = {
            "kind": "max_linear",
            "indices": [5, 1, 4],
            "params": {"coefficients": [[1, 1, 1], [1, 0, 1], [1, 0, 0]], "renormalize": True},
        }
        model = parse_spec(json.dumps(document)).model
        for subset, value in triple.exponent_table(shifted).items():
            assert model.exponent(subset, shifted) == pytest.approx(value)

    def test_digest_ignores_key_order(self):
        first = {"kind": "logistic", "indices": [1, 2], "params": {"alpha": 0.5}}
        second = {"params": {"alpha": 0.5}, "indices": [1, 2], "kind": "logistic"}
        assert document_digest(first) == document_digest(second)
        assert parse_spec(json.dumps(first)).digest == parse_spec(json.dumps(second)).digest

    def test_invalid_json(self):
        with pytest.raises(SpecFileError, match="invalid JSON at line 1"):
            parse_spec("{not json")

    @pytest.mark.parametrize("document", [
        {"kind": "gaussian", "indices": [1, 2], "params": {}},
        {"kind": "logistic", "indices": [1, 1], "params": {"alpha": 0.5}},
        {"kind": "logistic", "indices": [1, 2], "params": {"alpha": 1.5}},
        {"kind": "logistic", "indices": [1, 2], "params": {"alpha": 0.5, "beta": 1}},
        {"kind": "asymmetric_logistic", "indices": [1, 2],
         "params": {"components": [{"subset": [1, 2], "alpha": 0.5, "thetas": [1.0]}]}},
    ])
    def test_schema_errors(self, document):
        with pytest.raises(SpecFileError, match="schema error"):
            parse_spec(json.dumps(document))

    def test_model_errors_are_wrapped(self):
        document = {
            "kind": "discrete",
            "indices": [1, 2],
            "params": {"atoms": [{"weight": 1, "direction": [1, 0.5]}]},
        }
        with pytest.raises(SpecFileError, match="moment conditions fail"):
            parse_spec(json.dumps(document))
        document["params"]["renormalize"] = True
        assert parse_spec(json.dumps(document)).model.atom_count == 1

    def test_missing_file(self, tmp_path):
        with pytest.raises(SpecFileError, match="cannot read model spec"):
            load_spec(tmp_path / "missing.json")
