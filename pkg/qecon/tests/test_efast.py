import numpy as np
import pytest

from qecon.designs import get_study
from qecon.exceptions import DesignError
from qecon.lib.templates import ScenarioTemplate
from qecon.sensitivity.benchmarks import (Additive, ConstantModel, Ishigami,
                                          ishigami_indices,
                                          ishigami_variances)
from qecon.sensitivity.binding import Binding, TemplateModel
from qecon.sensitivity.distributions import DiscreteUniform, Uniform
from qecon.sensitivity.efast import (Factor, SensitivityDesign,
                                     analyze_outputs, efast_indices,
                                     evaluate_model, frequencies,
                                     generate_samples)
from qecon.tests.base_test import BaseTest


class FirstFactor(object):
    def __call__(self, row):
        return row[0]


class Polynomial(object):
    """``sum_i a_i x_i + sum_{i<j} b_ij x_i x_j``."""
    def __init__(self, linear, pairwise):
        self.linear = np.asarray(linear, dtype=np.float64)
        self.pairwise = np.triu(np.asarray(pairwise, dtype=np.float64), 1)

    def __call__(self, row):
        row = np.asarray(row, dtype=np.float64)
        return float(self.linear @ row + row @ self.pairwise @ row)


class TestEFAST(BaseTest):

    @pytest.fixture
    def unit_design(self):
        factors = [Factor('x1', Uniform(0.0, 1.0)),
                   Factor('x2', Uniform(0.0, 1.0))]
        return SensitivityDesign(factors)

    def test_ishigami_oracle(self):
        v1, v2, v3, v13, total = ishigami_variances()
        assert (v1 + v2 + v3 + v13) == pytest.approx(total)
        first, total_order = ishigami_indices()
        np.testing.assert_allclose(first, [0.3139, 0.4424, 0.0], atol=1e-4)
        np.testing.assert_allclose(total_order, [0.5576, 0.4424, 0.2437],
                                   atol=1e-4)

    @pytest.mark.parametrize("seed", [12345, 1, 2, 3, 5, 8, 13, 21, 34, 55])
    def test_ishigami(self, seed):
        study = get_study('ishigami')
        result = study.run(seed=seed)
        first, total = ishigami_indices()
        np.testing.assert_allclose(result.first_order, first, atol=0.02)
        np.testing.assert_allclose(result.total_order, total, atol=0.03)
        assert not result.degenerate

    def test_single_factor(self, unit_design):
        result = efast_indices(FirstFactor(), unit_design)
        assert result.first('x1') == pytest.approx(1.0, abs=0.02)
        assert result.first('x2') == pytest.approx(0.0, abs=0.02)
        assert result.total('x2') == pytest.approx(0.0, abs=0.02)

    def test_additive(self, unit_design):
        result = efast_indices(Additive(), unit_design)
        for name in ('x1', 'x2'):
            assert result.first(name) == pytest.approx(0.5, abs=0.02)
            assert result.total(name) == pytest.approx(0.5, abs=0.02)
            assert abs(result.total(name) - result.first(name)) <= 0.03

    def test_index_properties(self):
        result = get_study('ishigami').run(seed=99)
        assert np.sum(result.first_order) <= 1.05
        assert np.all(result.total_order >= result.first_order - 0.02)
        assert np.all((result.first_order >= 0) & (result.first_order <= 1))

    def test_index_properties_random_designs(self):
        for seed in range(20):
            rng = np.random.default_rng(900 + seed)
            n_factors = int(rng.integers(2, 6))
            factors = [Factor('x{}'.format(k),
                              Uniform(0.0, 1.0 + rng.random()))
                       for k in range(1, n_factors + 1)]
            design = SensitivityDesign(factors, samples_per_curve=257,
                                       resamples=2)
            linear = rng.uniform(0.5, 3.0, n_factors)
            pairwise = rng.uniform(0.0, 2.0, (n_factors, n_factors))
            for model, additive in ((Polynomial(linear, pairwise), False),
                                    (Additive(linear), True)):
                result = efast_indices(model, design, seed=seed)
                first, total = result.first_order, result.total_order
                assert np.all((first >= 0.0) & (first <= 1.0))
                assert np.all((total >= 0.0) & (total <= 1.0))
                assert np.all(total >= first - 0.02)
                assert np.sum(first) <= 1.05
                if additive:
                    assert np.all(total - first <= 0.03)
                    assert np.sum(first) == pytest.approx(1.0, abs=0.05)

    def test_field_cost_dominates_net_benefit(self):
        factors = [
            Factor('v_f', Uniform(500.0, 4000.0),
                   Binding('field_removal_cost')),
            Factor('pi', Uniform(0.095, 0.105),
                   Binding('failure_probability')),
            Factor('l', Uniform(48.0, 52.0), Binding('labour_rate')),
            Factor('u', Uniform(180.0, 220.0), Binding('setup_cost')),
        ]
        design = SensitivityDesign(factors, samples_per_curve=129,
                                   resamples=1, grouping='detailed')
        model = TemplateModel(design, ScenarioTemplate(), 'net_benefit')

        # one factor at a time, the others at their medians
        middle = [f.distribution.midpoint() for f in factors]
        spreads = []
        for col, factor in enumerate(factors):
            outputs = []
            for value in factor.distribution.ppf(np.linspace(0.0, 1.0, 33)):
                row = list(middle)
                row[col] = value
                outputs.append(model(row))
            spreads.append(np.var(outputs))
        assert all(spreads[0] >= 5.0 * other for other in spreads[1:])

        hits = 0
        for seed in range(20):
            result = efast_indices(model, design, seed=seed)
            hits += result.rows()[0][0] == 'v_f'
        assert hits >= 18

    def test_degenerate(self, unit_design):
        with pytest.warns(UserWarning):
            result = efast_indices(ConstantModel(3.0), unit_design)
        assert result.degenerate
        assert np.all(result.first_order == 0.0)
        assert np.all(result.total_order == 0.0)

    def test_permutation_invariance(self):
        factors = [Factor('x1', Uniform(-np.pi, np.pi)),
                   Factor('x2', Uniform(-np.pi, np.pi)),
                   Factor('x3', Uniform(-np.pi, np.pi))]
        design = SensitivityDesign(factors, samples_per_curve=257,
                                   resamples=2)
        swapped = SensitivityDesign([factors[2], factors[0], factors[1]],
                                    samples_per_curve=257, resamples=2)

        class Reordered(object):
            def __call__(self, row):
                return Ishigami()([row[1], row[2], row[0]])

        result = efast_indices(Ishigami(), design, seed=7)
        other = efast_indices(Reordered(), swapped, seed=7)
        assert other.factors == ['x3', 'x1', 'x2']
        for name in result.factors:
            assert other.first(name) == pytest.approx(result.first(name),
                                                      abs=1e-12)
            assert other.total(name) == pytest.approx(result.total(name),
                                                      abs=1e-12)

    def test_samples(self, unit_design):
        samples = generate_samples(unit_design, seed=1)
        assert samples.shape == (unit_design.n_rows, 2)
        assert np.all((samples >= 0.0) & (samples <= 1.0))
        np.testing.assert_array_equal(samples,
                                      generate_samples(unit_design, seed=1))
        assert not np.array_equal(samples,
                                  generate_samples(unit_design, seed=2))

    def test_discrete_support(self):
        orders = DiscreteUniform(list(range(7)))
        design = SensitivityDesign([Factor('s', orders),
                                    Factor('x', Uniform(0.0, 1.0))],
                                   samples_per_curve=65, resamples=1)
        samples = generate_samples(design)
        assert set(samples[:, 0]) <= set(range(7))

    def test_frequencies(self):
        factors = [Factor('x{}'.format(k), Uniform(0.0, 1.0))
                   for k in range(1, 12)]
        design = SensitivityDesign(factors, samples_per_curve=513)
        omegas = frequencies(design, 'x3')
        assert omegas['x3'] == design.omega_max == 64
        others = [omegas[name] for name in design.names if name != 'x3']
        assert max(others) <= design.omega_max // (2 * design.interference)
        assert 2 * design.interference * max(others) < design.omega_max
        assert others == [2, 3, 4, 5, 6, 7, 2, 3, 4, 5]

    def test_frequencies_small_design(self):
        factors = [Factor('x1', Uniform(0.0, 1.0)),
                   Factor('x2', Uniform(0.0, 1.0)),
                   Factor('x3', Uniform(0.0, 1.0))]
        design = SensitivityDesign(factors, samples_per_curve=65)
        assert frequencies(design, 'x1') == {'x1': 8, 'x2': 1, 'x3': 1}
        design = SensitivityDesign(factors, samples_per_curve=1025)
        assert frequencies(design, 'x3') == {'x1': 2, 'x2': 3, 'x3': 128}

    @pytest.mark.parametrize("kwargs",
                             [
                                 {'samples_per_curve': 64},
                                 {'samples_per_curve': 63},
                                 {'resamples': 0},
                                 {'interference': 2.5},
                                 {'grouping': 'coarse'},
                             ])
    def test_invalid_design(self, kwargs):
        factors = [Factor('x1', Uniform(0.0, 1.0))]
        with pytest.raises(DesignError):
            SensitivityDesign(factors, **kwargs)

    def test_invalid_factors(self):
        with pytest.raises(DesignError):
            SensitivityDesign([])
        with pytest.raises(DesignError):
            SensitivityDesign([Factor('x', Uniform(0.0, 1.0)),
                               Factor('x', Uniform(0.0, 1.0))])

    def test_output_size_mismatch(self, unit_design):
        with pytest.raises(DesignError):
            analyze_outputs(np.zeros(5), unit_design)
        with pytest.raises(DesignError):
            analyze_outputs(np.full(unit_design.n_rows, np.nan), unit_design)

    def test_parallel_evaluation(self, unit_design):
        samples = generate_samples(unit_design)
        serial = evaluate_model(Additive(), samples, jobs=1)
        parallel = evaluate_model(Additive(), samples, jobs=2)
        np.testing.assert_array_equal(serial, parallel)

    def test_rankings(self):
        result = get_study('ishigami').run()
        assert result.prioritisation() == ['x2', 'x1', 'x3']
        assert [name for name, _, _ in result.rows()] == ['x1', 'x2', 'x3']
        assert result.fixable() == []
