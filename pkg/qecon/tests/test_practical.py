import warnings

import numpy as np
import pytest

from qecon.economics import cost_breakdown
from qecon.evaluate import (breakdown, field_cost, net_benefit,
                            simulation_scenario)
from qecon.exceptions import (ConfigurationError, InvariantViolationError,
                              UndefinedROIError)
from qecon.practical import (FRACTION_TOLERANCE, DefectType,
                             PracticalScenario,
                             PracticalTechnique, expand_practical,
                             expected_field_cost, practical_combined,
                             practical_direct_single, practical_future_single,
                             practical_revenues_single)
from qecon.scenario import Program
from qecon.tests.base_test import (BaseTest, random_practical,
                                   random_program)


class TestPractical(BaseTest):

    def test_worked_single(self, worked_practical):
        tech = worked_practical.technique(4)
        assert practical_direct_single(tech, 50.0, worked_practical) == 20.0
        assert practical_revenues_single(tech, 50.0, worked_practical) == 500.0
        assert practical_future_single(tech, 50.0, worked_practical) == 500.0

    def test_null_application(self, worked_practical):
        tech = worked_practical.technique(4)
        assert practical_direct_single(tech, 0.0, worked_practical) == 0.0
        assert practical_revenues_single(tech, 0.0, worked_practical) == 0.0
        assert practical_future_single(tech, 0.0, worked_practical) == 1000.0

    def test_clamp_boundary(self, worked_practical):
        tech = worked_practical.technique(4)
        assert practical_future_single(tech, 100.0, worked_practical) == 0.0
        assert practical_future_single(tech, 250.0, worked_practical) == 0.0

    def test_undetectable_types(self):
        types = [DefectType(id=0, fraction=1.0, failure_probability=0.2,
                            avg_field_removal_cost=300.0)]
        tech = PracticalTechnique(id=2, avg_setup_cost=7.0,
                                  execution_cost_rate=3.0,
                                  avg_removal_cost={0: 4.0},
                                  difficulty_slope={0: 0.0})
        scenario = PracticalScenario(types, 12, [tech])
        assert practical_direct_single(tech, 10.0, scenario) == 37.0
        assert practical_revenues_single(tech, 10.0, scenario) == 0.0
        assert practical_future_single(tech, 10.0, scenario) == (
            pytest.approx(12 * 0.2 * 300.0))

    def test_two_halving_techniques(self, worked_practical):
        second = PracticalTechnique(id=6, avg_removal_cost={0: 4.0},
                                    difficulty_slope={0: -0.01})
        scenario = PracticalScenario(worked_practical.defect_types, 10,
                                     worked_practical.techniques + (second,))
        result = practical_combined(Program([(4, 50.0), (6, 50.0)]), scenario)
        assert result.revenue == pytest.approx(0.75 * 10 * 0.1 * 1000.0)
        assert result.future == pytest.approx(0.25 * 10 * 0.1 * 1000.0)
        assert result.direct == pytest.approx(10 * 4.0 * 0.75)

    def test_empty_program(self, worked_practical):
        faultless = PracticalScenario(worked_practical.defect_types, 0,
                                      worked_practical.techniques)
        with pytest.raises(UndefinedROIError):
            practical_combined(Program(), faultless)
        result = practical_combined(Program(), worked_practical)
        assert result.direct == 0.0
        assert result.revenue == 0.0
        assert result.future == expected_field_cost(worked_practical)

    @pytest.mark.parametrize("seed", range(5))
    def test_conservation(self, seed):
        rng = np.random.default_rng(seed)
        scenario = random_practical(rng, count=17)
        total = expected_field_cost(scenario)
        for _ in range(50):
            order = rng.permutation(scenario.technique_ids)
            program = Program([(int(tid), float(rng.uniform(0, 120)))
                               for tid in order])
            result = practical_combined(program, scenario)
            assert result.revenue + result.future == pytest.approx(
                total, abs=1e-9)

    @pytest.mark.parametrize("mode", ['aggregate', 'individual'])
    def test_expansion_equivalence(self, mode):
        rng = np.random.default_rng(42)
        types = [DefectType(id=0, fraction=0.5, failure_probability=0.3,
                            avg_field_removal_cost=800.0),
                 DefectType(id=1, fraction=0.25, failure_probability=0.1,
                            avg_field_removal_cost=1500.0,
                            avg_field_effect_cost=200.0),
                 DefectType(id=2, fraction=0.25, failure_probability=0.05,
                            avg_field_removal_cost=400.0)]
        techniques = [PracticalTechnique(
            id=tid, avg_setup_cost=float(rng.uniform(0, 50)),
            execution_cost_rate=float(rng.uniform(0, 20)),
            avg_removal_cost={k: float(rng.uniform(1, 100)) for k in range(3)},
            difficulty_slope={k: float(-rng.uniform(0, 0.05))
                              for k in range(3)})
            for tid in (1, 3, 5)]
        scenario = PracticalScenario(types, 8, techniques)
        expanded, fault_types = expand_practical(scenario, mode=mode)
        if mode == 'individual':
            assert len(expanded.faults) == 8
            assert sorted(fault_types.values()) == [0, 0, 0, 0, 1, 1, 2, 2]
        for _ in range(20):
            program = Program([(int(tid), float(rng.uniform(0, 60)))
                               for tid in rng.permutation([1, 3, 5])])
            practical = practical_combined(program, scenario)
            ideal = cost_breakdown(program, expanded)
            assert ideal.direct == pytest.approx(practical.direct, abs=1e-9)
            assert ideal.future == pytest.approx(practical.future, abs=1e-9)
            assert ideal.revenue == pytest.approx(practical.revenue,
                                                  abs=1e-9)

    def test_expansion_equivalence_random(self):
        individual = 0
        for seed in range(100):
            rng = np.random.default_rng(1000 + seed)
            integral = seed % 2 == 0
            scenario = random_practical(rng, n_types=int(rng.integers(1, 5)),
                                        count=int(rng.integers(1, 30)),
                                        integral=integral)
            modes = ['aggregate'] + (['individual'] if integral else [])
            for mode in modes:
                expanded, _ = expand_practical(scenario, mode=mode)
                if mode == 'individual':
                    individual += 1
                    count = scenario.expected_fault_count
                    assert len(expanded.faults) == count
                for _ in range(5):
                    program = random_program(rng, scenario)
                    practical = practical_combined(program, scenario)
                    ideal = cost_breakdown(program, expanded)
                    for name in ('direct', 'future', 'revenue'):
                        assert getattr(ideal, name) == pytest.approx(
                            getattr(practical, name), rel=1e-9, abs=1e-9)
        assert individual == 50

    def test_simulation_fallback_random(self):
        for seed in range(50):
            rng = np.random.default_rng(2000 + seed)
            scenario = random_practical(rng, count=int(rng.integers(1, 30)),
                                        integral=bool(seed % 2))
            counts = scenario.type_counts()
            integral = bool(np.all(np.abs(counts - np.round(counts)) <=
                                   FRACTION_TOLERANCE))
            if integral:
                with warnings.catch_warnings():
                    warnings.simplefilter('error')
                    expanded = simulation_scenario(scenario)
                assert len(expanded.faults) == int(round(np.sum(counts)))
            else:
                with pytest.warns(UserWarning):
                    expanded = simulation_scenario(scenario)
                assert len(expanded.faults) == len(scenario.defect_types)
            program = random_program(rng, scenario)
            practical = practical_combined(program, scenario)
            ideal = cost_breakdown(program, expanded)
            assert ideal.revenue == pytest.approx(practical.revenue,
                                                  rel=1e-9, abs=1e-9)
            assert ideal.future == pytest.approx(practical.future,
                                                 rel=1e-9, abs=1e-9)

    def test_individual_needs_integral_counts(self):
        rng = np.random.default_rng(3)
        scenario = random_practical(rng, n_types=3, count=7)
        with pytest.raises(ConfigurationError):
            expand_practical(scenario, mode='individual')
        with pytest.raises(ValueError):
            expand_practical(scenario, mode='grouped')

    def test_model_dispatch(self, worked_practical):
        program = Program([(4, 50.0)])
        assert breakdown(program, worked_practical).direct == 20.0
        assert net_benefit(program, worked_practical) == 480.0
        assert field_cost(worked_practical) == 1000.0

    def test_invariants(self, worked_practical):
        with pytest.raises(InvariantViolationError):
            PracticalTechnique(id=0, difficulty_slope={0: 0.1})
        with pytest.raises(InvariantViolationError):
            PracticalScenario([DefectType(id=0, fraction=0.6),
                               DefectType(id=1, fraction=0.6)], 5, [])
        with pytest.raises(InvariantViolationError):
            PracticalScenario(worked_practical.defect_types, 2.5, [])
        with pytest.raises(InvariantViolationError):
            PracticalScenario(worked_practical.defect_types, -1, [])
        with pytest.raises(ConfigurationError):
            PracticalScenario(worked_practical.defect_types, 5, [
                PracticalTechnique(id=0, avg_removal_cost={0: 1.0},
                                   difficulty_slope={0: -0.1, 3: -0.1})])
        with pytest.raises(ConfigurationError):
            PracticalScenario(worked_practical.defect_types, 5, [
                PracticalTechnique(id=0, avg_removal_cost={0: 1.0})])
