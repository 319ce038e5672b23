import itertools

import numpy as np
import pytest

from qecon.difficulty import Constant
from qecon.economics import cost_breakdown, total_field_cost
from qecon.evaluate import breakdown
from qecon.exceptions import ConstraintError, SearchSpaceError
from qecon.formats.scenario_file import load_scenario
from qecon.optimize import (Constraints, canonical_start, net_benefit,
                            optimize_exhaustive, optimize_heuristic,
                            validate_program)
from qecon.scenario import Fault, Program, Scenario, Technique
from qecon.tests.base_test import BaseTest, random_scenario
from qecon.utils.io import get_fn


class TestOptimize(BaseTest):

    @pytest.fixture
    def demo(self):
        return load_scenario(get_fn('optimize_demo.yaml'))

    @pytest.fixture
    def free_scenario(self, worked_fault):
        technique = Technique(id=4, name='unit test', setup_cost=0.0,
                              execution_cost_rate=0.0,
                              removal_cost={0: 4.0},
                              difficulty={0: Constant(0.5)})
        return Scenario([worked_fault], [technique])

    def test_empty_program(self, worked_scenario):
        assert net_benefit(Program(), worked_scenario) == 0.0

    def test_objective_is_revenue_minus_direct(self, worked_scenario):
        program = Program([(4, 5.0)])
        result = cost_breakdown(program, worked_scenario)
        assert net_benefit(program, worked_scenario) == pytest.approx(
            result.revenue - result.direct)

    def test_free_technique(self, free_scenario):
        result = optimize_exhaustive(free_scenario, Constraints(),
                                     effort_grid=[0.0, 5.0, 10.0])
        assert result.objective == 48.0
        assert result.best_program == Program([(4, 5.0)])
        assert result.evaluations == 3

    def test_screening_counts_as_revenue(self):
        faults = [Fault(id=0, doc_class='requirements',
                        failure_probability=0.0),
                  Fault(id=1, doc_class='code', predecessors=[0],
                        failure_probability=1.0, field_removal_cost=1000.0)]
        inspection = Technique(id=0, setup_cost=50.0, execution_cost_rate=0.0,
                               removal_cost={0: 1.0, 1: 0.0},
                               difficulty={0: Constant(0.0),
                                           1: Constant(1.0)})
        scenario = Scenario(faults, [inspection])
        result = optimize_exhaustive(scenario, Constraints(),
                                     effort_grid=[0.0, 10.0])
        assert result.best_program == Program([(0, 10.0)])
        assert result.objective == 949.0
        applied = cost_breakdown(result.best_program, scenario)
        assert (applied.direct, applied.future) == (51.0, 0.0)
        assert applied.revenue == applied.screened == 1000.0
        assert applied.roi == pytest.approx(949.0 / 51.0)

    def test_objective_minimizes_total_cost(self):
        grid = [0.0, 10.0, 20.0]
        with_predecessors = 0
        for seed in range(10):
            rng = np.random.default_rng(500 + seed)
            scenario = random_scenario(rng, n_faults=5, n_techniques=3)
            with_predecessors += scenario.has_predecessors
            result = optimize_exhaustive(scenario, Constraints(),
                                         effort_grid=grid)
            totals = []
            for order in itertools.permutations(scenario.technique_ids):
                for efforts in itertools.product(grid, repeat=len(order)):
                    costs = cost_breakdown(Program(zip(order, efforts)),
                                           scenario)
                    totals.append(costs.direct + costs.future)
            assert result.objective == pytest.approx(
                total_field_cost(scenario) - min(totals), abs=1e-6)
        assert with_predecessors >= 5

    def test_single_technique_levels(self, worked_scenario):
        constraints = Constraints(allowed_levels={4: [0, 10]})
        result = optimize_exhaustive(worked_scenario, constraints)
        assert result.best_program == Program([(4, 10.0)])
        assert result.objective == 50.0 - 32.0

    def test_exhaustive_demo(self, demo):
        result = optimize_exhaustive(demo.scenario, demo.constraints,
                                     demo.effort_grid)
        assert result.evaluations == 40
        validate_program(result.best_program, demo.scenario,
                         demo.constraints)
        assert result.best_program.techniques == (1, 4, 6)
        assert result.objective == pytest.approx(
            net_benefit(result.best_program, demo.scenario))
        assert result.objective > 0.0

    def test_heuristic_matches_exhaustive(self, demo):
        oracle = optimize_exhaustive(demo.scenario, demo.constraints,
                                     demo.effort_grid)
        hits = 0
        for seed in range(100):
            result = optimize_heuristic(demo.scenario, demo.constraints,
                                        seed=seed, budget=400, step=5.0,
                                        effort_cap=20.0)
            validate_program(result.best_program, demo.scenario,
                             demo.constraints)
            if result.objective >= 0.99 * oracle.objective:
                hits += 1
        assert hits >= 95

    def test_heuristic_matches_exhaustive_on_random_scenarios(self):
        hits = 0
        for seed in range(50):
            rng = np.random.default_rng(700 + seed)
            scenario = random_scenario(rng, n_faults=4, n_techniques=3)
            constraints = Constraints(
                allowed_levels={tid: [0.0, 10.0, 20.0]
                                for tid in scenario.technique_ids})
            oracle = optimize_exhaustive(scenario, constraints)
            result = optimize_heuristic(scenario, constraints, seed=seed,
                                        budget=400, restarts=4)
            validate_program(result.best_program, scenario, constraints)
            assert result.objective <= oracle.objective + 1e-9
            if result.objective >= 0.99 * oracle.objective:
                hits += 1
        assert hits >= 48

    def test_heuristic_deterministic(self, demo):
        first = optimize_heuristic(demo.scenario, demo.constraints, seed=3,
                                   budget=150, step=5.0, effort_cap=20.0)
        second = optimize_heuristic(demo.scenario, demo.constraints, seed=3,
                                    budget=150, step=5.0, effort_cap=20.0)
        assert first.best_program == second.best_program
        assert first.trace == second.trace
        parallel = optimize_heuristic(demo.scenario, demo.constraints, seed=3,
                                      budget=150, step=5.0, effort_cap=20.0,
                                      jobs=2)
        assert parallel.best_program == first.best_program
        assert parallel.evaluations == first.evaluations

    def test_monotone_trace(self, demo):
        result = optimize_heuristic(demo.scenario, demo.constraints, seed=8,
                                    budget=300)
        counts = [count for count, _ in result.trace]
        values = [value for _, value in result.trace]
        assert counts == sorted(counts)
        assert np.all(np.diff(values) > 0)
        assert values[-1] == result.objective
        assert result.evaluations <= 300

    def test_zero_budget(self, demo):
        result = optimize_heuristic(demo.scenario, demo.constraints,
                                    budget=0)
        assert result.evaluations == 1
        start = canonical_start(demo.scenario, demo.constraints)
        assert result.best_program == start
        assert start == Program([(1, 0.0), (4, 0.0), (6, 0.0)])

    def test_precedence_cycle(self, demo):
        constraints = Constraints(precedence=[(1, 4), (4, 6), (6, 1)])
        with pytest.raises(ConstraintError):
            optimize_exhaustive(demo.scenario, constraints, demo.effort_grid)
        with pytest.raises(ConstraintError):
            optimize_heuristic(demo.scenario, constraints)

    def test_search_space_ceiling(self, demo):
        with pytest.raises(SearchSpaceError):
            optimize_exhaustive(demo.scenario, demo.constraints,
                                demo.effort_grid, ceiling=10)

    def test_near_ceiling_warns(self, demo):
        with pytest.warns(UserWarning):
            optimize_exhaustive(demo.scenario, demo.constraints,
                                demo.effort_grid, ceiling=80)

    def test_infeasible(self, demo):
        constraints = Constraints(max_total_effort=10.0,
                                  allowed_levels={6: [20.0]})
        with pytest.raises(ConstraintError):
            optimize_exhaustive(demo.scenario, constraints, [0.0])
        with pytest.raises(ConstraintError):
            optimize_heuristic(demo.scenario, constraints)
        with pytest.raises(ConstraintError):
            Constraints(max_total_effort=-1.0)
        with pytest.raises(ConstraintError):
            Constraints(allowed_levels={4: []})

    def test_validate_program(self, demo):
        constraints = demo.constraints
        assert validate_program(demo.program, demo.scenario, constraints)
        with pytest.raises(ConstraintError):
            validate_program(Program([(4, 10.0), (1, 10.0), (6, 20.0)]),
                             demo.scenario, constraints)
        with pytest.raises(ConstraintError):
            validate_program(Program([(1, 10.0), (4, 20.0), (6, 20.0)]),
                             demo.scenario, constraints)
        with pytest.raises(ConstraintError):
            validate_program(Program([(1, 10.0), (4, 10.0), (6, 10.0)]),
                             demo.scenario, constraints)
        with pytest.raises(ConstraintError):
            validate_program(Program([(1, 10.0), (4, 10.0)]),
                             demo.scenario, constraints)

    def test_practical_objective(self, worked_practical):
        result = optimize_exhaustive(worked_practical, Constraints(),
                                     effort_grid=[0.0, 50.0, 100.0])
        assert result.objective == pytest.approx(
            breakdown(result.best_program, worked_practical).revenue -
            breakdown(result.best_program, worked_practical).direct)
        assert result.best_program.efforts()[4] == 100.0
