import numpy as np
import pytest

from qecon.difficulty import Constant, Exponential, Linear, Sigmoid
from qecon.practical import DefectType, PracticalScenario, PracticalTechnique
from qecon.scenario import DocumentClass, Fault, Program, Scenario, Technique


def random_curve(rng):
    form = rng.integers(4)
    if form == 0:
        return Exponential(float(rng.uniform(0.05, 3.0)))
    elif form == 1:
        return Linear(float(-rng.uniform(0.005, 0.2)))
    elif form == 2:
        return Constant(float(rng.uniform(0.0, 1.0)))
    return Sigmoid(float(rng.uniform(0.05, 1.0)), float(rng.uniform(0, 20)))


def random_scenario(rng, n_faults=5, n_techniques=3, predecessors=True):
    """Random ideal scenario with faults ordered by document class."""
    ranks = np.sort(rng.integers(0, 3, size=n_faults))
    classes = [(DocumentClass.REQUIREMENTS, DocumentClass.DESIGN,
                DocumentClass.CODE)[rank] for rank in ranks]
    faults = []
    for k in range(n_faults):
        candidates = [j for j in range(k) if ranks[j] < ranks[k]]
        chosen = []
        if predecessors and candidates:
            count = rng.integers(0, min(2, len(candidates)) + 1)
            chosen = list(rng.choice(candidates, size=count, replace=False))
        faults.append(Fault(
            id=k, doc_class=classes[k], predecessors=chosen,
            failure_probability=float(rng.uniform(0, 1)),
            field_removal_cost=float(rng.uniform(0, 2000)),
            field_effect_cost=float(rng.uniform(0, 500))))
    techniques = []
    for tid in rng.choice(7, size=n_techniques, replace=False):
        techniques.append(Technique(
            id=int(tid), setup_cost=float(rng.uniform(0, 100)),
            execution_cost_rate=float(rng.uniform(0, 50)),
            removal_cost={f.id: float(rng.uniform(0, 200)) for f in faults},
            difficulty={f.id: random_curve(rng) for f in faults}))
    return Scenario(faults, techniques, labour_rate=float(rng.uniform(0, 50)))


def random_program(rng, scenario, max_effort=40.0):
    order = rng.permutation(scenario.technique_ids)
    efforts = rng.uniform(0, max_effort, size=len(order))
    efforts[rng.uniform(size=len(order)) < 0.2] = 0.0
    return Program([(int(tid), float(e)) for tid, e in zip(order, efforts)])


def random_practical(rng, n_types=3, n_techniques=3, count=None,
                     integral=False):
    if count is None:
        count = int(rng.integers(1 if integral else 0, 30))
    if integral:
        # whole number of faults per type
        fractions = rng.multinomial(count, np.ones(n_types) / n_types) / count
    else:
        fractions = rng.dirichlet(np.ones(n_types))
    fractions[-1] = 1.0 - np.sum(fractions[:-1])
    types = [DefectType(id=k, fraction=float(fractions[k]),
                        failure_probability=float(rng.uniform(0, 1)),
                        avg_field_removal_cost=float(rng.uniform(0, 2000)),
                        avg_field_effect_cost=float(rng.uniform(0, 500)))
             for k in range(n_types)]
    techniques = []
    for tid in rng.choice(7, size=n_techniques, replace=False):
        techniques.append(PracticalTechnique(
            id=int(tid), avg_setup_cost=float(rng.uniform(0, 100)),
            avg_removal_cost={k: float(rng.uniform(0, 200))
                              for k in range(n_types)},
            difficulty_slope={k: (0.0 if rng.uniform() < 0.2 else
                                  float(-rng.uniform(0.005, 0.1)))
                              for k in range(n_types)}))
    return PracticalScenario(types, count, techniques,
                             labour_rate=float(rng.uniform(0, 50)))


class BaseTest:

    @pytest.fixture(autouse=True)
    def initdir(self, tmpdir):
        tmpdir.chdir()

    @pytest.fixture
    def worked_fault(self):
        return Fault(id=0, doc_class='code', failure_probability=0.1,
                     field_removal_cost=1000.0)

    @pytest.fixture
    def unit_test(self):
        return Technique(id=4, setup_cost=10.0, execution_cost_rate=2.0,
                         removal_cost={0: 4.0},
                         difficulty={0: Constant(0.5)})

    @pytest.fixture
    def worked_scenario(self, worked_fault, unit_test):
        return Scenario([worked_fault], [unit_test])

    @pytest.fixture
    def halving_scenario(self, worked_fault):
        """One fault, two free techniques that each miss it half the time."""
        techniques = [Technique(id=tid, removal_cost={0: 4.0},
                                difficulty={0: Constant(0.5)})
                      for tid in (3, 4)]
        return Scenario([worked_fault], techniques)

    @pytest.fixture
    def chain_scenario(self):
        """Fault 1 derives from fault 0; fault 2 derives from fault 1."""
        faults = [
            Fault(id=0, doc_class='requirements', failure_probability=0.5,
                  field_removal_cost=100.0),
            Fault(id=1, doc_class='design', predecessors=[0],
                  failure_probability=0.4, field_removal_cost=200.0),
            Fault(id=2, doc_class='code', predecessors=[1],
                  failure_probability=0.3, field_removal_cost=300.0,
                  field_effect_cost=50.0),
        ]
        techniques = [
            Technique(id=0, setup_cost=5.0, removal_cost={f.id: 1.0
                                                          for f in faults},
                      difficulty={f.id: Constant(0.5) for f in faults}),
            Technique(id=6, setup_cost=5.0, removal_cost={f.id: 2.0
                                                          for f in faults},
                      difficulty={f.id: Linear(-0.05) for f in faults}),
        ]
        return Scenario(faults, techniques, labour_rate=1.0)

    @pytest.fixture
    def worked_practical(self):
        types = [DefectType(id=0, name='function', fraction=1.0,
                            failure_probability=0.1,
                            avg_field_removal_cost=1000.0)]
        technique = PracticalTechnique(id=4, avg_removal_cost={0: 4.0},
                                       difficulty_slope={0: -0.01})
        return PracticalScenario(types, 10, [technique])

    @pytest.fixture
    def rng(self):
        return np.random.default_rng(20240611)
