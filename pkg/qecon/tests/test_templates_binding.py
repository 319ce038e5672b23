import numpy as np
import pytest

from qecon.designs import get_study
from qecon.difficulty import Constant
from qecon.evaluate import breakdown, net_benefit
from qecon.exceptions import DesignError
from qecon.lib.templates import (DEFAULT_SEQUENCES, PracticalTemplate,
                                 ScenarioTemplate, template_from_dict)
from qecon.practical import PracticalScenario
from qecon.sensitivity.binding import (Binding, TemplateModel,
                                       bind_and_evaluate, bind_values)
from qecon.sensitivity.distributions import Uniform
from qecon.sensitivity.efast import Factor, SensitivityDesign
from qecon.tests.base_test import BaseTest


class TestTemplates(BaseTest):

    def test_nominal_instance(self):
        template = ScenarioTemplate()
        scenario, program = template.nominal_instance()
        assert len(scenario.faults) == template.fault_count == 12
        assert [tid for tid, _ in program.applications] == list(
            DEFAULT_SEQUENCES[0])
        assert scenario.labour_rate == 50.0

    def test_predecessor_count(self):
        template = ScenarioTemplate()
        scenario, _ = template.instantiate([(Binding('predecessors'), 0.0)])
        assert not scenario.has_predecessors
        scenario, _ = template.instantiate([(Binding('predecessors'), 2.0)])
        for fault in scenario.faults:
            assert len(fault.predecessors) <= 2

    def test_technique_binding(self):
        template = ScenarioTemplate()
        scenario, program = template.instantiate(
            [(Binding('effort', (3,)), 7.5), (Binding('setup_cost'), 10.0)])
        assert program.efforts()[3] == 7.5
        assert program.efforts()[0] == 8.0
        assert all(t.setup_cost == 10.0 for t in scenario.techniques)

    def test_undetectable_mean(self):
        template = ScenarioTemplate()
        scenario, program = template.instantiate(
            [(Binding('theta_mean'), 1.0)])
        technique = scenario.technique(6)
        assert technique.curve(0) == Constant(1.0)
        assert breakdown(program, scenario).roi == -1.0

    @pytest.mark.parametrize("index", [5, 6])
    def test_unusual_sequences(self, index):
        template = ScenarioTemplate()
        scenario, program = template.instantiate(
            [(Binding('sequence'), float(index))])
        assert program.applications[0][0] in (4, 6)
        assert np.isfinite(breakdown(program, scenario).roi)

    def test_out_of_range_choice(self):
        with pytest.raises(DesignError):
            ScenarioTemplate().instantiate([(Binding('sequence'), 7.0)])
        with pytest.raises(DesignError):
            ScenarioTemplate().instantiate([(Binding('effort', (9,)), 1.0)])

    def test_invalid_template(self):
        with pytest.raises(DesignError):
            ScenarioTemplate(sequences=[(0, 1)])
        with pytest.raises(DesignError):
            ScenarioTemplate(bogus=1.0)
        with pytest.raises(DesignError):
            template_from_dict({'kind': 'hybrid'})

    def test_from_dict(self):
        template = template_from_dict(ScenarioTemplate().to_dict())
        assert isinstance(template, ScenarioTemplate)
        assert template.nominal == ScenarioTemplate().nominal
        practical = template_from_dict(PracticalTemplate().to_dict())
        assert isinstance(practical, PracticalTemplate)
        assert practical.nominal == PracticalTemplate().nominal

    def test_practical_fraction(self):
        template = PracticalTemplate()
        scenario, _ = template.instantiate([(Binding('fraction'), 0.5)])
        assert isinstance(scenario, PracticalScenario)
        fractions = [dt.fraction for dt in scenario.defect_types]
        assert fractions[0] == 0.5
        assert sum(fractions) == pytest.approx(1.0)
        with pytest.raises(DesignError):
            template.instantiate([(Binding('fraction'), 1.5)])


class TestBinding(BaseTest):

    @pytest.fixture
    def design(self):
        factors = [Factor('pi', Uniform(0.05, 0.15),
                          Binding('failure_probability')),
                   Factor('t', Uniform(10.0, 30.0), Binding('effort', (2,))),
                   Factor('l', Uniform(40.0, 60.0), Binding('labour_rate'))]
        return SensitivityDesign(factors, samples_per_curve=65, resamples=1)

    def test_midpoint_matches_direct_evaluation(self, design):
        template = ScenarioTemplate()
        row = [factor.distribution.midpoint() for factor in design.factors]
        scenario, program = template.instantiate(
            [(Binding('failure_probability'), 0.1),
             (Binding('effort', (2,)), 20.0),
             (Binding('labour_rate'), 50.0)])
        expected = breakdown(program, scenario).roi
        assert bind_and_evaluate(design, row, template) == pytest.approx(
            expected, abs=1e-12)
        assert (bind_and_evaluate(design, row, template, 'net_benefit') ==
                pytest.approx(net_benefit(program, scenario), abs=1e-9))

    def test_unbound_factor(self, design):
        design.factors.append(Factor('free', Uniform(0.0, 1.0)))
        with pytest.raises(DesignError):
            bind_values(design, [0.1, 20.0, 50.0, 0.5], ScenarioTemplate())

    def test_unknown_target(self):
        design = SensitivityDesign(
            [Factor('alpha', Uniform(0.2, 0.6), Binding('fraction'))],
            samples_per_curve=65, resamples=1)
        with pytest.raises(DesignError):
            bind_values(design, [0.4], ScenarioTemplate())
        scenario, _ = bind_values(design, [0.4], PracticalTemplate())
        assert scenario.defect_types[0].fraction == pytest.approx(0.4)

    def test_row_length(self, design):
        with pytest.raises(DesignError):
            bind_values(design, [0.1], ScenarioTemplate())

    def test_unknown_output(self, design):
        with pytest.raises(DesignError):
            TemplateModel(design, ScenarioTemplate(), output='profit')

    def test_practical_study(self):
        study = get_study('practical', output='net_benefit')
        assert study.model.output == 'net_benefit'
        row = [factor.distribution.midpoint()
               for factor in study.design.factors]
        assert np.isfinite(study.model(row))

    def test_abstract_study(self):
        study = get_study('abstract')
        assert len(study.design.factors) == 11
        row = [factor.distribution.midpoint()
               for factor in study.design.factors]
        assert np.isfinite(study.model(row))
        assert len(get_study('detailed').design.factors) == 41
        assert get_study('detailed').design.names[-1] == 'phi_6'
