"""The practical model: averaged quantities per defect type.

Faults are not enumerated one by one. Instead, a `PracticalScenario` holds
the expected number of faults and a distribution over defect types; every sum
over faults becomes ``expected_fault_count * sum_types fraction * (...)``.
Difficulty is linear in effort, a slope of zero marking a defect type the
technique cannot detect. There is no defect propagation.
"""
from dataclasses import dataclass, field
import math

import numpy as np

from qecon.difficulty import Linear
from qecon.economics import execution_cost, roi
from qecon.exceptions import ConfigurationError, InvariantViolationError
from qecon.scenario import (CostBreakdown, DocumentClass, Fault, Scenario,
                            Technique, TECHNIQUE_NAMES)
from qecon.utils.validation import (check_finite, check_non_negative,
                                    check_probability)

__all__ = ['DefectType', 'PracticalTechnique', 'PracticalScenario',
           'practical_direct_single', 'practical_revenues_single',
           'practical_future_single', 'practical_combined',
           'practical_breakdown', 'combined_terms', 'expected_field_cost',
           'expand_practical']

FRACTION_TOLERANCE = 1e-9


@dataclass(frozen=True)
class DefectType(object):
    """A coarse defect category with averaged field costs."""
    id: int
    name: str = ''
    fraction: float = 0.0
    failure_probability: float = 0.0
    avg_field_removal_cost: float = 0.0
    avg_field_effect_cost: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, 'id', int(self.id))
        if not self.name:
            object.__setattr__(self, 'name', 'type {}'.format(self.id))
        object.__setattr__(self, 'fraction',
                           check_probability(self.fraction, 'fraction'))
        object.__setattr__(self, 'failure_probability', check_probability(
            self.failure_probability, 'failure_probability'))
        object.__setattr__(self, 'avg_field_removal_cost', check_non_negative(
            self.avg_field_removal_cost, 'avg_field_removal_cost'))
        object.__setattr__(self, 'avg_field_effect_cost', check_non_negative(
            self.avg_field_effect_cost, 'avg_field_effect_cost'))

    @property
    def field_cost(self):
        return self.avg_field_removal_cost + self.avg_field_effect_cost


@dataclass(frozen=True, eq=False)
class PracticalTechnique(object):
    """A technique with averaged costs and linear difficulty per type."""
    id: int
    name: str = ''
    avg_setup_cost: float = 0.0
    execution_cost_rate: float = None
    avg_removal_cost: dict = field(default_factory=dict)
    difficulty_slope: dict = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, 'id', int(self.id))
        if not self.name:
            object.__setattr__(self, 'name',
                               TECHNIQUE_NAMES.get(self.id, str(self.id)))
        object.__setattr__(self, 'avg_setup_cost', check_non_negative(
            self.avg_setup_cost, 'avg_setup_cost'))
        if self.execution_cost_rate is not None:
            object.__setattr__(self, 'execution_cost_rate', check_non_negative(
                self.execution_cost_rate, 'execution_cost_rate'))
        object.__setattr__(self, 'avg_removal_cost', {
            int(tid): check_non_negative(cost, 'avg_removal_cost')
            for tid, cost in self.avg_removal_cost.items()})
        slopes = {}
        for tid, slope in self.difficulty_slope.items():
            slope = check_finite(slope, 'difficulty_slope')
            if slope > 0:
                raise InvariantViolationError(
                    'Technique {} has positive difficulty slope {} for defect '
                    'type {}'.format(self.id, slope, tid), 'difficulty_slope')
            slopes[int(tid)] = slope
        object.__setattr__(self, 'difficulty_slope', slopes)

    # `execution_cost` and the Technique protocol read `setup_cost`
    @property
    def setup_cost(self):
        return self.avg_setup_cost

    def curve(self, type_id):
        try:
            return Linear(self.difficulty_slope[type_id])
        except KeyError:
            raise ConfigurationError(
                'Technique {} ({}) has no difficulty slope for defect type '
                '{}'.format(self.id, self.name, type_id))

    def removal(self, type_id):
        try:
            return self.avg_removal_cost[type_id]
        except KeyError:
            raise ConfigurationError(
                'Technique {} ({}) has no removal cost for defect type '
                '{}'.format(self.id, self.name, type_id))

    def __repr__(self):
        return '<PracticalTechnique {} ({})>'.format(self.id, self.name)


class PracticalScenario(object):
    """Parameterization of the practical model.

    Parameters
    ----------
    defect_types : iterable of DefectType
        Their fractions must sum to one.
    expected_fault_count : int
        Expected number of faults in the product.
    techniques : iterable of PracticalTechnique
    labour_rate : float, optional, default=0.0

    """
    def __init__(self, defect_types, expected_fault_count, techniques,
                 labour_rate=0.0):
        self.defect_types = tuple(defect_types)
        type_ids = [dt.id for dt in self.defect_types]
        if len(set(type_ids)) != len(type_ids):
            raise InvariantViolationError(
                'Duplicate defect type ids in {}'.format(type_ids),
                'defect type id')
        total = math.fsum(dt.fraction for dt in self.defect_types)
        if self.defect_types and abs(total - 1.0) > FRACTION_TOLERANCE:
            raise InvariantViolationError(
                'Defect type fractions sum to {}, not 1'.format(total),
                'fraction')
        count = check_non_negative(expected_fault_count,
                                   'expected_fault_count')
        if count != int(count):
            raise InvariantViolationError(
                'expected_fault_count must be an integer, got {}'.format(
                    count), 'expected_fault_count')
        self.expected_fault_count = int(count)
        self.labour_rate = check_non_negative(labour_rate, 'labour_rate')
        self.techniques = tuple(techniques)
        technique_ids = [t.id for t in self.techniques]
        if len(set(technique_ids)) != len(technique_ids):
            raise InvariantViolationError(
                'Duplicate technique ids in {}'.format(technique_ids),
                'technique id')
        self._by_id = {t.id: t for t in self.techniques}
        for technique in self.techniques:
            unknown = ((set(technique.avg_removal_cost) |
                        set(technique.difficulty_slope)) - set(type_ids))
            if unknown:
                raise ConfigurationError(
                    'Technique {} references unknown defect types {}'.format(
                        technique.id, sorted(unknown)))
            for type_id in type_ids:
                technique.curve(type_id)
                technique.removal(type_id)

    def technique(self, technique_id):
        try:
            return self._by_id[technique_id]
        except KeyError:
            raise ConfigurationError(
                'Unknown technique {}; scenario defines {}'.format(
                    technique_id, sorted(self._by_id)))

    @property
    def technique_ids(self):
        return tuple(t.id for t in self.techniques)

    def type_counts(self):
        """Expected number of faults per defect type."""
        return np.array([self.expected_fault_count * dt.fraction
                         for dt in self.defect_types])

    def __repr__(self):
        return '<PracticalScenario: {} defect types, {} techniques, ' \
               'id: {}>'.format(len(self.defect_types), len(self.techniques),
                                id(self))


def _type_arrays(technique, t, scenario):
    types = scenario.defect_types
    theta = np.array([technique.curve(dt.id).evaluate(t) for dt in types])
    removal = np.array([technique.removal(dt.id) for dt in types])
    pi = np.array([dt.failure_probability for dt in types])
    field_cost = np.array([dt.field_cost for dt in types])
    return theta, removal, pi, field_cost


def practical_direct_single(tech, t, scenario):
    """Direct costs of one practical application.

    ``u + e(t) + I * sum_types fraction * (1 - theta(type, t)) * v(type)``
    """
    theta, removal, _, _ = _type_arrays(tech, t, scenario)
    return (tech.avg_setup_cost +
            execution_cost(tech, t, scenario.labour_rate) +
            float(np.sum(scenario.type_counts() * (1.0 - theta) * removal)))


def practical_revenues_single(tech, t, scenario):
    """Revenues of one practical application.

    ``I * sum_types fraction * pi(type) * (1 - theta(type, t)) * v_F(type)``
    """
    theta, _, pi, field_cost = _type_arrays(tech, t, scenario)
    return float(np.sum(scenario.type_counts() * pi * (1.0 - theta) *
                        field_cost))


def practical_future_single(tech, t, scenario):
    """Future costs left after one practical application.

    ``I * sum_types fraction * pi(type) * theta(type, t) * v_F(type)``,
    where ``v_F`` includes the field effect costs.
    """
    theta, _, pi, field_cost = _type_arrays(tech, t, scenario)
    return float(np.sum(scenario.type_counts() * pi * theta * field_cost))


def expected_field_cost(scenario):
    """Expected field cost of a practical scenario without any QA."""
    pi = np.array([dt.failure_probability for dt in scenario.defect_types])
    field_cost = np.array([dt.field_cost for dt in scenario.defect_types])
    return float(np.sum(scenario.type_counts() * pi * field_cost))


def combined_terms(program, scenario):
    """Direct costs, future costs and revenues of a practical program."""
    counts = scenario.type_counts()
    pi = np.array([dt.failure_probability for dt in scenario.defect_types])
    field_cost = np.array([dt.field_cost for dt in scenario.defect_types])
    for technique_id in program.techniques:
        scenario.technique(technique_id)
    residual = np.ones(len(scenario.defect_types))
    direct = revenue = 0.0
    for app in program.active():
        tech = scenario.technique(app.technique)
        theta, removal, _, _ = _type_arrays(tech, app.effort, scenario)
        direct += (tech.avg_setup_cost +
                   execution_cost(tech, app.effort, scenario.labour_rate) +
                   float(np.sum(counts * (1.0 - theta) * residual * removal)))
        revenue += float(np.sum(counts * pi * (1.0 - theta) * residual *
                                field_cost))
        residual = residual * theta
    future = float(np.sum(counts * pi * residual * field_cost))
    return direct, future, revenue


def practical_combined(program, scenario):
    """Combined direct costs, future costs, revenues and ROI of a program.

    Parameters
    ----------
    program : Program
    scenario : PracticalScenario

    Returns
    -------
    CostBreakdown

    Raises
    ------
    UndefinedROIError
        If the program leaves direct plus future costs at zero.

    """
    direct, future, revenue = combined_terms(program, scenario)
    return CostBreakdown(direct=direct, future=future, revenue=revenue,
                         roi=roi(direct, future, revenue))


def practical_breakdown(program, scenario):
    """Alias of `practical_combined` matching `cost_breakdown`."""
    return practical_combined(program, scenario)


def expand_practical(scenario, mode='aggregate'):
    """Expand a practical scenario into an explicit ideal `Scenario`.

    Parameters
    ----------
    scenario : PracticalScenario
    mode : str, optional, default='aggregate'
        ``'aggregate'`` creates one representative fault per defect type whose
        costs are scaled by the expected count of that type. ``'individual'``
        creates ``expected_fault_count * fraction`` unscaled faults per type
        and requires every such count to be integral.

    Returns
    -------
    scenario : Scenario
    fault_types : dict of int -> int
        Defect type id of every generated fault id.

    Raises
    ------
    ConfigurationError
        In individual mode when a per-type count is not integral.

    """
    if mode not in ('aggregate', 'individual'):
        raise ValueError("mode must be 'aggregate' or 'individual', got "
                         "{!r}".format(mode))
    faults, fault_types, scales = [], {}, {}
    for dt, count in zip(scenario.defect_types, scenario.type_counts()):
        if mode == 'aggregate':
            copies, scale = 1, count
        else:
            copies = int(round(count))
            if abs(copies - count) > FRACTION_TOLERANCE:
                raise ConfigurationError(
                    'Defect type {} expects {} faults; individual expansion '
                    'needs integral counts'.format(dt.id, count))
            scale = 1.0
        for _ in range(copies):
            fault_id = len(faults)
            faults.append(Fault(
                id=fault_id, doc_class=DocumentClass.CODE,
                failure_probability=dt.failure_probability,
                field_removal_cost=scale * dt.avg_field_removal_cost,
                field_effect_cost=scale * dt.avg_field_effect_cost))
            fault_types[fault_id] = dt.id
            scales[fault_id] = scale
    techniques = []
    for tech in scenario.techniques:
        techniques.append(Technique(
            id=tech.id, name=tech.name, setup_cost=tech.avg_setup_cost,
            execution_cost_rate=tech.execution_cost_rate,
            removal_cost={fid: scales[fid] * tech.removal(tid)
                          for fid, tid in fault_types.items()},
            difficulty={fid: tech.curve(tid)
                        for fid, tid in fault_types.items()}))
    return (Scenario(faults, techniques, labour_rate=scenario.labour_rate),
            fault_types)
