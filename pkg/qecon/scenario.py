"""Value types of the ideal model: faults, techniques, programs, scenarios."""
from collections import namedtuple
from dataclasses import dataclass, field, replace
from enum import Enum
import math

from qecon.difficulty import Constant, DifficultyCurve, UNDETECTABLE
from qecon.exceptions import ConfigurationError, InvariantViolationError
from qecon.propagation import PropagationGraph
from qecon.utils.validation import (check_finite, check_non_negative,
                                    check_probability)

__all__ = ['DocumentClass', 'Fault', 'Technique', 'Application', 'Program',
           'Scenario', 'CostBreakdown', 'TECHNIQUE_NAMES']

TECHNIQUE_NAMES = {
    0: 'requirements inspection',
    1: 'design inspection',
    2: 'static analysis',
    3: 'code inspection',
    4: 'unit test',
    5: 'integration test',
    6: 'system test',
}


class DocumentClass(Enum):
    """The document a fault lives in."""
    REQUIREMENTS = 'requirements'
    DESIGN = 'design'
    CODE = 'code'
    TEST_SPEC = 'test_spec'

    @property
    def rank(self):
        """Position in the propagation order requirements -> design ->
        {code, test_spec}."""
        return _CLASS_RANKS[self]

    @classmethod
    def parse(cls, value):
        if isinstance(value, cls):
            return value
        try:
            return cls(value)
        except ValueError:
            raise InvariantViolationError(
                'Unknown document class {!r}; expected one of {}'.format(
                    value, [member.value for member in cls]), 'doc_class')


_CLASS_RANKS = {
    DocumentClass.REQUIREMENTS: 0,
    DocumentClass.DESIGN: 1,
    DocumentClass.CODE: 2,
    DocumentClass.TEST_SPEC: 2,
}

ALL_CLASSES = frozenset(DocumentClass)


def _check_id(value, rule):
    try:
        valid = (not isinstance(value, bool) and int(value) == value and
                 value >= 0)
    except (TypeError, ValueError):
        valid = False
    if not valid:
        raise InvariantViolationError(
            '{} must be a non-negative integer, got {!r}'.format(rule, value),
            rule)
    return int(value)


@dataclass(frozen=True)
class Fault(object):
    """A single fault of the ideal model.

    Parameters
    ----------
    id : int
    doc_class : DocumentClass or str
    predecessors : iterable of int
        Faults this fault was derived from.
    failure_probability : float
        Probability the fault causes a field failure, in [0, 1].
    field_removal_cost : float
        Cost of removing the fault after release.
    field_effect_cost : float
        Further cost a field failure causes (e.g. lost sales).

    """
    id: int
    doc_class: DocumentClass
    predecessors: frozenset = frozenset()
    failure_probability: float = 0.0
    field_removal_cost: float = 0.0
    field_effect_cost: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, 'id', _check_id(self.id, 'fault id'))
        object.__setattr__(self, 'doc_class',
                           DocumentClass.parse(self.doc_class))
        predecessors = frozenset(_check_id(p, 'predecessors')
                                 for p in self.predecessors)
        if self.id in predecessors:
            raise InvariantViolationError(
                'Fault {} lists itself as predecessor'.format(self.id),
                'predecessors')
        object.__setattr__(self, 'predecessors', predecessors)
        object.__setattr__(self, 'failure_probability', check_probability(
            self.failure_probability, 'failure_probability'))
        object.__setattr__(self, 'field_removal_cost', check_non_negative(
            self.field_removal_cost, 'field_removal_cost'))
        object.__setattr__(self, 'field_effect_cost', check_non_negative(
            self.field_effect_cost, 'field_effect_cost'))

    @property
    def field_cost(self):
        """Field removal plus field effect cost."""
        return self.field_removal_cost + self.field_effect_cost


@dataclass(frozen=True, eq=False)
class Technique(object):
    """A defect-detection technique of the ideal model.

    Parameters
    ----------
    id : int
        Technique code, 0-6 for the canonical techniques.
    name : str
    setup_cost : float
    removal_cost : dict of int -> float
        In-house removal cost per fault id.
    difficulty : dict of int -> DifficultyCurve
        Difficulty curve per fault id.
    capable_classes : iterable of DocumentClass, optional
        Document classes the technique can inspect. Defaults to all.
    execution_cost_rate : float, optional
        Cost per person-hour; None defers to the scenario labour rate.

    """
    id: int
    name: str = ''
    setup_cost: float = 0.0
    removal_cost: dict = field(default_factory=dict)
    difficulty: dict = field(default_factory=dict)
    capable_classes: frozenset = ALL_CLASSES
    execution_cost_rate: float = None

    def __post_init__(self):
        object.__setattr__(self, 'id', _check_id(self.id, 'technique id'))
        if not self.name:
            object.__setattr__(self, 'name',
                               TECHNIQUE_NAMES.get(self.id, str(self.id)))
        object.__setattr__(self, 'setup_cost',
                           check_non_negative(self.setup_cost, 'setup_cost'))
        if self.execution_cost_rate is not None:
            object.__setattr__(self, 'execution_cost_rate', check_non_negative(
                self.execution_cost_rate, 'execution_cost_rate'))
        object.__setattr__(self, 'capable_classes', frozenset(
            DocumentClass.parse(c) for c in self.capable_classes))
        object.__setattr__(self, 'removal_cost', {
            _check_id(fid, 'removal_cost'):
                check_non_negative(cost, 'removal_cost')
            for fid, cost in self.removal_cost.items()})
        for fid, curve in self.difficulty.items():
            if not isinstance(curve, DifficultyCurve):
                raise InvariantViolationError(
                    'Technique {} holds a non-curve difficulty for fault '
                    '{}: {!r}'.format(self.id, fid, curve), 'difficulty')
        object.__setattr__(self, 'difficulty', dict(self.difficulty))

    def curve(self, fault_id):
        try:
            return self.difficulty[fault_id]
        except KeyError:
            raise ConfigurationError(
                'Technique {} ({}) has no difficulty curve for fault '
                '{}'.format(self.id, self.name, fault_id))

    def removal(self, fault_id):
        try:
            return self.removal_cost[fault_id]
        except KeyError:
            raise ConfigurationError(
                'Technique {} ({}) has no removal cost for fault {}'.format(
                    self.id, self.name, fault_id))

    def can_inspect(self, doc_class):
        return doc_class in self.capable_classes

    def __repr__(self):
        return '<Technique {} ({})>'.format(self.id, self.name)


Application = namedtuple('Application', ['technique', 'effort'])


class Program(object):
    """An ordered sequence of technique applications.

    Parameters
    ----------
    applications : iterable of (int, float)
        ``(technique id, effort in person-hours)`` pairs in execution order.
        A zero effort keeps the technique in the sequence but skips it.

    """
    def __init__(self, applications=()):
        checked = []
        for technique, effort in applications:
            checked.append(Application(
                _check_id(technique, 'technique id'),
                check_non_negative(effort, 'effort')))
        self._applications = tuple(checked)

    @property
    def applications(self):
        return self._applications

    def active(self):
        """Applications with a positive effort, in order."""
        return tuple(app for app in self._applications if app.effort > 0)

    @property
    def total_effort(self):
        return math.fsum(app.effort for app in self._applications)

    @property
    def techniques(self):
        return tuple(app.technique for app in self._applications)

    def efforts(self):
        return {app.technique: app.effort for app in self._applications}

    def sort_key(self):
        return self._applications

    def __len__(self):
        return len(self._applications)

    def __iter__(self):
        return iter(self._applications)

    def __eq__(self, other):
        return (isinstance(other, Program) and
                self._applications == other._applications)

    def __hash__(self):
        return hash(self._applications)

    def __repr__(self):
        return 'Program({})'.format(', '.join(
            '{}:{:g}'.format(*app) for app in self._applications))


class Scenario(object):
    """The complete parameterization of the ideal model.

    Techniques are normalized on construction: an omitted execution rate
    becomes the labour rate, faults outside a technique's capable classes get
    ``Constant(1.0)`` and a zero removal cost when they are missing.

    Parameters
    ----------
    faults : iterable of Fault
    techniques : iterable of Technique
    labour_rate : float, optional, default=0.0
        Cost per person-hour.

    Raises
    ------
    InvariantViolationError
        On duplicate ids, cyclic or misordered predecessors, or a detectable
        curve declared for a fault the technique cannot inspect.
    ConfigurationError
        When a technique lacks a curve or removal cost for a fault it can
        inspect.

    """
    def __init__(self, faults, techniques, labour_rate=0.0):
        self.labour_rate = check_non_negative(labour_rate, 'labour_rate')
        self.faults = tuple(faults)
        fault_ids = [fault.id for fault in self.faults]
        if len(set(fault_ids)) != len(fault_ids):
            raise InvariantViolationError(
                'Duplicate fault ids in {}'.format(fault_ids), 'fault id')
        self.graph = PropagationGraph(self.faults)
        techniques = [self._normalize(t) for t in techniques]
        technique_ids = [t.id for t in techniques]
        if len(set(technique_ids)) != len(technique_ids):
            raise InvariantViolationError(
                'Duplicate technique ids in {}'.format(technique_ids),
                'technique id')
        self.techniques = tuple(techniques)
        self._by_id = {t.id: t for t in self.techniques}
        self._fault_index = {fid: pos for pos, fid in enumerate(fault_ids)}
        self._closure = None

    def _normalize(self, technique):
        removal = dict(technique.removal_cost)
        difficulty = dict(technique.difficulty)
        known = {fault.id for fault in self.faults}
        for fid in set(removal) | set(difficulty):
            if fid not in known:
                raise ConfigurationError(
                    'Technique {} references unknown fault {}'.format(
                        technique.id, fid))
        for fault in self.faults:
            if technique.can_inspect(fault.doc_class):
                technique.curve(fault.id)
                technique.removal(fault.id)
                continue
            curve = difficulty.setdefault(fault.id, UNDETECTABLE)
            if curve != Constant(1.0):
                raise InvariantViolationError(
                    'Technique {} cannot inspect {} documents, so its curve '
                    'for fault {} must be Constant(1.0), got {}'.format(
                        technique.id, fault.doc_class.value, fault.id, curve),
                    'capable_classes')
            removal.setdefault(fault.id, 0.0)
        rate = technique.execution_cost_rate
        if rate is None:
            rate = self.labour_rate
        return replace(technique, removal_cost=removal, difficulty=difficulty,
                       execution_cost_rate=rate)

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

    @property
    def fault_ids(self):
        return tuple(fault.id for fault in self.faults)

    def fault_position(self, fault_id):
        try:
            return self._fault_index[fault_id]
        except KeyError:
            raise ConfigurationError('Unknown fault {}'.format(fault_id))

    @property
    def closure(self):
        """Reflexive transitive predecessor matrix over `faults`."""
        if self._closure is None:
            self._closure = self.graph.closure_matrix(self.fault_ids)
        return self._closure

    @property
    def has_predecessors(self):
        return self.graph.number_of_edges() > 0

    def __repr__(self):
        return '<Scenario: {} faults, {} techniques, id: {}>'.format(
            len(self.faults), len(self.techniques), id(self))


@dataclass(frozen=True)
class CostBreakdown(object):
    """Costs and revenues of one evaluated program.

    `revenue` covers every fault removed, detected itself or together with
    an ancestor. `screened` is the part of `revenue` due to the latter and
    is zero without propagation.
    """
    direct: float
    future: float
    revenue: float
    roi: float
    screened: float = 0.0

    @property
    def net_benefit(self):
        return self.revenue - self.direct
