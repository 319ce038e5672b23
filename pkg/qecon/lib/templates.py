"""Scenario templates that sensitivity factors are bound into.

A template holds nominal values for every quantity a factor may vary and
turns a list of ``(Binding, value)`` assignments into a concrete scenario and
program. The shipped nominal values describe a synthetic project of about
1000 lines of code with a dozen faults and the seven canonical techniques;
they are placeholders, not survey data.
"""
from copy import deepcopy

from qecon.difficulty import Linear, calibrate, form_from_code
from qecon.exceptions import DesignError
from qecon.practical import DefectType, PracticalScenario, PracticalTechnique
from qecon.scenario import DocumentClass, Fault, Program, Scenario, Technique

__all__ = ['ScenarioTemplate', 'PracticalTemplate', 'template_from_dict',
           'CANONICAL_TECHNIQUES', 'DEFAULT_SEQUENCES']

CANONICAL_TECHNIQUES = (0, 1, 2, 3, 4, 5, 6)

R, D, C, T = (DocumentClass.REQUIREMENTS, DocumentClass.DESIGN,
              DocumentClass.CODE, DocumentClass.TEST_SPEC)

DEFAULT_CAPABILITIES = {
    0: (R,),
    1: (D,),
    2: (C,),
    3: (C,),
    4: (C, T),
    5: (D, C, T),
    6: (R, D, C, T),
}

DEFAULT_LAYOUTS = (
    (R, R, R, D, D, D, C, C, C, C, T, T),
    (R, R, R, R, R, D, D, D, D, C, C, T),
    (R, D, D, C, C, C, C, C, C, C, T, T),
)

# the last three orders are deliberately unusual, system test first included
DEFAULT_SEQUENCES = (
    (0, 1, 2, 3, 4, 5, 6),
    (0, 1, 3, 2, 4, 5, 6),
    (1, 0, 2, 3, 4, 5, 6),
    (0, 1, 2, 3, 6, 5, 4),
    (2, 3, 0, 1, 4, 5, 6),
    (4, 5, 6, 0, 1, 2, 3),
    (6, 5, 4, 3, 2, 1, 0),
)


def _per_technique(values, techniques):
    return {tid: values[tid] for tid in techniques}


def _choice(options, value, target):
    index = int(round(value))
    if not 0 <= index < len(options):
        raise DesignError('{} index {} outside 0-{}'.format(
            target, index, len(options) - 1))
    return options[index]


class _Template(object):
    """Shared assignment logic of both templates."""
    scalar_targets = frozenset()
    technique_targets = frozenset()

    @property
    def targets(self):
        return self.scalar_targets | self.technique_targets

    def _assign(self, assignments):
        params = deepcopy(self.nominal)
        for binding, value in assignments:
            target = binding.target
            if target in self.technique_targets:
                techniques = binding.techniques or self.techniques
                for tid in techniques:
                    if tid not in params[target]:
                        raise DesignError(
                            'Binding of {!r} names technique {} outside the '
                            'template techniques {}'.format(
                                target, tid, list(self.techniques)))
                    params[target][tid] = value
            elif target in self.scalar_targets:
                params[target] = value
            else:
                raise DesignError('Unknown template target {!r}'.format(
                    target))
        return params

    def nominal_instance(self):
        """Scenario and program at the nominal values."""
        return self.instantiate([])

    def to_dict(self):
        data = {'kind': self.kind}
        data.update(deepcopy(self.nominal))
        return data


class ScenarioTemplate(_Template):
    """Template of the ideal model.

    Parameters
    ----------
    class_layouts : sequence of sequence of DocumentClass
        Alternative assignments of faults to document classes, ordered from
        requirements to test specifications. All layouts have the same length,
        the number of faults.
    sequences : sequence of sequence of int
        Alternative technique orders.
    techniques : sequence of int
    capabilities : dict of int -> sequence of DocumentClass
    calibration_effort : float
        Effort range the mean difficulty refers to.
    **nominal
        Nominal value of every binding target; per-technique targets take a
        dict keyed by technique id.

    """
    kind = 'ideal'
    scalar_targets = frozenset({
        'class_layout', 'predecessors', 'failure_probability',
        'field_removal_cost', 'field_effect_cost', 'sequence', 'labour_rate'})
    technique_targets = frozenset({
        'effort', 'setup_cost', 'removal_cost', 'theta_mean', 'form'})

    def __init__(self, class_layouts=DEFAULT_LAYOUTS,
                 sequences=DEFAULT_SEQUENCES, techniques=CANONICAL_TECHNIQUES,
                 capabilities=None, calibration_effort=40.0, **nominal):
        self.class_layouts = tuple(
            tuple(DocumentClass.parse(c) for c in layout)
            for layout in class_layouts)
        if len({len(layout) for layout in self.class_layouts}) != 1:
            raise DesignError('All class layouts need the same fault count')
        for layout in self.class_layouts:
            ranks = [c.rank for c in layout]
            if ranks != sorted(ranks):
                raise DesignError('Class layouts must list faults from '
                                  'requirements to code and test specs')
        self.sequences = tuple(tuple(int(t) for t in s) for s in sequences)
        self.techniques = tuple(int(t) for t in techniques)
        for sequence in self.sequences:
            if sorted(sequence) != sorted(self.techniques):
                raise DesignError('Sequence {} is not a permutation of the '
                                  'template techniques'.format(sequence))
        capabilities = capabilities or DEFAULT_CAPABILITIES
        self.capabilities = {
            int(tid): tuple(DocumentClass.parse(c) for c in capabilities[tid])
            for tid in self.techniques}
        self.calibration_effort = float(calibration_effort)
        defaults = {
            'class_layout': 0,
            'predecessors': 1,
            'failure_probability': 0.1,
            'field_removal_cost': 2000.0,
            'field_effect_cost': 0.0,
            'sequence': 0,
            'labour_rate': 50.0,
            'effort': {0: 8.0, 1: 12.0, 2: 4.0, 3: 16.0, 4: 24.0, 5: 24.0,
                       6: 40.0},
            'setup_cost': {0: 100.0, 1: 100.0, 2: 300.0, 3: 100.0, 4: 200.0,
                           5: 300.0, 6: 400.0},
            'removal_cost': {0: 40.0, 1: 60.0, 2: 80.0, 3: 80.0, 4: 120.0,
                             5: 200.0, 6: 300.0},
            'theta_mean': {0: 0.6, 1: 0.6, 2: 0.7, 3: 0.5, 4: 0.6, 5: 0.6,
                           6: 0.5},
            'form': {0: 1, 1: 1, 2: 1, 3: 1, 4: 1, 5: 1, 6: 1},
        }
        unknown = set(nominal) - self.targets
        if unknown:
            raise DesignError('Unknown nominal values {}'.format(
                sorted(unknown)))
        defaults.update(nominal)
        for target in self.technique_targets:
            values = {int(k): v for k, v in defaults[target].items()}
            missing = set(self.techniques) - set(values)
            if missing:
                raise DesignError('Nominal {!r} lacks techniques {}'.format(
                    target, sorted(missing)))
            defaults[target] = _per_technique(values, self.techniques)
        self.nominal = defaults

    @property
    def fault_count(self):
        return len(self.class_layouts[0])

    @staticmethod
    def _predecessors(layout, position, count):
        rank = layout[position].rank
        candidates = [j for j in range(position) if layout[j].rank < rank]
        return candidates[max(0, len(candidates) - count):] if count else []

    def instantiate(self, assignments):
        """Build ``(Scenario, Program)`` from ``(Binding, value)`` pairs."""
        params = self._assign(assignments)
        layout = _choice(self.class_layouts, params['class_layout'],
                         'class_layout')
        count = int(round(params['predecessors']))
        if count < 0:
            raise DesignError('predecessors must be non-negative, got '
                              '{}'.format(count))
        faults = [Fault(id=k, doc_class=layout[k],
                        predecessors=self._predecessors(layout, k, count),
                        failure_probability=params['failure_probability'],
                        field_removal_cost=params['field_removal_cost'],
                        field_effect_cost=params['field_effect_cost'])
                  for k in range(len(layout))]
        techniques = []
        for tid in self.techniques:
            form = form_from_code(params['form'][tid])
            curve = calibrate(form, params['theta_mean'][tid],
                              self.calibration_effort)
            capable = [f for f in faults
                       if f.doc_class in self.capabilities[tid]]
            techniques.append(Technique(
                id=tid, setup_cost=params['setup_cost'][tid],
                capable_classes=self.capabilities[tid],
                removal_cost={f.id: params['removal_cost'][tid]
                              for f in capable},
                difficulty={f.id: curve for f in capable}))
        scenario = Scenario(faults, techniques,
                            labour_rate=params['labour_rate'])
        sequence = _choice(self.sequences, params['sequence'], 'sequence')
        program = Program([(tid, params['effort'][tid]) for tid in sequence])
        return scenario, program

    def to_dict(self):
        data = super(ScenarioTemplate, self).to_dict()
        data.update({
            'class_layouts': [[c.value for c in layout]
                              for layout in self.class_layouts],
            'sequences': [list(s) for s in self.sequences],
            'techniques': list(self.techniques),
            'capabilities': {tid: [c.value for c in classes]
                             for tid, classes in self.capabilities.items()},
            'calibration_effort': self.calibration_effort,
        })
        return data


DEFAULT_DEFECT_TYPES = (
    DefectType(0, 'function', 0.4, 0.1, 2000.0),
    DefectType(1, 'interface', 0.3, 0.1, 2000.0),
    DefectType(2, 'checking', 0.2, 0.1, 2000.0),
    DefectType(3, 'assignment', 0.1, 0.1, 2000.0),
)

DEFAULT_DETECTABLE = {
    0: (0, 1),
    1: (0, 1, 2),
    2: (2, 3),
    3: (0, 2, 3),
    4: (0, 2, 3),
    5: (1, 2),
    6: (0, 1),
}


class PracticalTemplate(_Template):
    """Template of the practical model.

    The ``fraction`` target sets the share of the first defect type; the
    other types keep their nominal proportions of the remainder.
    """
    kind = 'practical'
    scalar_targets = frozenset({
        'failure_probability', 'field_removal_cost', 'fraction',
        'labour_rate', 'sequence'})
    technique_targets = frozenset({
        'effort', 'setup_cost', 'removal_cost', 'theta_mean'})

    def __init__(self, defect_types=DEFAULT_DEFECT_TYPES,
                 expected_fault_count=15, detectable=None,
                 sequences=DEFAULT_SEQUENCES, techniques=CANONICAL_TECHNIQUES,
                 calibration_effort=40.0, **nominal):
        self.defect_types = tuple(defect_types)
        if len(self.defect_types) < 2:
            raise DesignError('A practical template needs two defect types')
        self.expected_fault_count = int(expected_fault_count)
        self.techniques = tuple(int(t) for t in techniques)
        detectable = detectable or DEFAULT_DETECTABLE
        self.detectable = {tid: tuple(detectable[tid])
                           for tid in self.techniques}
        self.sequences = tuple(tuple(int(t) for t in s) for s in sequences)
        for sequence in self.sequences:
            if sorted(sequence) != sorted(self.techniques):
                raise DesignError('Sequence {} is not a permutation of the '
                                  'template techniques'.format(sequence))
        self.calibration_effort = float(calibration_effort)
        first = self.defect_types[0]
        defaults = {
            'failure_probability': first.failure_probability,
            'field_removal_cost': first.avg_field_removal_cost,
            'fraction': first.fraction,
            'labour_rate': 50.0,
            'sequence': 0,
            'effort': {0: 8.0, 1: 12.0, 2: 4.0, 3: 16.0, 4: 24.0, 5: 24.0,
                       6: 40.0},
            'setup_cost': {0: 100.0, 1: 100.0, 2: 300.0, 3: 100.0, 4: 200.0,
                           5: 300.0, 6: 400.0},
            'removal_cost': {0: 40.0, 1: 60.0, 2: 80.0, 3: 80.0, 4: 120.0,
                             5: 200.0, 6: 300.0},
            'theta_mean': {0: 0.6, 1: 0.6, 2: 0.7, 3: 0.5, 4: 0.6, 5: 0.6,
                           6: 0.5},
        }
        unknown = set(nominal) - self.targets
        if unknown:
            raise DesignError('Unknown nominal values {}'.format(
                sorted(unknown)))
        defaults.update(nominal)
        for target in self.technique_targets:
            values = {int(k): v for k, v in defaults[target].items()}
            defaults[target] = _per_technique(values, self.techniques)
        self.nominal = defaults

    def _fractions(self, alpha):
        if not 0.0 <= alpha <= 1.0:
            raise DesignError('fraction must lie in [0, 1], got {}'.format(
                alpha))
        rest = sum(dt.fraction for dt in self.defect_types[1:])
        return [alpha] + [(1.0 - alpha) * dt.fraction / rest
                          for dt in self.defect_types[1:]]

    def instantiate(self, assignments):
        """Build ``(PracticalScenario, Program)`` from assignments."""
        params = self._assign(assignments)
        fractions = self._fractions(params['fraction'])
        types = [DefectType(id=dt.id, name=dt.name, fraction=fraction,
                            failure_probability=params['failure_probability'],
                            avg_field_removal_cost=params['field_removal_cost'],
                            avg_field_effect_cost=dt.avg_field_effect_cost)
                 for dt, fraction in zip(self.defect_types, fractions)]
        techniques = []
        for tid in self.techniques:
            curve = calibrate(Linear, params['theta_mean'][tid],
                              self.calibration_effort)
            slope = curve.m if isinstance(curve, Linear) else 0.0
            techniques.append(PracticalTechnique(
                id=tid, avg_setup_cost=params['setup_cost'][tid],
                avg_removal_cost={dt.id: params['removal_cost'][tid]
                                  for dt in types},
                difficulty_slope={dt.id: slope if dt.id in self.detectable[tid]
                                  else 0.0 for dt in types}))
        scenario = PracticalScenario(types, self.expected_fault_count,
                                     techniques,
                                     labour_rate=params['labour_rate'])
        sequence = _choice(self.sequences, params['sequence'], 'sequence')
        program = Program([(tid, params['effort'][tid]) for tid in sequence])
        return scenario, program

    def to_dict(self):
        data = super(PracticalTemplate, self).to_dict()
        data.update({
            'defect_types': [{'id': dt.id, 'name': dt.name,
                              'fraction': dt.fraction,
                              'failure_probability': dt.failure_probability,
                              'avg_field_removal_cost':
                                  dt.avg_field_removal_cost,
                              'avg_field_effect_cost':
                                  dt.avg_field_effect_cost}
                             for dt in self.defect_types],
            'expected_fault_count': self.expected_fault_count,
            'detectable': {tid: list(types)
                           for tid, types in self.detectable.items()},
            'sequences': [list(s) for s in self.sequences],
            'techniques': list(self.techniques),
            'calibration_effort': self.calibration_effort,
        })
        return data


_TEMPLATES = {ScenarioTemplate.kind: ScenarioTemplate,
              PracticalTemplate.kind: PracticalTemplate}


def template_from_dict(data):
    """Template from ``{'kind': 'ideal' | 'practical', <overrides>}``."""
    data = dict(data or {})
    kind = data.pop('kind', 'ideal')
    try:
        cls = _TEMPLATES[kind]
    except KeyError:
        raise DesignError('Unknown template kind {!r}; expected one of '
                          '{}'.format(kind, sorted(_TEMPLATES)))
    if 'defect_types' in data:
        data['defect_types'] = [DefectType(**dt)
                                for dt in data['defect_types']]
    try:
        return cls(**data)
    except TypeError as error:
        raise DesignError('Invalid template parameters: {}'.format(error))
