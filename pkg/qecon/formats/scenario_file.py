"""Read and write qecon scenario files.

A scenario file is one YAML document::

    schema_version: '1.0'
    model: ideal                  # or practical
    scenario: {...}               # faults and techniques, or defect types
    program: '4:5.0,6:10.0'       # optional, ID:EFFORT in execution order
    constraints: {...}            # optional, for the optimizer
    design: {...}                 # optional, a sensitivity design

Every section is validated on load. Errors name the offending position in
the document tree, e.g. ``scenario.faults[2].failure_probability``, or the
line and column for malformed YAML.
"""
from dataclasses import dataclass

import yaml

from qecon.difficulty import DifficultyCurve
from qecon.exceptions import (ConstraintError, DesignError, InputError,
                              InvariantViolationError, ScenarioFileError,
                              ScenarioSyntaxError, SchemaVersionError,
                              UnknownKeyError, UnresolvedReferenceError)
from qecon.lib.templates import template_from_dict
from qecon.optimize import Constraints
from qecon.practical import DefectType, PracticalScenario, PracticalTechnique
from qecon.scenario import DocumentClass, Fault, Program, Scenario, Technique
from qecon.sensitivity.benchmarks import BENCHMARKS
from qecon.sensitivity.binding import Binding
from qecon.sensitivity.distributions import distribution_from_dict
from qecon.sensitivity.efast import Factor, SensitivityDesign

__all__ = ['ScenarioFile', 'SCHEMA_VERSION', 'MODELS', 'load_scenario',
           'parse_scenario', 'dump_scenario', 'save_scenario',
           'parse_program', 'format_program', 'check_program']

SCHEMA_VERSION = '1.0'
MODELS = ('ideal', 'practical')


@dataclass
class ScenarioFile(object):
    """In-memory content of a scenario file.

    Attributes
    ----------
    schema_version : str
    model : str
        ``'ideal'`` or ``'practical'``.
    scenario : Scenario or PracticalScenario, optional
    program : Program, optional
    constraints : Constraints, optional
    effort_grid : tuple of float, optional
        Efforts the exhaustive optimizer tries for techniques without
        allowed levels.
    design : SensitivityDesign, optional
    benchmark : str, optional
        Name of a benchmark function the design is evaluated on instead of
        the template.

    """
    schema_version: str = SCHEMA_VERSION
    model: str = 'ideal'
    scenario: object = None
    program: Program = None
    constraints: Constraints = None
    effort_grid: tuple = None
    design: SensitivityDesign = None
    benchmark: str = None


def _relocate(error, path):
    """Copy of `error` with `path` prefixed to its message."""
    if isinstance(error, ScenarioFileError):
        return error
    message = '{}: {}'.format(path, error)
    if isinstance(error, InvariantViolationError):
        return InvariantViolationError(message, error.rule)
    return type(error)(message)


class _Node(object):
    """A mapping of the document together with its path.

    Keys are consumed with `get`/`require`; `finish` rejects any key that was
    never consumed.
    """
    def __init__(self, data, path):
        if not isinstance(data, dict):
            raise InvariantViolationError(
                '{}: expected a mapping, got {!r}'.format(path, data), path)
        self.data = data
        self.path = path
        self._seen = set()

    def child(self, key):
        return '{}.{}'.format(self.path, key) if self.path else key

    def has(self, key):
        return key in self.data

    def get(self, key, default=None):
        self._seen.add(key)
        return self.data.get(key, default)

    def require(self, key):
        if key not in self.data:
            raise InvariantViolationError(
                '{}: missing required key {!r}'.format(
                    self.path or 'document', key), key)
        return self.get(key)

    def mapping(self, key, required=False):
        value = self.require(key) if required else self.get(key)
        if value is None:
            return None
        return _Node(value, self.child(key))

    def sequence(self, key, required=False):
        value = self.require(key) if required else self.get(key, [])
        if value is None:
            value = []
        if not isinstance(value, list):
            raise InvariantViolationError(
                '{}: expected a list, got {!r}'.format(self.child(key), value),
                key)
        return value

    def finish(self):
        unknown = sorted(set(self.data) - self._seen, key=str)
        if unknown:
            raise UnknownKeyError(
                '{}: unknown key {!r}'.format(self.path or 'document',
                                              unknown[0]), unknown[0])


def _identifier(value, path):
    try:
        valid = (not isinstance(value, bool) and int(value) == float(value)
                 and int(value) >= 0)
    except (TypeError, ValueError):
        valid = False
    if not valid:
        raise InvariantViolationError(
            '{}: expected a non-negative integer id, got {!r}'.format(
                path, value), path)
    return int(value)


def _id_map(value, path, known, kind):
    """Mapping of `known` ids to values, with unknown ids rejected."""
    if value is None:
        return {}
    if not isinstance(value, dict):
        raise InvariantViolationError(
            '{}: expected a mapping of {} ids, got {!r}'.format(
                path, kind, value), path)
    result = {}
    for key, item in value.items():
        identifier = _identifier(key, '{}[{!r}]'.format(path, key))
        if identifier not in known:
            raise UnresolvedReferenceError(
                '{}: {} {} is not defined'.format(path, kind, identifier),
                identifier)
        result[identifier] = item
    return result


def _build(path, factory, *args, **kwargs):
    try:
        return factory(*args, **kwargs)
    except ScenarioFileError:
        raise
    except InputError as error:
        raise _relocate(error, path) from error


def _curve(data, path):
    if isinstance(data, DifficultyCurve):
        return data
    if not isinstance(data, dict):
        raise InvariantViolationError(
            '{}: expected a difficulty curve mapping, got {!r}'.format(
                path, data), 'difficulty')
    return _build(path, DifficultyCurve.from_dict, data)


def _parse_faults(node):
    faults = []
    entries = node.sequence('faults', required=True)
    for k, entry in enumerate(entries):
        item = _Node(entry, '{}[{}]'.format(node.child('faults'), k))
        fault = _build(
            item.path, Fault,
            id=_identifier(item.require('id'), item.child('id')),
            doc_class=_build(item.child('doc_class'), DocumentClass.parse,
                             item.require('doc_class')),
            predecessors=[_identifier(p, item.child('predecessors'))
                          for p in item.sequence('predecessors')],
            failure_probability=item.get('failure_probability', 0.0),
            field_removal_cost=item.get('field_removal_cost', 0.0),
            field_effect_cost=item.get('field_effect_cost', 0.0))
        item.finish()
        faults.append(fault)
    known = {f.id for f in faults}
    for k, fault in enumerate(faults):
        for predecessor in sorted(fault.predecessors):
            if predecessor not in known:
                raise UnresolvedReferenceError(
                    '{}[{}].predecessors: fault {} is not defined'.format(
                        node.child('faults'), k, predecessor), predecessor)
    return faults


def _parse_ideal(node):
    faults = _parse_faults(node)
    known = {f.id for f in faults}
    techniques = []
    for k, entry in enumerate(node.sequence('techniques', required=True)):
        item = _Node(entry, '{}[{}]'.format(node.child('techniques'), k))
        removal = _id_map(item.get('removal_cost'),
                          item.child('removal_cost'), known, 'fault')
        curves = _id_map(item.get('difficulty'), item.child('difficulty'),
                         known, 'fault')
        curves = {fid: _curve(curve, '{}[{}]'.format(
            item.child('difficulty'), fid)) for fid, curve in curves.items()}
        kwargs = {}
        if item.has('capable_classes'):
            kwargs['capable_classes'] = [
                _build(item.child('capable_classes'), DocumentClass.parse, c)
                for c in item.sequence('capable_classes')]
        technique = _build(
            item.path, Technique,
            id=_identifier(item.require('id'), item.child('id')),
            name=item.get('name', ''),
            setup_cost=item.get('setup_cost', 0.0),
            removal_cost=removal, difficulty=curves,
            execution_cost_rate=item.get('execution_cost_rate'), **kwargs)
        item.finish()
        techniques.append(technique)
    scenario = _build(node.path, Scenario, faults, techniques,
                      labour_rate=node.get('labour_rate', 0.0))
    node.finish()
    return scenario


def _parse_practical(node):
    types = []
    for k, entry in enumerate(node.sequence('defect_types', required=True)):
        item = _Node(entry, '{}[{}]'.format(node.child('defect_types'), k))
        types.append(_build(
            item.path, DefectType,
            id=_identifier(item.require('id'), item.child('id')),
            name=item.get('name', ''),
            fraction=item.require('fraction'),
            failure_probability=item.get('failure_probability', 0.0),
            avg_field_removal_cost=item.get('avg_field_removal_cost', 0.0),
            avg_field_effect_cost=item.get('avg_field_effect_cost', 0.0)))
        item.finish()
    known = {dt.id for dt in types}
    techniques = []
    for k, entry in enumerate(node.sequence('techniques', required=True)):
        item = _Node(entry, '{}[{}]'.format(node.child('techniques'), k))
        techniques.append(_build(
            item.path, PracticalTechnique,
            id=_identifier(item.require('id'), item.child('id')),
            name=item.get('name', ''),
            avg_setup_cost=item.get('avg_setup_cost', 0.0),
            execution_cost_rate=item.get('execution_cost_rate'),
            avg_removal_cost=_id_map(item.get('avg_removal_cost'),
                                     item.child('avg_removal_cost'), known,
                                     'defect type'),
            difficulty_slope=_id_map(item.get('difficulty_slope'),
                                     item.child('difficulty_slope'), known,
                                     'defect type')))
        item.finish()
    scenario = _build(node.path, PracticalScenario, types,
                      node.require('expected_fault_count'), techniques,
                      labour_rate=node.get('labour_rate', 0.0))
    node.finish()
    return scenario


def parse_program(text, path='program'):
    """Parse the inline program syntax ``ID:EFFORT,ID:EFFORT``.

    Lists of ``[id, effort]`` pairs or ``{technique: id, effort: e}``
    mappings, as they appear in YAML documents, are accepted as well.

    Examples
    --------
    >>> parse_program('0:5,2:10')
    Program(0:5, 2:10)

    """
    if isinstance(text, Program):
        return text
    pairs = []
    if isinstance(text, str):
        items = [item.strip() for item in text.split(',') if item.strip()]
        for k, item in enumerate(items):
            technique, sep, effort = item.partition(':')
            if not sep:
                raise InvariantViolationError(
                    '{}[{}]: expected ID:EFFORT, got {!r}'.format(
                        path, k, item), 'program')
            pairs.append((technique.strip(), effort.strip(), k))
    elif isinstance(text, list):
        for k, item in enumerate(text):
            if isinstance(item, dict):
                entry = _Node(item, '{}[{}]'.format(path, k))
                pairs.append((entry.require('technique'),
                              entry.require('effort'), k))
                entry.finish()
            elif isinstance(item, (list, tuple)) and len(item) == 2:
                pairs.append((item[0], item[1], k))
            else:
                raise InvariantViolationError(
                    '{}[{}]: expected a technique/effort pair, got '
                    '{!r}'.format(path, k, item), 'program')
    elif text is None:
        return Program()
    else:
        raise InvariantViolationError(
            '{}: expected ID:EFFORT pairs, got {!r}'.format(path, text),
            'program')
    applications = []
    for technique, effort, k in pairs:
        location = '{}[{}]'.format(path, k)
        try:
            technique = int(technique)
            effort = float(effort)
        except (TypeError, ValueError):
            raise InvariantViolationError(
                '{}: cannot read {!r}:{!r} as ID:EFFORT'.format(
                    location, technique, effort), 'program')
        applications.append((technique, effort))
    return _build(path, Program, applications)


def check_program(program, scenario, path):
    known = set(scenario.technique_ids)
    seen = set()
    for k, app in enumerate(program):
        if app.technique not in known:
            raise UnresolvedReferenceError(
                '{}[{}]: technique {} is not defined in the scenario'.format(
                    path, k, app.technique), app.technique)
        if app.technique in seen:
            raise InvariantViolationError(
                '{}[{}]: technique {} is applied twice'.format(
                    path, k, app.technique), 'program')
        seen.add(app.technique)


def format_program(program):
    """Inline ``ID:EFFORT`` text of `program`, full float precision."""
    return ','.join('{}:{!r}'.format(app.technique, float(app.effort))
                    for app in program)


def _parse_constraints(node, scenario):
    known = set(scenario.technique_ids) if scenario is not None else None
    levels = node.get('allowed_levels') or {}
    if known is not None:
        levels = _id_map(levels, node.child('allowed_levels'), known,
                         'technique')
    precedence = []
    for k, pair in enumerate(node.sequence('precedence')):
        location = '{}[{}]'.format(node.child('precedence'), k)
        if not isinstance(pair, list) or len(pair) != 2:
            raise ConstraintError('{}: expected a pair [before, after], got '
                                  '{!r}'.format(location, pair))
        before, after = (_identifier(tid, location) for tid in pair)
        for tid in (before, after):
            if known is not None and tid not in known:
                raise UnresolvedReferenceError(
                    '{}: technique {} is not defined'.format(location, tid),
                    tid)
        precedence.append((before, after))
    for tid, values in levels.items():
        if not isinstance(values, list):
            raise ConstraintError('{}[{}]: expected a list of efforts, got '
                                  '{!r}'.format(node.child('allowed_levels'),
                                                tid, values))
    constraints = _build(node.path, Constraints,
                         max_total_effort=node.get('max_total_effort'),
                         allowed_levels=levels, precedence=precedence)
    grid = node.get('effort_grid')
    if grid is not None:
        if not isinstance(grid, list) or not grid:
            raise ConstraintError('{}: expected a non-empty list of '
                                  'efforts'.format(node.child('effort_grid')))
        try:
            grid = tuple(sorted({float(e) for e in grid}))
        except (TypeError, ValueError):
            raise ConstraintError('{}: efforts must be numbers, got '
                                  '{!r}'.format(node.child('effort_grid'),
                                                grid))
        if grid[0] < 0:
            raise ConstraintError('{}: efforts must be non-negative'.format(
                node.child('effort_grid')))
    if scenario is not None:
        _build(node.path, constraints.graph, scenario.technique_ids)
    node.finish()
    return constraints, grid


def _parse_design(node, model):
    factors = []
    for k, entry in enumerate(node.sequence('factors', required=True)):
        item = _Node(entry, '{}[{}]'.format(node.child('factors'), k))
        distribution = item.mapping('distribution', required=True)
        dist = _build(distribution.path, distribution_from_dict,
                      distribution.data)
        binding = item.mapping('binding')
        if binding is not None:
            techniques = binding.get('techniques')
            binding_value = _build(
                binding.path, Binding, binding.require('target'),
                None if techniques is None else
                [_identifier(t, binding.child('techniques'))
                 for t in techniques])
            binding.finish()
        else:
            binding_value = None
        factors.append(Factor(str(item.require('name')), dist,
                              binding_value))
        item.finish()
    benchmark = node.get('benchmark')
    if benchmark is not None and benchmark not in BENCHMARKS:
        raise DesignError('{}: unknown benchmark {!r}; expected one of '
                          '{}'.format(node.child('benchmark'), benchmark,
                                      sorted(BENCHMARKS)))
    template = node.get('template')
    if template is None and benchmark is None:
        template = {'kind': model}
    if template is not None:
        template = _build(node.child('template'), template_from_dict,
                          template)
    design = _build(node.path, SensitivityDesign, factors,
                    grouping=node.get('grouping', 'abstract'),
                    samples_per_curve=node.get('samples_per_curve', 1025),
                    resamples=node.get('resamples', 4),
                    interference=node.get('interference', 4),
                    name=str(node.get('name', '')),
                    template=template)
    if benchmark is None:
        for factor in design.factors:
            if factor.binding is None:
                raise DesignError('{}: factor {!r} is not bound to any '
                                  'template field'.format(node.path,
                                                          factor.name))
    node.finish()
    return design, benchmark


def _check_version(version):
    if version is None:
        raise SchemaVersionError('schema_version is required; this qecon '
                                 'reads version {}'.format(SCHEMA_VERSION))
    major = str(version).split('.')[0]
    if major != SCHEMA_VERSION.split('.')[0]:
        raise SchemaVersionError(
            'schema_version {!r} is not supported; this qecon reads major '
            'version {}'.format(version, SCHEMA_VERSION.split('.')[0]))
    return str(version)


def parse_scenario(text, model=None):
    """Parse and validate a scenario document.

    Parameters
    ----------
    text : str
        YAML text in the scenario file schema.
    model : str, optional
        ``'ideal'`` or ``'practical'``, overriding the document's ``model``.

    Returns
    -------
    ScenarioFile

    Raises
    ------
    ScenarioSyntaxError
        If `text` is not well-formed YAML, with line and column.
    UnknownKeyError, UnresolvedReferenceError, SchemaVersionError
    InvariantViolationError, ConfigurationError, DesignError, ConstraintError
        For semantically invalid content, naming the position in the
        document.

    """
    try:
        data = yaml.safe_load(text)
    except yaml.MarkedYAMLError as error:
        mark = error.problem_mark or error.context_mark
        line, column = ((mark.line + 1, mark.column + 1) if mark is not None
                        else (None, None))
        raise ScenarioSyntaxError(str(error.problem or error), line, column)
    except yaml.YAMLError as error:
        raise ScenarioSyntaxError(str(error))
    if data is None:
        data = {}
    root = _Node(data, '')
    result = ScenarioFile(schema_version=_check_version(
        root.get('schema_version')))
    declared = root.get('model', 'ideal')
    model = declared if model is None else model
    if model not in MODELS:
        raise InvariantViolationError(
            'model: expected one of {}, got {!r}'.format(list(MODELS), model),
            'model')
    result.model = model

    scenario_node = root.mapping('scenario')
    if scenario_node is not None:
        result.scenario = (_parse_practical(scenario_node)
                           if model == 'practical'
                           else _parse_ideal(scenario_node))
    if root.has('program'):
        result.program = parse_program(root.get('program'))
        if result.scenario is not None:
            check_program(result.program, result.scenario, 'program')
    constraints_node = root.mapping('constraints')
    if constraints_node is not None:
        result.constraints, result.effort_grid = _parse_constraints(
            constraints_node, result.scenario)
    design_node = root.mapping('design')
    if design_node is not None:
        result.design, result.benchmark = _parse_design(design_node, model)
    root.finish()
    return result


def load_scenario(path, model=None):
    """Read and validate the scenario file at `path`."""
    with open(path, 'r', encoding='utf-8') as scenario_file:
        text = scenario_file.read()
    try:
        return parse_scenario(text, model=model)
    except ScenarioSyntaxError as error:
        located = ScenarioSyntaxError('{}: {}'.format(path, error))
        located.line, located.column = error.line, error.column
        raise located from error


def _ideal_to_dict(scenario):
    faults = []
    for fault in scenario.faults:
        faults.append({
            'id': fault.id,
            'doc_class': fault.doc_class.value,
            'predecessors': sorted(fault.predecessors),
            'failure_probability': fault.failure_probability,
            'field_removal_cost': fault.field_removal_cost,
            'field_effect_cost': fault.field_effect_cost,
        })
    techniques = []
    for technique in scenario.techniques:
        techniques.append({
            'id': technique.id,
            'name': technique.name,
            'setup_cost': technique.setup_cost,
            'execution_cost_rate': technique.execution_cost_rate,
            'capable_classes': [c.value for c in DocumentClass
                                if c in technique.capable_classes],
            'removal_cost': {fid: technique.removal_cost[fid]
                             for fid in sorted(technique.removal_cost)},
            'difficulty': {fid: technique.difficulty[fid].to_dict()
                           for fid in sorted(technique.difficulty)},
        })
    return {'labour_rate': scenario.labour_rate, 'faults': faults,
            'techniques': techniques}


def _practical_to_dict(scenario):
    types = [{
        'id': dt.id,
        'name': dt.name,
        'fraction': dt.fraction,
        'failure_probability': dt.failure_probability,
        'avg_field_removal_cost': dt.avg_field_removal_cost,
        'avg_field_effect_cost': dt.avg_field_effect_cost,
    } for dt in scenario.defect_types]
    techniques = []
    for technique in scenario.techniques:
        entry = {'id': technique.id, 'name': technique.name,
                 'avg_setup_cost': technique.avg_setup_cost}
        if technique.execution_cost_rate is not None:
            entry['execution_cost_rate'] = technique.execution_cost_rate
        entry['avg_removal_cost'] = {
            tid: technique.avg_removal_cost[tid]
            for tid in sorted(technique.avg_removal_cost)}
        entry['difficulty_slope'] = {
            tid: technique.difficulty_slope[tid]
            for tid in sorted(technique.difficulty_slope)}
        techniques.append(entry)
    return {'labour_rate': scenario.labour_rate,
            'expected_fault_count': scenario.expected_fault_count,
            'defect_types': types, 'techniques': techniques}


def _constraints_to_dict(constraints, effort_grid):
    data = {}
    if constraints.max_total_effort is not None:
        data['max_total_effort'] = constraints.max_total_effort
    if constraints.allowed_levels:
        data['allowed_levels'] = {
            tid: list(constraints.allowed_levels[tid])
            for tid in sorted(constraints.allowed_levels)}
    if constraints.precedence:
        data['precedence'] = [list(pair) for pair in constraints.precedence]
    if effort_grid is not None:
        data['effort_grid'] = list(effort_grid)
    return data


def _design_to_dict(design, benchmark):
    factors = []
    for factor in design.factors:
        entry = {'name': factor.name,
                 'distribution': factor.distribution.to_dict()}
        if factor.binding is not None:
            binding = {'target': factor.binding.target}
            if factor.binding.techniques is not None:
                binding['techniques'] = list(factor.binding.techniques)
            entry['binding'] = binding
        factors.append(entry)
    data = {'name': design.name, 'grouping': design.grouping,
            'samples_per_curve': design.samples_per_curve,
            'resamples': design.resamples,
            'interference': design.interference}
    if benchmark is not None:
        data['benchmark'] = benchmark
    if design.template is not None:
        data['template'] = design.template.to_dict()
    data['factors'] = factors
    return data


def dump_scenario(scenario_file):
    """Canonical YAML text of `scenario_file`.

    Keys appear in a fixed order and reals with full precision, so
    ``dump_scenario(parse_scenario(dump_scenario(f)))`` reproduces the
    same text.
    """
    data = {'schema_version': scenario_file.schema_version,
            'model': scenario_file.model}
    if scenario_file.scenario is not None:
        if scenario_file.model == 'practical':
            data['scenario'] = _practical_to_dict(scenario_file.scenario)
        else:
            data['scenario'] = _ideal_to_dict(scenario_file.scenario)
    if scenario_file.program is not None:
        data['program'] = format_program(scenario_file.program)
    if scenario_file.constraints is not None:
        data['constraints'] = _constraints_to_dict(scenario_file.constraints,
                                                   scenario_file.effort_grid)
    if scenario_file.design is not None:
        data['design'] = _design_to_dict(scenario_file.design,
                                         scenario_file.benchmark)
    return yaml.safe_dump(data, sort_keys=False, default_flow_style=False,
                          allow_unicode=True)


def save_scenario(scenario_file, path):
    """Write the canonical text of `scenario_file` to `path`."""
    with open(path, 'w', encoding='utf-8', newline='\n') as out:
        out.write(dump_scenario(scenario_file))
