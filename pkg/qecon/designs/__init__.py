"""Registry of sensitivity studies.

Every registered name maps to a factory returning a `SensitivityStudy`.
Besides the built-ins below, other packages can contribute studies through
the ``qecon.designs`` entry-point group, e.g. in their ``setup.py``::

    entry_points={'qecon.designs': ['mine = mypackage.studies:my_study']}

"""
from importlib.metadata import entry_points

import numpy as np

from qecon.difficulty import FORMS
from qecon.exceptions import DesignError
from qecon.lib.templates import (DEFAULT_LAYOUTS, DEFAULT_SEQUENCES,
                                 PracticalTemplate, ScenarioTemplate)
from qecon.sensitivity.benchmarks import Additive, ConstantModel, Ishigami
from qecon.sensitivity.binding import Binding, SensitivityStudy
from qecon.sensitivity.distributions import DiscreteUniform, Uniform
from qecon.sensitivity.efast import Factor, SensitivityDesign

__all__ = ['designs', 'register', 'get_study', 'available', 'ishigami',
           'additive', 'constant', 'abstract', 'detailed', 'practical']


class Designs(object):
    """Namespace holding the study factories by name."""
    pass


designs = Designs()


def register(name, factory):
    setattr(designs, name, factory)


def available():
    return sorted(name for name in vars(designs) if not name.startswith('_'))


def get_study(name, output='roi'):
    """Instantiate the registered study `name`."""
    try:
        factory = getattr(designs, name)
    except AttributeError:
        raise DesignError('Unknown design {!r}; available designs: {}'.format(
            name, ', '.join(available())))
    return factory().with_output(output)


def ishigami(a=7.0, b=0.1):
    factors = [Factor('x{}'.format(k), Uniform(-np.pi, np.pi))
               for k in (1, 2, 3)]
    design = SensitivityDesign(factors, samples_per_curve=1025, resamples=4,
                               name='ishigami')
    return SensitivityStudy(design, Ishigami(a, b))


def additive():
    factors = [Factor('x1', Uniform(0.0, 1.0)), Factor('x2', Uniform(0.0, 1.0))]
    design = SensitivityDesign(factors, name='additive')
    return SensitivityStudy(design, Additive())


def constant():
    factors = [Factor('x1', Uniform(0.0, 1.0)), Factor('x2', Uniform(0.0, 1.0))]
    design = SensitivityDesign(factors, samples_per_curve=65, resamples=1,
                               name='constant')
    return SensitivityStudy(design, ConstantModel())


def _levels(options):
    return DiscreteUniform(list(range(len(options))))


def _shared_factors():
    """Scenario-wide factors of both ideal groupings."""
    return [
        Factor('c', _levels(DEFAULT_LAYOUTS), Binding('class_layout')),
        Factor('rho', DiscreteUniform([0, 1, 2, 3]), Binding('predecessors')),
        Factor('pi', Uniform(0.01, 0.3), Binding('failure_probability')),
        Factor('v_f', Uniform(500.0, 5000.0), Binding('field_removal_cost')),
        Factor('s', _levels(DEFAULT_SEQUENCES), Binding('sequence')),
        Factor('l', Uniform(30.0, 100.0), Binding('labour_rate')),
    ]


def _technique_factors(suffix='', techniques=None):
    return [
        Factor('t' + suffix, Uniform(2.0, 40.0),
               Binding('effort', techniques)),
        Factor('u' + suffix, Uniform(50.0, 500.0),
               Binding('setup_cost', techniques)),
        Factor('v' + suffix, Uniform(20.0, 300.0),
               Binding('removal_cost', techniques)),
        Factor('theta' + suffix, Uniform(0.3, 0.9),
               Binding('theta_mean', techniques)),
        Factor('phi' + suffix, _levels(FORMS), Binding('form', techniques)),
    ]


def abstract():
    """Eleven factors, per-technique quantities varied jointly."""
    factors = _shared_factors() + _technique_factors()
    design = SensitivityDesign(factors, grouping='abstract',
                               samples_per_curve=513, resamples=2,
                               name='abstract')
    return SensitivityStudy.from_template(design, ScenarioTemplate())


def detailed():
    """41 factors, per-technique quantities varied per technique."""
    factors = _shared_factors()
    for tid in range(7):
        factors += _technique_factors('_{}'.format(tid), (tid,))
    design = SensitivityDesign(factors, grouping='detailed',
                               samples_per_curve=257, resamples=2,
                               name='detailed')
    return SensitivityStudy.from_template(design, ScenarioTemplate())


def practical():
    """Nine factors over the practical model."""
    factors = [
        Factor('t', Uniform(2.0, 40.0), Binding('effort')),
        Factor('pi', Uniform(0.01, 0.3), Binding('failure_probability')),
        Factor('theta', Uniform(0.3, 0.9), Binding('theta_mean')),
        Factor('alpha', Uniform(0.2, 0.6), Binding('fraction')),
        Factor('v_f', Uniform(500.0, 5000.0), Binding('field_removal_cost')),
        Factor('l', Uniform(30.0, 100.0), Binding('labour_rate')),
        Factor('s', _levels(DEFAULT_SEQUENCES), Binding('sequence')),
        Factor('u', Uniform(50.0, 500.0), Binding('setup_cost')),
        Factor('v', Uniform(20.0, 300.0), Binding('removal_cost')),
    ]
    design = SensitivityDesign(factors, grouping='abstract',
                               samples_per_curve=513, resamples=2,
                               name='practical')
    return SensitivityStudy.from_template(design, PracticalTemplate())


for _factory in (ishigami, additive, constant, abstract, detailed, practical):
    register(_factory.__name__, _factory)

for _entry_point in entry_points(group='qecon.designs'):
    register(_entry_point.name, _entry_point.load())
