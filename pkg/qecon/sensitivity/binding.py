"""Binding sampled factor values into scenario templates."""
from dataclasses import dataclass
import logging

from qecon.evaluate import breakdown, net_benefit
from qecon.exceptions import DesignError
from qecon.sensitivity.efast import efast_indices
from qecon.utils.seeding import DEFAULT_SEED

__all__ = ['Binding', 'OUTPUTS', 'bind_values', 'bind_and_evaluate',
           'TemplateModel', 'SensitivityStudy']

logger = logging.getLogger(__name__)

OUTPUTS = ('roi', 'net_benefit')


@dataclass(frozen=True)
class Binding(object):
    """Target of a factor in a scenario template.

    Parameters
    ----------
    target : str
        Template field the value is written to, e.g. ``'theta_mean'``.
    techniques : tuple of int, optional
        Techniques a per-technique target applies to; None means all of them.

    """
    target: str
    techniques: tuple = None

    def __post_init__(self):
        if self.techniques is not None:
            object.__setattr__(self, 'techniques',
                               tuple(int(t) for t in self.techniques))


def _check_output(output):
    if output not in OUTPUTS:
        raise DesignError('output must be one of {}, got {!r}'.format(
            OUTPUTS, output))


def bind_values(design, row, template):
    """Concrete (scenario, program) for one sample row.

    Raises
    ------
    DesignError
        If a factor has no binding or its target is not a template target.

    """
    if len(row) != len(design.factors):
        raise DesignError('Sample row has {} values for {} factors'.format(
            len(row), len(design.factors)))
    assignments = []
    for factor, value in zip(design.factors, row):
        binding = factor.binding
        if binding is None:
            raise DesignError('Factor {!r} is not bound to any template '
                              'field'.format(factor.name))
        if binding.target not in template.targets:
            raise DesignError(
                'Factor {!r} binds to unknown target {!r}; {} accepts {}'
                .format(factor.name, binding.target,
                        type(template).__name__, sorted(template.targets)))
        assignments.append((binding, float(value)))
    return template.instantiate(assignments)


def bind_and_evaluate(design, row, template, output='roi'):
    """Evaluate the scenario a sample row describes.

    Parameters
    ----------
    design : SensitivityDesign
    row : sequence of float
        Factor values in declaration order.
    template : ScenarioTemplate or PracticalTemplate
    output : str, optional, default='roi'
        ``'roi'`` or ``'net_benefit'``.

    Returns
    -------
    float

    """
    _check_output(output)
    scenario, program = bind_values(design, row, template)
    if output == 'net_benefit':
        return net_benefit(program, scenario)
    return breakdown(program, scenario).roi


class TemplateModel(object):
    """Picklable model ``row -> output`` over a template."""
    def __init__(self, design, template, output='roi'):
        _check_output(output)
        self.design = design
        self.template = template
        self.output = output

    def __call__(self, row):
        return bind_and_evaluate(self.design, row, self.template, self.output)


class SensitivityStudy(object):
    """A sensitivity design together with the model it analyses.

    Parameters
    ----------
    design : SensitivityDesign
    model : callable
        Maps a sample row to a real output.

    """
    def __init__(self, design, model):
        self.design = design
        self.model = model

    @classmethod
    def from_template(cls, design, template, output='roi'):
        return cls(design, TemplateModel(design, template, output))

    def with_output(self, output):
        if not isinstance(self.model, TemplateModel):
            return self
        return SensitivityStudy.from_template(self.design,
                                              self.model.template, output)

    def run(self, seed=DEFAULT_SEED, jobs=1):
        logger.info('Running sensitivity study %r', self.design.name)
        return efast_indices(self.model, self.design, seed=seed, jobs=jobs)
