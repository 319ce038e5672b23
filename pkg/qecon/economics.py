"""Costs and revenues of defect-detection techniques in the ideal model.

The single-technique functions evaluate one application of one technique on
a list of faults, charging the setup cost for every effort. The combined
functions evaluate a `Program` on a `Scenario`: zero-effort applications are
skipped entirely, and a fault can only be detected by application ``x`` when
neither the fault nor any of its ancestors was detected by an earlier
application. A fault removed together with a detected ancestor saves its field
costs as well, so revenues and future costs always add up to the expected
field cost of the scenario.
"""
import numpy as np

from qecon.exceptions import ConfigurationError, UndefinedROIError
from qecon.scenario import CostBreakdown

__all__ = ['execution_cost', 'direct_costs_single', 'future_costs_single',
           'revenues_single', 'residual_nondetection', 'direct_costs_combined',
           'future_costs_combined', 'revenues_combined',
           'screened_savings_combined', 'roi', 'cost_breakdown',
           'total_field_cost', 'net_benefit']


def execution_cost(technique, t, labour_rate=None):
    """Cost of executing `technique` for `t` person-hours.

    The technique's own `execution_cost_rate` takes precedence over
    `labour_rate`.
    """
    if t == 0:
        return 0.0
    rate = technique.execution_cost_rate
    if rate is None:
        rate = labour_rate
    if rate is None:
        raise ConfigurationError(
            'Technique {} has no execution cost rate and no labour rate was '
            'given'.format(technique.id))
    return rate * t


def _single_arrays(technique, t, faults):
    theta = np.array([technique.curve(f.id).evaluate(t) for f in faults],
                     dtype=np.float64)
    removal = np.array([technique.removal(f.id) for f in faults],
                       dtype=np.float64)
    pi = np.array([f.failure_probability for f in faults], dtype=np.float64)
    field = np.array([f.field_cost for f in faults], dtype=np.float64)
    return theta, removal, pi, field


def direct_costs_single(technique, t, faults, labour_rate=None):
    """Direct costs of one application: setup, execution and removal.

    Parameters
    ----------
    technique : Technique
    t : float
        Effort in person-hours.
    faults : sequence of Fault
    labour_rate : float, optional
        Rate used when the technique declares none.

    Returns
    -------
    float
        ``u + e(t) + sum_i (1 - theta(i, t)) * v(i)``

    Raises
    ------
    ConfigurationError
        If the technique lacks a curve or removal cost for a fault.

    """
    theta, removal, _, _ = _single_arrays(technique, t, faults)
    return (technique.setup_cost + execution_cost(technique, t, labour_rate) +
            float(np.sum((1.0 - theta) * removal)))


def future_costs_single(technique, t, faults):
    """Expected field costs of the faults one application leaves behind."""
    theta, _, pi, field = _single_arrays(technique, t, faults)
    return float(np.sum(pi * theta * field))


def revenues_single(technique, t, faults):
    """Expected field costs one application saves."""
    theta, _, pi, field = _single_arrays(technique, t, faults)
    return float(np.sum(pi * (1.0 - theta) * field))


class _ProgramEvaluation(object):
    """Vectorized evaluation of a program over all faults of a scenario.

    Rows of the internal matrices are the active applications, columns are
    the faults in scenario order.
    """
    def __init__(self, program, scenario):
        self.scenario = scenario
        self.applications = program.active()
        techniques = [scenario.technique(app.technique)
                      for app in program.applications]
        self.techniques = [t for t, app in zip(techniques, program.applications)
                           if app.effort > 0]
        faults = scenario.faults
        n_apps, n_faults = len(self.applications), len(faults)
        self.theta = np.ones((n_apps, n_faults))
        self.removal = np.zeros((n_apps, n_faults))
        for row, (technique, app) in enumerate(
                zip(self.techniques, self.applications)):
            for col, fault in enumerate(faults):
                self.theta[row, col] = technique.curve(fault.id).evaluate(
                    app.effort)
                self.removal[row, col] = technique.removal(fault.id)
        self.pi = np.array([f.failure_probability for f in faults])
        self.field = np.array([f.field_cost for f in faults])

        # screen[x, i]: no event for fault i or any ancestor in application x
        closure = scenario.closure
        self.screen = np.ones((n_apps, n_faults))
        for col in range(n_faults):
            self.screen[:, col] = np.prod(self.theta[:, closure[col]], axis=1)
        self.residual = np.ones((n_apps, n_faults))
        if n_apps > 1:
            self.residual[1:] = np.cumprod(self.screen[:-1], axis=0)
        self.never_removed = np.prod(self.screen, axis=0)

    def fixed_costs(self, row):
        technique, app = self.techniques[row], self.applications[row]
        return technique.setup_cost + execution_cost(technique, app.effort)

    def direct(self):
        total = 0.0
        for row in range(len(self.applications)):
            total += self.fixed_costs(row) + float(np.sum(
                (1.0 - self.theta[row]) * self.residual[row] *
                self.removal[row]))
        return total

    def self_detection(self):
        """Probability per fault of being detected in its own right."""
        return np.sum((1.0 - self.theta) * self.residual, axis=0)

    def revenue(self):
        return float(np.sum(self.pi * (1.0 - self.never_removed) * self.field))

    def future(self):
        return float(np.sum(self.pi * self.never_removed * self.field))

    def screened(self):
        screened = 1.0 - self.self_detection() - self.never_removed
        return float(np.sum(self.pi * np.maximum(screened, 0.0) * self.field))


def residual_nondetection(fault, x, program, scenario):
    """Probability that neither `fault` nor an ancestor was detected before
    the `x`-th application of `program`.

    Parameters
    ----------
    fault : Fault or int
    x : int
        Zero-based position in ``program.applications``.
    program : Program
    scenario : Scenario

    Returns
    -------
    float
        ``prod_{y < x} prod_{j in {i} | ancestors(i)} theta_y(j, t_y)``,
        with zero-effort applications contributing a factor of one.

    """
    fault_id = getattr(fault, 'id', fault)
    col = scenario.fault_position(fault_id)
    if not 0 <= x <= len(program):
        raise IndexError('Position {} outside program of length {}'.format(
            x, len(program)))
    members = [scenario.faults[pos] for pos in np.flatnonzero(
        scenario.closure[col])]
    residual = 1.0
    for app in program.applications[:x]:
        if app.effort == 0:
            continue
        technique = scenario.technique(app.technique)
        for member in members:
            residual *= technique.curve(member.id).evaluate(app.effort)
    return residual


def direct_costs_combined(program, scenario):
    """Setup, execution and removal costs of every active application."""
    return _ProgramEvaluation(program, scenario).direct()


def future_costs_combined(program, scenario):
    """Expected field costs of faults no application removes."""
    return _ProgramEvaluation(program, scenario).future()


def revenues_combined(program, scenario):
    """Expected field costs saved by removing faults.

    A fault counts when it is detected itself or when it is removed because
    one of its ancestors was detected. ``revenues_combined +
    future_costs_combined`` equals `total_field_cost` for every program.
    """
    return _ProgramEvaluation(program, scenario).revenue()


def screened_savings_combined(program, scenario):
    """Share of the revenues saved only because an ancestor was detected.

    Zero without predecessors.
    """
    return _ProgramEvaluation(program, scenario).screened()


def roi(d, t, r):
    """Return on investment ``(r - d - t) / (d + t)``.

    Raises
    ------
    UndefinedROIError
        If ``d + t`` is zero.

    """
    spent = d + t
    if spent == 0:
        raise UndefinedROIError(
            'ROI is undefined when direct plus future costs are zero')
    return (r - d - t) / spent


def total_field_cost(scenario):
    """Expected field cost without any quality assurance."""
    return float(sum(f.failure_probability * f.field_cost
                     for f in scenario.faults))


def cost_breakdown(program, scenario):
    """Evaluate `program` on `scenario` into a `CostBreakdown`."""
    evaluation = _ProgramEvaluation(program, scenario)
    direct, future, revenue = (evaluation.direct(), evaluation.future(),
                               evaluation.revenue())
    return CostBreakdown(direct=direct, future=future, revenue=revenue,
                         roi=roi(direct, future, revenue),
                         screened=evaluation.screened())


def net_benefit(program, scenario):
    """Revenues minus direct costs of `program`.

    As revenues and future costs add up to a constant, maximizing this
    minimizes the total cost ``d + t`` of the program.
    """
    evaluation = _ProgramEvaluation(program, scenario)
    return evaluation.revenue() - evaluation.direct()
