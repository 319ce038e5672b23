"""Model-independent entry points for the ideal and practical models."""
import warnings

from qecon import economics, practical
from qecon.exceptions import ConfigurationError
from qecon.practical import PracticalScenario

__all__ = ['breakdown', 'net_benefit', 'field_cost', 'is_practical',
           'simulation_scenario']


def is_practical(scenario):
    return isinstance(scenario, PracticalScenario)


def breakdown(program, scenario):
    """`CostBreakdown` of `program` under either model."""
    if is_practical(scenario):
        return practical.practical_combined(program, scenario)
    return economics.cost_breakdown(program, scenario)


def net_benefit(program, scenario):
    """Revenues minus direct costs of `program` under either model.

    Future costs are left out. Revenues plus future costs always equal the
    field cost of the scenario, so maximizing this minimizes ``d + t``.
    """
    if is_practical(scenario):
        direct, _, revenue = practical.combined_terms(program, scenario)
        return revenue - direct
    return economics.net_benefit(program, scenario)


def field_cost(scenario):
    """Expected field cost of `scenario` without any quality assurance."""
    if is_practical(scenario):
        return practical.expected_field_cost(scenario)
    return economics.total_field_cost(scenario)


def simulation_scenario(scenario):
    """Ideal scenario the Monte-Carlo simulator runs on.

    Practical scenarios are expanded into individual faults when the expected
    count of every defect type is integral, otherwise into one aggregated
    fault per type, which keeps the expectations but not the run-to-run
    spread.
    """
    if not is_practical(scenario):
        return scenario
    try:
        return practical.expand_practical(scenario, mode='individual')[0]
    except ConfigurationError:
        warnings.warn('Expected fault counts per defect type are not '
                      'integral; simulating one aggregated fault per type')
        return practical.expand_practical(scenario, mode='aggregate')[0]
