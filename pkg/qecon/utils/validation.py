import math

from qecon.exceptions import InvariantViolationError

__all__ = ['check_probability', 'check_non_negative', 'check_finite']


def check_finite(value, rule):
    """Coerce `value` to float and ensure it is finite."""
    try:
        value = float(value)
    except (TypeError, ValueError):
        raise InvariantViolationError(
            '{} must be a real number, got {!r}'.format(rule, value), rule)
    if not math.isfinite(value):
        raise InvariantViolationError(
            '{} must be finite, got {}'.format(rule, value), rule)
    return value


def check_probability(value, rule):
    """Ensure that `value` lies in [0, 1] and return it as a float."""
    value = check_finite(value, rule)
    if not 0.0 <= value <= 1.0:
        raise InvariantViolationError(
            '{} must lie in [0, 1], got {}'.format(rule, value), rule)
    return value


def check_non_negative(value, rule):
    """Ensure that `value` is a finite, non-negative real."""
    value = check_finite(value, rule)
    if value < 0:
        raise InvariantViolationError(
            '{} must be non-negative, got {}'.format(rule, value), rule)
    return value
