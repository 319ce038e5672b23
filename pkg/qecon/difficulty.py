"""Difficulty functions: the probability that a technique misses a fault.

A difficulty curve maps the effort spent on a technique application (in
person-hours) to the probability that the application does *not* detect a
given fault. Four families are supported, each non-increasing in effort and
bounded to [0, 1]:

* `Exponential` -- ``lam * exp(-lam * t)`` for ``t > 0``, 1 at ``t = 0``,
  clamped at 1 because a difficulty is a probability.
* `Linear` -- ``m * t + 1`` with ``m <= 0``, clamped at 0.
* `Constant` -- the effort does not matter; ``Constant(1.0)`` encodes a
  technique that cannot detect the fault.
* `Sigmoid` -- complementary logistic ``1 / (1 + exp(k * (t - t0)))``.

All curves evaluate on scalars and on numpy arrays.
"""
from dataclasses import dataclass, asdict
import warnings

import numpy as np
from scipy.optimize import brentq

from qecon.exceptions import CalibrationError, InvariantViolationError
from qecon.utils.validation import (check_finite, check_non_negative,
                                    check_probability)

__all__ = ['DifficultyCurve', 'Exponential', 'Linear', 'Constant', 'Sigmoid',
           'FORMS', 'form_from_code', 'form_from_name', 'eval_difficulty',
           'calibrate_exponential', 'calibrate', 'mean_difficulty',
           'UNDETECTABLE']


def _scalar_or_array(values, t):
    if np.ndim(t) == 0:
        return float(values)
    return values


class DifficultyCurve(object):
    """Base class of the four difficulty families."""
    form = None
    code = None

    def __call__(self, t):
        return self.evaluate(t)

    def evaluate(self, t):
        """Probability of non-detection at effort `t` (person-hours)."""
        raise NotImplementedError

    def mean(self, effort_range):
        """Mean difficulty over efforts in [0, `effort_range`]."""
        raise NotImplementedError

    def to_dict(self):
        """Mapping used by the scenario file format."""
        data = {'form': self.form}
        data.update(asdict(self))
        return data

    @staticmethod
    def from_dict(data):
        """Build a curve from ``{'form': name, <parameters>}``."""
        data = dict(data)
        try:
            form = data.pop('form')
        except KeyError:
            raise InvariantViolationError(
                "Difficulty curve lacks the 'form' key", 'form')
        cls = form_from_name(form)
        try:
            return cls(**data)
        except TypeError:
            raise InvariantViolationError(
                'Curve form {!r} takes parameters {}, got {}'.format(
                    form, cls.parameters, sorted(data)), 'form')


@dataclass(frozen=True)
class Exponential(DifficultyCurve):
    """Exponential difficulty with rate `lam` (per person-hour)."""
    lam: float
    form = 'exponential'
    code = 0
    parameters = ('lam',)

    def __post_init__(self):
        lam = check_finite(self.lam, 'lam')
        if lam <= 0:
            raise InvariantViolationError(
                'lam must be positive, got {}'.format(lam), 'lam')
        object.__setattr__(self, 'lam', lam)

    def evaluate(self, t):
        t = np.asarray(t, dtype=np.float64)
        with np.errstate(over='ignore'):
            raw = self.lam * np.exp(-self.lam * np.maximum(t, 0.0))
        values = np.where(t > 0, np.minimum(1.0, raw), 1.0)
        return _scalar_or_array(values, t)

    def mean(self, effort_range):
        effort_range = float(effort_range)
        if effort_range <= 0:
            return 1.0
        lam = self.lam
        if lam <= 1.0:
            area = 1.0 - np.exp(-lam * effort_range)
        else:
            t_clamp = np.log(lam) / lam
            if effort_range <= t_clamp:
                return 1.0
            area = t_clamp + 1.0 / lam - np.exp(-lam * effort_range)
        return float(area / effort_range)


@dataclass(frozen=True)
class Linear(DifficultyCurve):
    """Linear difficulty ``m * t + 1`` with non-positive slope `m`."""
    m: float
    form = 'linear'
    code = 1
    parameters = ('m',)

    def __post_init__(self):
        m = check_finite(self.m, 'm')
        if m > 0:
            raise InvariantViolationError(
                'm must be non-positive, got {}'.format(m), 'm')
        object.__setattr__(self, 'm', m)

    def evaluate(self, t):
        t = np.asarray(t, dtype=np.float64)
        values = np.clip(self.m * t + 1.0, 0.0, 1.0)
        return _scalar_or_array(values, t)

    def mean(self, effort_range):
        effort_range = float(effort_range)
        if self.m == 0 or effort_range <= 0:
            return 1.0
        t_zero = -1.0 / self.m
        if effort_range <= t_zero:
            return 1.0 + self.m * effort_range / 2.0
        return t_zero / 2.0 / effort_range


@dataclass(frozen=True)
class Constant(DifficultyCurve):
    """Effort-independent difficulty `theta0`."""
    theta0: float
    form = 'constant'
    code = 2
    parameters = ('theta0',)

    def __post_init__(self):
        object.__setattr__(self, 'theta0',
                           check_probability(self.theta0, 'theta0'))

    def evaluate(self, t):
        values = np.full(np.shape(t), self.theta0, dtype=np.float64)
        return _scalar_or_array(values, t)

    def mean(self, effort_range):
        return self.theta0


@dataclass(frozen=True)
class Sigmoid(DifficultyCurve):
    """Complementary logistic difficulty, 0.5 at ``t = t0``."""
    k: float
    t0: float
    form = 'sigmoid'
    code = 3
    parameters = ('k', 't0')

    def __post_init__(self):
        k = check_finite(self.k, 'k')
        if k <= 0:
            raise InvariantViolationError(
                'k must be positive, got {}'.format(k), 'k')
        object.__setattr__(self, 'k', k)
        object.__setattr__(self, 't0', check_non_negative(self.t0, 't0'))

    def evaluate(self, t):
        t = np.asarray(t, dtype=np.float64)
        # 1 / (1 + e^x) == exp(-log(1 + e^x)), stable for large |x|
        values = np.exp(-np.logaddexp(0.0, self.k * (t - self.t0)))
        return _scalar_or_array(values, t)

    def mean(self, effort_range):
        effort_range = float(effort_range)
        if effort_range <= 0:
            return self.evaluate(0.0)
        k, t0 = self.k, self.t0
        area = effort_range - (np.logaddexp(0.0, k * (effort_range - t0)) -
                               np.logaddexp(0.0, -k * t0)) / k
        return float(area / effort_range)


FORMS = (Exponential, Linear, Constant, Sigmoid)
UNDETECTABLE = Constant(1.0)


def form_from_code(code):
    """Return the curve class for the integer `code` (0-3)."""
    code = int(round(float(code)))
    if not 0 <= code < len(FORMS):
        raise InvariantViolationError(
            'Difficulty form code must be in 0-{}, got {}'.format(
                len(FORMS) - 1, code), 'form')
    return FORMS[code]


def form_from_name(name):
    """Return the curve class for `name`, e.g. ``'sigmoid'``."""
    for cls in FORMS:
        if cls.form == name:
            return cls
    raise InvariantViolationError(
        'Unknown difficulty form {!r}; expected one of {}'.format(
            name, [cls.form for cls in FORMS]), 'form')


def eval_difficulty(curve, t):
    """Probability that an application with effort `t` misses the fault.

    Parameters
    ----------
    curve : DifficultyCurve
    t : float or np.ndarray
        Effort in person-hours.

    Returns
    -------
    float or np.ndarray
        Values in [0, 1], non-increasing in `t`.

    """
    return curve.evaluate(t)


def mean_difficulty(curve, effort_range):
    """Mean of `curve` over efforts in [0, `effort_range`]."""
    return curve.mean(effort_range)


def _check_mean(mean_difficulty):
    try:
        mean_difficulty = float(mean_difficulty)
    except (TypeError, ValueError):
        raise CalibrationError(
            'Mean difficulty must be a real number, got {!r}'.format(
                mean_difficulty))
    if not 0.0 < mean_difficulty <= 1.0:
        raise CalibrationError(
            'Mean difficulty must lie in (0, 1], got {}'.format(
                mean_difficulty))
    return mean_difficulty


def calibrate_exponential(mean_difficulty):
    """Exponential curve whose rate is the inverse of the mean difficulty.

    Parameters
    ----------
    mean_difficulty : float
        Empirical mean difficulty in (0, 1].

    Returns
    -------
    Exponential
        ``Exponential(lam=1 / mean_difficulty)``.

    Notes
    -----
    Means below one give ``lam > 1``; such curves exceed one for small
    efforts and are clamped at one by `Exponential.evaluate`.

    """
    return Exponential(1.0 / _check_mean(mean_difficulty))


def _bracket_upwards(func, low, high):
    while func(high) < 0:
        low, high = high, 2.0 * high
        if high > 1e12:
            raise CalibrationError('Could not bracket the calibration target')
    return low, high


def calibrate(form, mean, effort_range):
    """Curve of family `form` with the given mean over [0, effort_range].

    Parameters
    ----------
    form : type or str
        One of the curve classes in `FORMS` or its name.
    mean : float
        Target mean difficulty in (0, 1].
    effort_range : float
        Upper end of the effort interval the mean is taken over.

    Returns
    -------
    DifficultyCurve

    Notes
    -----
    A mean of exactly one yields ``Constant(1.0)`` whatever the form: a curve
    bounded by one can only average one if it never detects. Exponential
    curves follow `calibrate_exponential` and ignore `effort_range`. Sigmoid
    curves keep the steepness ``k = 8 / effort_range`` and solve for ``t0``;
    when even ``t0 = 0`` is too difficult, ``t0`` stays at 0 and ``k`` is
    solved instead.

    """
    if isinstance(form, str):
        form = form_from_name(form)
    mean = _check_mean(mean)
    if mean == 1.0:
        return UNDETECTABLE
    if form is Exponential:
        return calibrate_exponential(mean)
    if form is Constant:
        return Constant(mean)
    effort_range = float(effort_range)
    if not effort_range > 0:
        raise CalibrationError(
            'Effort range must be positive, got {}'.format(effort_range))
    if form is Linear:
        if mean >= 0.5:
            return Linear(2.0 * (mean - 1.0) / effort_range)
        return Linear(-1.0 / (2.0 * mean * effort_range))
    if form is Sigmoid:
        k = 8.0 / effort_range

        def excess_t0(t0):
            return Sigmoid(k, t0).mean(effort_range) - mean

        if excess_t0(0.0) >= 0:
            def excess_k(steepness):
                return mean - Sigmoid(steepness, 0.0).mean(effort_range)
            low, high = _bracket_upwards(excess_k, k, 2.0 * k)
            curve = Sigmoid(brentq(excess_k, low, high), 0.0)
            warnings.warn('Mean difficulty {} needs a steeper sigmoid than k = '
                          '{:g}; calibrated {}'.format(mean, k, curve))
            return curve
        low, high = _bracket_upwards(excess_t0, 0.0, effort_range)
        return Sigmoid(k, brentq(excess_t0, low, high))
    raise CalibrationError('Unknown difficulty form {!r}'.format(form))
