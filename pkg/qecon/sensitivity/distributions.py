"""Marginal distributions of sensitivity factors.

Each distribution maps uniform variates in [0, 1] to factor values through
its inverse cumulative distribution function, the form needed to sample along
an eFAST search curve.
"""
import numpy as np
from scipy import stats

from qecon.exceptions import DesignError

__all__ = ['FactorDistribution', 'Uniform', 'DiscreteUniform', 'Triangular',
           'TruncatedNormal', 'distribution_from_dict']


def _real(value, name):
    try:
        value = float(value)
    except (TypeError, ValueError):
        raise DesignError('{} must be a real number, got {!r}'.format(
            name, value))
    if not np.isfinite(value):
        raise DesignError('{} must be finite, got {}'.format(name, value))
    return value


class FactorDistribution(object):
    """Base class of factor distributions."""
    kind = None

    def ppf(self, u):
        """Inverse CDF, vectorized over `u`; values stay within `bounds`."""
        u = np.clip(np.asarray(u, dtype=np.float64), 0.0, 1.0)
        low, high = self.bounds()
        values = np.clip(self._ppf(u), low, high)
        if values.ndim == 0:
            return float(values)
        return values

    def _ppf(self, u):
        raise NotImplementedError

    def bounds(self):
        raise NotImplementedError

    def midpoint(self):
        """Median of the distribution, the nominal value of a factor."""
        return self.ppf(0.5)

    def to_dict(self):
        raise NotImplementedError

    def __eq__(self, other):
        return type(self) is type(other) and self.to_dict() == other.to_dict()

    def __hash__(self):
        return hash(repr(self))

    def __repr__(self):
        params = dict(self.to_dict())
        params.pop('kind')
        return '{}({})'.format(type(self).__name__, ', '.join(
            '{}={!r}'.format(k, v) for k, v in params.items()))


class Uniform(FactorDistribution):
    """Continuous uniform distribution on [lo, hi]."""
    kind = 'uniform'

    def __init__(self, lo, hi):
        self.lo, self.hi = _real(lo, 'lo'), _real(hi, 'hi')
        if self.lo > self.hi:
            raise DesignError('Uniform needs lo <= hi, got {} > {}'.format(
                self.lo, self.hi))
        self._dist = stats.uniform(loc=self.lo, scale=self.hi - self.lo)

    def _ppf(self, u):
        if self.lo == self.hi:
            return np.full(np.shape(u), self.lo)
        return self._dist.ppf(u)

    def bounds(self):
        return self.lo, self.hi

    def to_dict(self):
        return {'kind': self.kind, 'lo': self.lo, 'hi': self.hi}


class DiscreteUniform(FactorDistribution):
    """Equally likely choice among `values`.

    The unit interval is cut into ``len(values)`` equal parts, so thresholding
    a uniform carrier keeps every value equally likely.
    """
    kind = 'discrete_uniform'

    def __init__(self, values):
        values = [_real(v, 'values') for v in values]
        if not values:
            raise DesignError('DiscreteUniform needs at least one value')
        self.values = values
        self._array = np.array(values)

    def _ppf(self, u):
        count = len(self.values)
        index = np.minimum(np.floor(u * count).astype(int), count - 1)
        return self._array[index]

    def bounds(self):
        return min(self.values), max(self.values)

    def to_dict(self):
        return {'kind': self.kind, 'values': list(self.values)}


class Triangular(FactorDistribution):
    """Triangular distribution on [lo, hi] peaking at `mode`."""
    kind = 'triangular'

    def __init__(self, lo, mode, hi):
        self.lo, self.mode, self.hi = (_real(lo, 'lo'), _real(mode, 'mode'),
                                       _real(hi, 'hi'))
        if not self.lo <= self.mode <= self.hi:
            raise DesignError('Triangular needs lo <= mode <= hi, got '
                              '{}, {}, {}'.format(self.lo, self.mode, self.hi))
        width = self.hi - self.lo
        if width > 0:
            self._dist = stats.triang(c=(self.mode - self.lo) / width,
                                      loc=self.lo, scale=width)

    def _ppf(self, u):
        if self.lo == self.hi:
            return np.full(np.shape(u), self.lo)
        return self._dist.ppf(u)

    def bounds(self):
        return self.lo, self.hi

    def to_dict(self):
        return {'kind': self.kind, 'lo': self.lo, 'mode': self.mode,
                'hi': self.hi}


class TruncatedNormal(FactorDistribution):
    """Normal distribution with `mean` and `sd` truncated to [lo, hi]."""
    kind = 'truncated_normal'

    def __init__(self, mean, sd, lo, hi):
        self.mean, self.sd = _real(mean, 'mean'), _real(sd, 'sd')
        self.lo, self.hi = _real(lo, 'lo'), _real(hi, 'hi')
        if self.sd <= 0:
            raise DesignError('TruncatedNormal needs sd > 0, got {}'.format(
                self.sd))
        if self.lo >= self.hi:
            raise DesignError('TruncatedNormal needs lo < hi, got {} >= '
                              '{}'.format(self.lo, self.hi))
        self._dist = stats.truncnorm(a=(self.lo - self.mean) / self.sd,
                                     b=(self.hi - self.mean) / self.sd,
                                     loc=self.mean, scale=self.sd)

    def _ppf(self, u):
        return self._dist.ppf(u)

    def bounds(self):
        return self.lo, self.hi

    def to_dict(self):
        return {'kind': self.kind, 'mean': self.mean, 'sd': self.sd,
                'lo': self.lo, 'hi': self.hi}


_KINDS = {cls.kind: cls for cls in
          (Uniform, DiscreteUniform, Triangular, TruncatedNormal)}


def distribution_from_dict(data):
    """Build a distribution from ``{'kind': ..., <parameters>}``."""
    data = dict(data)
    kind = data.pop('kind', None)
    try:
        cls = _KINDS[kind]
    except KeyError:
        raise DesignError('Unknown distribution kind {!r}; expected one of '
                          '{}'.format(kind, sorted(_KINDS)))
    try:
        return cls(**data)
    except TypeError:
        raise DesignError('Invalid parameters {} for distribution {!r}'.format(
            sorted(data), kind))
