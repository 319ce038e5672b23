"""Test functions with known sensitivity indices.

The Ishigami function ``sin(x1) + a sin(x2)^2 + b x3^4 sin(x1)`` with
``x_i ~ U(-pi, pi)`` has the partial variances

    V1  = (1 + b pi^4 / 5)^2 / 2
    V2  = a^2 / 8
    V13 = b^2 pi^8 (1/18 - 1/50)
    V   = a^2 / 8 + b pi^4 / 5 + b^2 pi^8 / 18 + 1/2

and no other non-zero terms.
"""
import numpy as np

__all__ = ['Ishigami', 'Additive', 'ConstantModel', 'BENCHMARKS',
           'ishigami_variances',
           'ishigami_indices']


class Ishigami(object):
    """The Ishigami function as a picklable row model."""
    def __init__(self, a=7.0, b=0.1):
        self.a = a
        self.b = b

    def __call__(self, row):
        x1, x2, x3 = row
        return (np.sin(x1) + self.a * np.sin(x2) ** 2 +
                self.b * x3 ** 4 * np.sin(x1))


class Additive(object):
    """Weighted sum of the factors, ``sum_i w_i x_i``."""
    def __init__(self, weights=None):
        self.weights = weights

    def __call__(self, row):
        row = np.asarray(row, dtype=np.float64)
        if self.weights is None:
            return float(np.sum(row))
        return float(np.dot(self.weights, row))


class ConstantModel(object):
    """Ignores its input; the degenerate case of every analysis."""
    def __init__(self, value=1.0):
        self.value = value

    def __call__(self, row):
        return self.value


def ishigami_variances(a=7.0, b=0.1):
    """Partial variances ``(V1, V2, V3, V13, V)`` of the Ishigami function."""
    v1 = 0.5 * (1.0 + b * np.pi ** 4 / 5.0) ** 2
    v2 = a ** 2 / 8.0
    v13 = b ** 2 * np.pi ** 8 * (1.0 / 18.0 - 1.0 / 50.0)
    total = a ** 2 / 8.0 + b * np.pi ** 4 / 5.0 + b ** 2 * np.pi ** 8 / 18.0 + 0.5
    return v1, v2, 0.0, v13, total


def ishigami_indices(a=7.0, b=0.1):
    """Analytic first- and total-order indices of the Ishigami function.

    Returns
    -------
    first : np.ndarray, shape=(3,)
    total : np.ndarray, shape=(3,)

    """
    v1, v2, v3, v13, total = ishigami_variances(a, b)
    first = np.array([v1, v2, v3]) / total
    total_order = np.array([v1 + v13, v2, v3 + v13]) / total
    return first, total_order


BENCHMARKS = {
    'ishigami': Ishigami,
    'additive': Additive,
    'constant': ConstantModel,
}
