"""Sample and output interchange files for external model runs.

``samples.csv`` holds one column per factor, headed by the factor names, and
one row per model evaluation in `generate_samples` order. ``output.csv``
holds the single column ``y`` aligned with those rows. An external tool can
evaluate the samples and hand the outputs back to `analyze_outputs`.
"""
import numpy as np

from qecon.exceptions import DesignError

__all__ = ['write_samples', 'read_samples', 'write_outputs', 'read_outputs',
           'OUTPUT_COLUMN']

OUTPUT_COLUMN = 'y'

_FMT = '%.17g'


def write_samples(filename, samples, names):
    """Write a sample matrix with its factor names as header."""
    samples = np.atleast_2d(np.asarray(samples, dtype=np.float64))
    if samples.shape[1] != len(names):
        raise DesignError('Sample matrix has {} columns for {} factor '
                          'names'.format(samples.shape[1], len(names)))
    np.savetxt(filename, samples, fmt=_FMT, delimiter=',',
               header=','.join(names), comments='', encoding='utf-8')


def _read_header(filename):
    with open(filename, 'r', encoding='utf-8') as csv_file:
        return csv_file.readline().strip().split(',')


def read_samples(filename):
    """Read ``samples.csv``.

    Returns
    -------
    names : list of str
    samples : np.ndarray, shape=(n_rows, n_factors)

    """
    names = _read_header(filename)
    samples = np.loadtxt(filename, delimiter=',', skiprows=1, ndmin=2,
                         encoding='utf-8')
    if samples.size and samples.shape[1] != len(names):
        raise DesignError('{}: {} factor names but {} columns'.format(
            filename, len(names), samples.shape[1]))
    return names, samples


def write_outputs(filename, outputs):
    """Write model outputs as the single column ``y``."""
    outputs = np.asarray(outputs, dtype=np.float64).ravel()
    np.savetxt(filename, outputs, fmt=_FMT, header=OUTPUT_COLUMN,
               comments='', encoding='utf-8')


def read_outputs(filename):
    """Read ``output.csv`` into a one-dimensional array."""
    header = _read_header(filename)
    if header != [OUTPUT_COLUMN]:
        raise DesignError('{}: expected the single column {!r}, got '
                          '{}'.format(filename, OUTPUT_COLUMN, header))
    return np.loadtxt(filename, skiprows=1, ndmin=1, encoding='utf-8')
