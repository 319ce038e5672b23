"""Extended Fourier amplitude sensitivity test (eFAST).

For every factor of interest a search curve is sampled on which that factor
oscillates at the high frequency ``omega_max`` while all other factors
oscillate at low complementary frequencies. The output variance found at the
harmonics of ``omega_max`` estimates the factor's first-order index; the
variance found at the low frequencies belongs to the other factors, so its
complement estimates the total-order index.

Uniform variates along a curve are produced by the carrier
``G(s) = 1/2 + arcsin(sin(omega * s + phase)) / pi``, which is uniformly
distributed, and mapped through each factor's inverse CDF.
"""
from dataclasses import dataclass, field
import logging
import warnings

import numpy as np

from qecon.exceptions import DesignError
from qecon.utils.parallel import ordered_map
from qecon.utils.seeding import DEFAULT_SEED, derive_seed, name_key
from qecon.utils.sorting import natural_sort, rank_descending

__all__ = ['Factor', 'SensitivityDesign', 'SensitivityResult', 'frequencies',
           'generate_samples', 'analyze_outputs', 'efast_indices',
           'FIXING_THRESHOLD']

logger = logging.getLogger(__name__)

FIXING_THRESHOLD = 0.05
GROUPINGS = ('abstract', 'detailed')


@dataclass(frozen=True)
class Factor(object):
    """An uncertain model input.

    Parameters
    ----------
    name : str
    distribution : FactorDistribution
    binding : Binding, optional
        Where the sampled value goes in a scenario template. Benchmark models
        that take the sample row directly need none.

    """
    name: str
    distribution: object
    binding: object = None


@dataclass
class SensitivityDesign(object):
    """Factors and eFAST sampling parameters.

    Parameters
    ----------
    factors : list of Factor
    grouping : str, optional, default='abstract'
        ``'abstract'`` or ``'detailed'``; informational, the factors carry
        their own bindings.
    samples_per_curve : int, optional, default=1025
        Ns, odd and at least ``4 * interference**2 + 1``.
    resamples : int, optional, default=4
        Nr, number of independent random phase shifts.
    interference : int, optional, default=4
        M, number of harmonics of ``omega_max`` attributed to a factor.

    """
    factors: list
    grouping: str = 'abstract'
    samples_per_curve: int = 1025
    resamples: int = 4
    interference: int = 4
    name: str = ''
    template: object = field(default=None, repr=False)

    def __post_init__(self):
        self.factors = list(self.factors)
        self.validate()

    @property
    def names(self):
        return [factor.name for factor in self.factors]

    @property
    def omega_max(self):
        return (self.samples_per_curve - 1) // (2 * self.interference)

    @property
    def n_rows(self):
        return (self.resamples * len(self.factors) * self.samples_per_curve)

    def validate(self):
        if not self.factors:
            raise DesignError('A sensitivity design needs at least one factor')
        names = self.names
        duplicates = sorted({n for n in names if names.count(n) > 1})
        if duplicates:
            raise DesignError('Duplicate factor names: {}'.format(duplicates))
        if self.grouping not in GROUPINGS:
            raise DesignError('grouping must be one of {}, got {!r}'.format(
                GROUPINGS, self.grouping))
        for attr in ('samples_per_curve', 'resamples', 'interference'):
            value = getattr(self, attr)
            if isinstance(value, bool) or int(value) != value or value < 1:
                raise DesignError('{} must be a positive integer, got '
                                  '{!r}'.format(attr, value))
            setattr(self, attr, int(value))
        ns, m = self.samples_per_curve, self.interference
        if ns % 2 == 0:
            raise DesignError('samples_per_curve must be odd, got {}'.format(
                ns))
        if ns < 4 * m * m + 1:
            raise DesignError(
                'samples_per_curve = {} is too small for interference {}: at '
                'least {} samples are needed so that complementary '
                'frequencies stay below omega_max / (2 M)'.format(
                    ns, m, 4 * m * m + 1))

    def canonical_order(self):
        return sorted(self.names, key=natural_sort)


def frequencies(design, factor_name):
    """Frequency of every factor on the search curve of `factor_name`.

    Returns
    -------
    dict of str -> int
        ``omega_max`` for `factor_name`; the others cycle through the
        complementary frequencies in natural-sort order of the factor names.

    Notes
    -----
    Complementary frequencies run from 2 to the largest ``omega`` with
    ``2 M omega < omega_max``, so no harmonic up to order ``2 M`` reaches
    ``omega_max``. Frequency 1 is only used when nothing else fits: with
    ``Ns - 1 = 2 M omega_max`` its sidebands around ``2 p omega_max`` fold
    back onto harmonics of ``omega_max``.

    """
    canonical = design.canonical_order()
    others = [name for name in canonical if name != factor_name]
    omega_max = design.omega_max
    top = (omega_max - 1) // (2 * design.interference)
    pool = np.arange(2, top + 1) if top >= 2 else np.array([1])
    complementary = pool[np.arange(len(others)) % len(pool)]
    omegas = {name: int(omega) for name, omega in zip(others, complementary)}
    omegas[factor_name] = omega_max
    return omegas


def _phase(seed, curve_name, resample, column_name):
    rng = np.random.default_rng(derive_seed(
        seed, name_key(curve_name), resample, name_key(column_name)))
    return 2.0 * np.pi * rng.random()


def _curve_uniforms(design, curve_name, resample, seed):
    ns = design.samples_per_curve
    s = 2.0 * np.pi * np.arange(ns) / ns
    omegas = frequencies(design, curve_name)
    uniforms = np.empty((ns, len(design.factors)))
    for col, name in enumerate(design.names):
        angle = omegas[name] * s + _phase(seed, curve_name, resample, name)
        uniforms[:, col] = 0.5 + np.arcsin(np.sin(angle)) / np.pi
    return uniforms


def generate_samples(design, seed=DEFAULT_SEED):
    """eFAST sample matrix of `design`.

    Parameters
    ----------
    design : SensitivityDesign
    seed : int, optional, default=12345

    Returns
    -------
    np.ndarray, shape=(resamples * n_factors * samples_per_curve, n_factors)
        Rows are grouped by resample, then by factor of interest in
        declaration order; columns follow the declaration order.

    """
    if seed is None:
        seed = DEFAULT_SEED
    design.validate()
    blocks = []
    for resample in range(design.resamples):
        for factor in design.factors:
            uniforms = _curve_uniforms(design, factor.name, resample, seed)
            block = np.empty_like(uniforms)
            for col, column in enumerate(design.factors):
                block[:, col] = column.distribution.ppf(uniforms[:, col])
            blocks.append(block)
    return np.vstack(blocks)


@dataclass
class SensitivityResult(object):
    """First- and total-order indices per factor, in declaration order."""
    factors: list
    first_order: np.ndarray
    total_order: np.ndarray
    first_order_std: np.ndarray = None
    total_order_std: np.ndarray = None
    degenerate: bool = False
    seed: int = DEFAULT_SEED

    def index(self, name):
        return self.factors.index(name)

    def first(self, name):
        return float(self.first_order[self.index(name)])

    def total(self, name):
        return float(self.total_order[self.index(name)])

    def prioritisation(self):
        """Factors ranked by descending first-order index."""
        return rank_descending(self.factors, self.first_order)

    def fixing(self):
        """Factors ranked by ascending total-order index."""
        return list(reversed(rank_descending(self.factors, self.total_order)))

    def fixable(self, threshold=FIXING_THRESHOLD):
        """Factors whose total-order index is below `threshold`."""
        return [name for name in self.fixing()
                if self.total(name) < threshold]

    def rows(self):
        """(factor, first, total) sorted by descending total order."""
        return [(name, self.first(name), self.total(name))
                for name in rank_descending(self.factors, self.total_order)]


def _spectrum(outputs):
    ns = outputs.shape[-1]
    amplitudes = np.fft.fft(outputs)[..., 1:(ns + 1) // 2]
    return np.abs(amplitudes / ns) ** 2


def analyze_outputs(outputs, design, seed=DEFAULT_SEED):
    """Indices from model outputs aligned with `generate_samples` rows.

    Parameters
    ----------
    outputs : array-like, shape=(n_rows,)
    design : SensitivityDesign
    seed : int, optional
        Only recorded in the result.

    Returns
    -------
    SensitivityResult

    Raises
    ------
    DesignError
        If the number of outputs does not match the design.

    """
    outputs = np.asarray(outputs, dtype=np.float64).ravel()
    n_factors, ns = len(design.factors), design.samples_per_curve
    if outputs.size != design.n_rows:
        raise DesignError('Design expects {} outputs, got {}'.format(
            design.n_rows, outputs.size))
    if not np.all(np.isfinite(outputs)):
        raise DesignError('Model outputs contain non-finite values')
    blocks = outputs.reshape(design.resamples, n_factors, ns)

    scale = max(1.0, float(np.max(np.abs(outputs))))
    if np.ptp(outputs) <= 1e-12 * scale:
        warnings.warn('Model output has zero variance over the sample; '
                      'reporting all indices as 0')
        zeros = np.zeros(n_factors)
        return SensitivityResult(design.names, zeros, zeros.copy(),
                                 zeros.copy(), zeros.copy(), degenerate=True,
                                 seed=seed)

    omega_max, m = design.omega_max, design.interference
    power = _spectrum(blocks)
    variance = 2.0 * np.sum(power, axis=-1)
    harmonics = np.arange(1, m + 1) * omega_max - 1
    first = 2.0 * np.sum(power[..., harmonics], axis=-1)
    low = 2.0 * np.sum(power[..., :omega_max // 2], axis=-1)
    with np.errstate(invalid='ignore', divide='ignore'):
        first = np.where(variance > 0, first / variance, 0.0)
        total = np.where(variance > 0, 1.0 - low / variance, 0.0)
    return SensitivityResult(
        factors=design.names,
        first_order=np.clip(first.mean(axis=0), 0.0, 1.0),
        total_order=np.clip(total.mean(axis=0), 0.0, 1.0),
        first_order_std=first.std(axis=0),
        total_order_std=total.std(axis=0),
        seed=seed)


def _evaluate_chunk(task):
    model, rows = task
    return np.array([model(row) for row in rows], dtype=np.float64)


def evaluate_model(model, samples, jobs=1, chunks=None):
    """Evaluate `model` on every sample row, in row order."""
    if chunks is None:
        chunks = max(1, len(samples) // 256)
    tasks = [(model, rows) for rows in np.array_split(samples, chunks)]
    return np.concatenate(ordered_map(_evaluate_chunk, tasks, jobs=jobs))


def efast_indices(model, design, seed=DEFAULT_SEED, jobs=1):
    """Run a complete eFAST analysis.

    Parameters
    ----------
    model : callable
        Maps one sample row (declaration order) to a real output.
    design : SensitivityDesign
    seed : int, optional, default=12345
    jobs : int, optional, default=1
        Worker processes for the model evaluations; 0 uses every core.

    Returns
    -------
    SensitivityResult

    """
    if seed is None:
        seed = DEFAULT_SEED
    samples = generate_samples(design, seed)
    logger.info('Evaluating %d eFAST samples of %d factors', len(samples),
                len(design.factors))
    outputs = evaluate_model(model, samples, jobs=jobs)
    return analyze_outputs(outputs, design, seed=seed)
