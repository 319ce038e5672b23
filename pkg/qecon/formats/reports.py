"""CSV and text reports of evaluation, simulation, sensitivity and
optimization results.

Reals are written with `repr`, the shortest text that reads back to the
same double. Files are UTF-8 with LF line endings.
"""
import csv
import io
import os

from qecon.exceptions import InputError
from qecon.formats.scenario_file import format_program
from qecon.optimize import OptimizationResult
from qecon.scenario import CostBreakdown
from qecon.sensitivity.efast import SensitivityResult
from qecon.simulation import SimEstimate

__all__ = ['FORMATS', 'write_report', 'report_filename', 'save_report',
           'format_real']

FORMATS = ('csv', 'text')

BREAKDOWN_COLUMNS = ('direct', 'future', 'revenue', 'roi')
ESTIMATE_COLUMNS = ('n', 'mean_direct', 'mean_future', 'mean_revenue',
                    'mean_screened', 'stderr_direct', 'stderr_future',
                    'stderr_revenue', 'stderr_screened')
SENSITIVITY_COLUMNS = ('factor', 'first_order', 'total_order')
OPTIMUM_COLUMNS = ('objective', 'evaluations', 'total_effort', 'program')

_BASENAMES = (
    (CostBreakdown, 'breakdown'),
    (SimEstimate, 'estimate'),
    (SensitivityResult, 'sensitivity'),
    (OptimizationResult, 'optimum'),
)


def format_real(value):
    return repr(float(value))


def _csv(header, rows):
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator='\n')
    writer.writerow(header)
    writer.writerows(rows)
    return buffer.getvalue()


def _table(rows):
    """Left-aligned columns separated by two spaces."""
    widths = [max(len(row[k]) for row in rows) for k in range(len(rows[0]))]
    return ''.join('  '.join(cell.ljust(width) for cell, width
                             in zip(row, widths)).rstrip() + '\n'
                   for row in rows)


def _breakdown_csv(result):
    return _csv(BREAKDOWN_COLUMNS, [[format_real(getattr(result, name))
                                     for name in BREAKDOWN_COLUMNS]])


def _breakdown_text(result):
    rows = [(name, format_real(getattr(result, name)))
            for name in BREAKDOWN_COLUMNS + ('screened',)]
    rows.append(('net_benefit', format_real(result.net_benefit)))
    return _table(rows)


def _estimate_csv(result):
    return _csv(ESTIMATE_COLUMNS, [
        [str(result.n)] + [format_real(getattr(result, name))
                           for name in ESTIMATE_COLUMNS[1:]]])


def _estimate_text(result):
    rows = [('quantity', 'mean', 'stderr')]
    for name in ('direct', 'future', 'revenue', 'screened'):
        rows.append((name, format_real(getattr(result, 'mean_' + name)),
                     format_real(getattr(result, 'stderr_' + name))))
    return 'n: {}\n'.format(result.n) + _table(rows)


def _sensitivity_csv(result):
    header = SENSITIVITY_COLUMNS
    rows = [[name, format_real(result.first(name)),
             format_real(result.total(name))] for name in result.factors]
    if result.degenerate:
        header = header + ('degenerate',)
        for row in rows:
            row.append('true')
    return _csv(header, rows)


def _sensitivity_text(result):
    text = ''
    if result.degenerate:
        text += '# degenerate: the model output does not vary\n'
    rows = [SENSITIVITY_COLUMNS]
    rows += [(name, format_real(first), format_real(total))
             for name, first, total in result.rows()]
    text += _table(rows)
    fixable = result.fixable()
    text += 'prioritisation: {}\n'.format(', '.join(result.prioritisation()))
    text += 'fixable: {}\n'.format(', '.join(fixable) if fixable else '-')
    return text


def _optimum_row(result):
    program = result.best_program
    return [format_real(result.objective), str(result.evaluations),
            format_real(program.total_effort), format_program(program)]


def _optimum_csv(result):
    return _csv(OPTIMUM_COLUMNS, [_optimum_row(result)])


def _optimum_text(result):
    text = _table(list(zip(OPTIMUM_COLUMNS, _optimum_row(result))))
    if result.trace:
        text += 'trace:\n' + _table(
            [('evaluations', 'objective')] +
            [(str(count), format_real(value))
             for count, value in result.trace])
    return text


_WRITERS = {
    ('breakdown', 'csv'): _breakdown_csv,
    ('breakdown', 'text'): _breakdown_text,
    ('estimate', 'csv'): _estimate_csv,
    ('estimate', 'text'): _estimate_text,
    ('sensitivity', 'csv'): _sensitivity_csv,
    ('sensitivity', 'text'): _sensitivity_text,
    ('optimum', 'csv'): _optimum_csv,
    ('optimum', 'text'): _optimum_text,
}


def _basename(result):
    for cls, name in _BASENAMES:
        if isinstance(result, cls):
            return name
    raise TypeError('No report format for {!r}'.format(type(result)))


def _check_format(fmt):
    if fmt not in FORMATS:
        raise InputError('format must be one of {}, got {!r}'.format(
            FORMATS, fmt))


def write_report(result, fmt='csv', seed=None):
    """Serialize `result` into report bytes.

    Parameters
    ----------
    result : CostBreakdown, SimEstimate, SensitivityResult or
             OptimizationResult
    fmt : str, optional, default='csv'
        ``'csv'`` or ``'text'``.
    seed : int, optional
        Written as a ``seed:`` first line of text reports of randomized
        results.

    Returns
    -------
    bytes

    """
    _check_format(fmt)
    name = _basename(result)
    text = _WRITERS[name, fmt](result)
    if fmt == 'text' and seed is not None:
        text = 'seed: {}\n'.format(seed) + text
    return text.encode('utf-8')


def report_filename(result, fmt='csv'):
    """``breakdown.csv``, ``sensitivity.txt``, ... for `result`."""
    _check_format(fmt)
    return '{}.{}'.format(_basename(result),
                          'csv' if fmt == 'csv' else 'txt')


def save_report(result, out_dir='.', fmt='csv', seed=None):
    """Write the report of `result` into `out_dir` and return its path."""
    os.makedirs(out_dir, exist_ok=True)
    path = os.path.join(out_dir, report_filename(result, fmt))
    with open(path, 'wb') as report:
        report.write(write_report(result, fmt, seed=seed))
    return path
