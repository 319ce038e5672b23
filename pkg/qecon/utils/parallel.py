import logging
import os
from concurrent.futures import ProcessPoolExecutor

__all__ = ['resolve_jobs', 'ordered_map']

logger = logging.getLogger(__name__)


def resolve_jobs(jobs):
    """Number of worker processes for `jobs` (0 means all cores)."""
    jobs = int(jobs)
    if jobs < 0:
        raise ValueError('jobs must be non-negative, got {}'.format(jobs))
    if jobs == 0:
        jobs = os.cpu_count() or 1
    return jobs


def ordered_map(func, tasks, jobs=1):
    """Apply `func` to every task and return the results in task order.

    With ``jobs > 1`` the tasks run in a `ProcessPoolExecutor`; `func` and the
    tasks must be picklable. Results are identical for every `jobs` value.
    """
    tasks = list(tasks)
    jobs = min(resolve_jobs(jobs), max(len(tasks), 1))
    if jobs == 1:
        return [func(task) for task in tasks]
    logger.info('Running %d tasks on %d processes', len(tasks), jobs)
    with ProcessPoolExecutor(max_workers=jobs) as executor:
        return list(executor.map(func, tasks))
