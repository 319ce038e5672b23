"""Monte-Carlo simulation of the defect-detection process.

Every simulated run draws, for each active application and each fault, one
uniform detection variable and, for each fault, one uniform field-failure
variable. A fault is detected in its own right by application ``x`` when its
detection variable falls below ``1 - theta_x`` and neither the fault nor one
of its ancestors was detected by an earlier application. Detection removes
the fault together with all its transitive successors. Field failures are
drawn for every fault, removed or not, so that each run splits the realized
field cost of the failing faults exactly into revenue and future costs. The
screened column reports the part of the revenue saved by faults removed only
through a detected ancestor.

Runs are simulated in blocks of `BLOCK_SIZE`; block ``b`` draws from
``default_rng(SeedSequence([seed, b]))`` with run-major layout, so results do
not depend on how blocks are distributed over processes.
"""
from dataclasses import dataclass
import logging
import math

import numpy as np

from qecon.economics import execution_cost
from qecon.evaluate import simulation_scenario
from qecon.exceptions import InvariantViolationError
from qecon.utils.parallel import ordered_map
from qecon.utils.seeding import DEFAULT_SEED, derive_seed

__all__ = ['SimOutcome', 'SimEstimate', 'simulate_once', 'simulate_runs',
           'estimate', 'block_seed', 'BLOCK_SIZE']

logger = logging.getLogger(__name__)

BLOCK_SIZE = 4096


@dataclass(frozen=True)
class SimOutcome(object):
    """Costs of one simulated world."""
    direct: float
    future: float
    revenue: float
    screened: float = 0.0


@dataclass(frozen=True)
class SimEstimate(object):
    """Sample means and standard errors over `n` simulated runs."""
    n: int
    mean_direct: float
    mean_future: float
    mean_revenue: float
    mean_screened: float
    stderr_direct: float
    stderr_future: float
    stderr_revenue: float
    stderr_screened: float
    seed: int = DEFAULT_SEED


class _Kernel(object):
    """Picklable, vectorized description of one (scenario, program) pair."""
    def __init__(self, scenario, program):
        scenario = simulation_scenario(scenario)
        applications = program.active()
        for technique_id in program.techniques:
            scenario.technique(technique_id)
        techniques = [scenario.technique(app.technique)
                      for app in applications]
        faults = scenario.faults
        self.n_apps, self.n_faults = len(applications), len(faults)
        self.detect_prob = np.zeros((self.n_apps, self.n_faults))
        self.removal = np.zeros((self.n_apps, self.n_faults))
        for row, (technique, app) in enumerate(zip(techniques, applications)):
            for col, fault in enumerate(faults):
                self.detect_prob[row, col] = 1.0 - technique.curve(
                    fault.id).evaluate(app.effort)
                self.removal[row, col] = technique.removal(fault.id)
        self.fixed = math.fsum(
            technique.setup_cost + execution_cost(technique, app.effort)
            for technique, app in zip(techniques, applications))
        self.closure_t = scenario.closure.T.astype(np.int64)
        self.pi = np.array([f.failure_probability for f in faults])
        self.field = np.array([f.field_cost for f in faults])

    @property
    def width(self):
        return self.n_apps * self.n_faults + self.n_faults

    def run(self, uniforms):
        """Costs of the runs given their uniforms, shape (runs, width).

        Returns
        -------
        np.ndarray, shape=(runs, 4)
            Columns direct, future, revenue, screened.

        """
        runs = uniforms.shape[0]
        split = self.n_apps * self.n_faults
        detected = (uniforms[:, :split].reshape(
            runs, self.n_apps, self.n_faults) < self.detect_prob)
        failing = uniforms[:, split:] < self.pi

        # an event for a fault or one of its ancestors removes the fault
        set_event = (detected.astype(np.int64) @ self.closure_t) > 0
        removed_by = np.logical_or.accumulate(set_event, axis=1)
        blocked = np.zeros_like(set_event)
        blocked[:, 1:] = removed_by[:, :-1]
        credited = detected & ~blocked
        credited_any = credited.any(axis=1)
        removed = set_event.any(axis=1)

        values = np.empty((runs, 4))
        values[:, 0] = self.fixed + np.sum(credited * self.removal,
                                           axis=(1, 2))
        values[:, 1] = np.sum((~removed & failing) * self.field, axis=1)
        values[:, 2] = np.sum((removed & failing) * self.field, axis=1)
        values[:, 3] = np.sum((removed & ~credited_any & failing) *
                              self.field, axis=1)
        return values


def block_seed(seed, block):
    """`SeedSequence` of block `block` of a simulation with master `seed`."""
    return derive_seed(seed, block)


def _run_block(task):
    kernel, seed, block, length = task
    rng = np.random.default_rng(block_seed(seed, block))
    return kernel.run(rng.random((length, kernel.width)))


def simulate_once(scenario, program, seed=DEFAULT_SEED):
    """Simulate one world.

    Parameters
    ----------
    scenario : Scenario or PracticalScenario
    program : Program
    seed : int or np.random.SeedSequence, optional, default=12345
        Seed for `np.random.default_rng`.

    Returns
    -------
    SimOutcome

    """
    kernel = _Kernel(scenario, program)
    rng = np.random.default_rng(seed)
    direct, future, revenue, screened = kernel.run(
        rng.random((1, kernel.width)))[0]
    return SimOutcome(direct=float(direct), future=float(future),
                      revenue=float(revenue), screened=float(screened))


def _check_runs(n):
    if isinstance(n, bool) or int(n) != n or n < 1:
        raise InvariantViolationError(
            'Number of runs must be a positive integer, got {!r}'.format(n),
            'n')
    return int(n)


def simulate_runs(scenario, program, n, seed=DEFAULT_SEED, jobs=1):
    """Per-run costs of `n` runs, shape (n, 4): direct, future, revenue,
    screened."""
    n = _check_runs(n)
    if seed is None:
        seed = DEFAULT_SEED
    kernel = _Kernel(scenario, program)
    tasks = [(kernel, seed, block, min(BLOCK_SIZE, n - block * BLOCK_SIZE))
             for block in range(-(-n // BLOCK_SIZE))]
    return np.concatenate(ordered_map(_run_block, tasks, jobs=jobs))


def estimate(scenario, program, n, seed=DEFAULT_SEED, jobs=1):
    """Estimate the expected costs of `program` by simulation.

    Parameters
    ----------
    scenario : Scenario or PracticalScenario
    program : Program
    n : int
        Number of runs, at least one.
    seed : int, optional, default=12345
        Master seed; the same seed gives bit-identical estimates.
    jobs : int, optional, default=1
        Worker processes; 0 uses every core.

    Returns
    -------
    SimEstimate
        Standard errors are ``std(ddof=1) / sqrt(n)``, zero for ``n = 1``.

    """
    if seed is None:
        seed = DEFAULT_SEED
    values = simulate_runs(scenario, program, n, seed=seed, jobs=jobs)
    n = values.shape[0]
    means = values.mean(axis=0)
    if n > 1:
        stderrs = values.std(axis=0, ddof=1) / np.sqrt(n)
    else:
        stderrs = np.zeros(4)
    logger.info('Simulated %d runs with seed %d', n, seed)
    return SimEstimate(
        n=n, mean_direct=float(means[0]), mean_future=float(means[1]),
        mean_revenue=float(means[2]), mean_screened=float(means[3]),
        stderr_direct=float(stderrs[0]), stderr_future=float(stderrs[1]),
        stderr_revenue=float(stderrs[2]), stderr_screened=float(stderrs[3]),
        seed=int(seed))
