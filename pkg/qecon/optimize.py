"""Choose technique efforts and order maximizing revenues minus direct costs.

Candidate programs always list every technique of the scenario exactly once;
a zero effort skips a technique while keeping its position. Two solvers are
provided: `optimize_exhaustive` enumerates every precedence-respecting order
and every combination of effort levels, `optimize_heuristic` runs seeded
random-restart steepest-ascent hill climbers.
"""
from dataclasses import dataclass, field
import itertools
import logging
import math
import warnings

import networkx as nx

from qecon.evaluate import net_benefit
from qecon.exceptions import ConstraintError, SearchSpaceError
from qecon.scenario import Program
from qecon.utils.parallel import ordered_map
from qecon.utils.seeding import DEFAULT_SEED, rng_for

__all__ = ['Constraints', 'OptimizationResult', 'net_benefit',
           'validate_program', 'optimize_exhaustive', 'optimize_heuristic',
           'canonical_start', 'DEFAULT_CEILING', 'TIE_TOLERANCE']

logger = logging.getLogger(__name__)

DEFAULT_CEILING = 1000000
DEFAULT_EFFORT_CAP = 100.0
TIE_TOLERANCE = 1e-9
FEASIBILITY_TOLERANCE = 1e-9
MAX_STALE_RESTARTS = 100


@dataclass
class Constraints(object):
    """Restrictions on candidate programs.

    Parameters
    ----------
    max_total_effort : float, optional
        Upper bound on the summed effort in person-hours.
    allowed_levels : dict of int -> sequence of float, optional
        Admissible efforts per technique, e.g. ``{6: [0, 40]}``.
    precedence : sequence of (int, int), optional
        Pairs ``(a, b)``: technique ``a`` comes before technique ``b``.

    """
    max_total_effort: float = None
    allowed_levels: dict = field(default_factory=dict)
    precedence: tuple = ()

    def __post_init__(self):
        if self.max_total_effort is not None:
            self.max_total_effort = float(self.max_total_effort)
            if not self.max_total_effort >= 0:
                raise ConstraintError(
                    'max_total_effort must be non-negative, got {}'.format(
                        self.max_total_effort))
        levels = {}
        for tid, values in (self.allowed_levels or {}).items():
            values = sorted({float(v) for v in values})
            if not values:
                raise ConstraintError(
                    'Technique {} has an empty level set'.format(tid))
            if values[0] < 0:
                raise ConstraintError(
                    'Technique {} has a negative effort level {}'.format(
                        tid, values[0]))
            levels[int(tid)] = tuple(values)
        self.allowed_levels = levels
        self.precedence = tuple((int(a), int(b)) for a, b in self.precedence)

    def graph(self, technique_ids):
        """Precedence order over `technique_ids` as a `networkx.DiGraph`.

        Raises
        ------
        ConstraintError
            On unknown techniques or a precedence cycle.

        """
        known = set(technique_ids)
        unknown = sorted(({a for a, _ in self.precedence} |
                          {b for _, b in self.precedence} |
                          set(self.allowed_levels)) - known)
        if unknown:
            raise ConstraintError(
                'Constraints name techniques {} missing from the scenario '
                '{}'.format(unknown, sorted(known)))
        graph = nx.DiGraph()
        graph.add_nodes_from(technique_ids)
        graph.add_edges_from(self.precedence)
        if not nx.is_directed_acyclic_graph(graph):
            cycle = nx.find_cycle(graph)
            raise ConstraintError('Precedence constraints form a cycle: '
                                  '{}'.format(' -> '.join(
                                      str(edge[0]) for edge in cycle)))
        return graph

    def budget(self):
        if self.max_total_effort is None:
            return math.inf
        return self.max_total_effort


@dataclass
class OptimizationResult(object):
    """Best program found, its objective and the search effort spent.

    `trace` lists ``(evaluations, objective)`` at every improvement of the
    best objective.
    """
    best_program: Program
    objective: float
    evaluations: int
    trace: list = field(default_factory=list)
    seed: int = None


def validate_program(program, scenario, constraints):
    """Check `program` against `scenario` and `constraints`.

    Raises
    ------
    ConstraintError
        Naming the first violated restriction.

    """
    technique_ids = scenario.technique_ids
    graph = constraints.graph(technique_ids)
    if sorted(program.techniques) != sorted(technique_ids):
        raise ConstraintError(
            'Program must apply every technique {} exactly once, got '
            '{}'.format(sorted(technique_ids), list(program.techniques)))
    budget = constraints.budget()
    if program.total_effort > budget + FEASIBILITY_TOLERANCE:
        raise ConstraintError('Total effort {} exceeds max_total_effort '
                              '{}'.format(program.total_effort, budget))
    for app in program:
        levels = constraints.allowed_levels.get(app.technique)
        if levels is not None and not any(
                abs(app.effort - level) <= FEASIBILITY_TOLERANCE
                for level in levels):
            raise ConstraintError(
                'Technique {} runs with effort {}, allowed levels are '
                '{}'.format(app.technique, app.effort, list(levels)))
    position = {tid: k for k, tid in enumerate(program.techniques)}
    for before, after in graph.edges():
        if position[before] > position[after]:
            raise ConstraintError('Technique {} must precede technique '
                                  '{}'.format(before, after))
    return True


def _is_better(objective, program, best_objective, best_program):
    if best_program is None or objective > best_objective + TIE_TOLERANCE:
        return True
    if objective < best_objective - TIE_TOLERANCE:
        return False
    return ((program.total_effort, program.sort_key()) <
            (best_program.total_effort, best_program.sort_key()))


def _levels_for(constraints, technique_ids, effort_grid):
    levels = []
    for tid in technique_ids:
        if tid in constraints.allowed_levels:
            levels.append(constraints.allowed_levels[tid])
        elif effort_grid is not None:
            levels.append(tuple(sorted({float(e) for e in effort_grid})))
        else:
            raise ConstraintError(
                'Technique {} has neither allowed levels nor an effort '
                'grid'.format(tid))
    return levels


def optimize_exhaustive(scenario, constraints, effort_grid=None,
                        ceiling=DEFAULT_CEILING):
    """Enumerate every feasible program and return the best one.

    Parameters
    ----------
    scenario : Scenario or PracticalScenario
    constraints : Constraints
    effort_grid : sequence of float, optional
        Efforts tried for techniques without allowed levels.
    ceiling : int, optional, default=1000000
        Largest number of candidate programs enumerated.

    Returns
    -------
    OptimizationResult

    Raises
    ------
    SearchSpaceError
        If there are more than `ceiling` candidate programs.
    ConstraintError
        If the constraints are infeasible.

    """
    technique_ids = scenario.technique_ids
    graph = constraints.graph(technique_ids)
    levels = _levels_for(constraints, technique_ids, effort_grid)
    assignments = math.prod(len(values) for values in levels)
    if assignments > ceiling:
        raise SearchSpaceError(assignments, ceiling)
    orders = []
    for order in nx.all_topological_sorts(graph):
        orders.append(tuple(order))
        if len(orders) * assignments > ceiling:
            raise SearchSpaceError(len(orders) * assignments, ceiling)
    if 2 * len(orders) * assignments > ceiling:
        warnings.warn('Exhaustive search enumerates {} of at most {} candidate '
                      'programs'.format(len(orders) * assignments, ceiling))
    logger.info('Enumerating %d orders x %d effort assignments',
                len(orders), assignments)

    budget = constraints.budget()
    best_program = best_objective = None
    evaluations, trace = 0, []
    for efforts in itertools.product(*levels):
        if math.fsum(efforts) > budget + FEASIBILITY_TOLERANCE:
            continue
        effort_of = dict(zip(technique_ids, efforts))
        for order in orders:
            program = Program([(tid, effort_of[tid]) for tid in order])
            objective = net_benefit(program, scenario)
            evaluations += 1
            if _is_better(objective, program, best_objective, best_program):
                if best_program is None or objective > best_objective:
                    trace.append((evaluations, objective))
                best_program, best_objective = program, objective
    if best_program is None:
        raise ConstraintError('No effort assignment satisfies '
                              'max_total_effort = {}'.format(budget))
    return OptimizationResult(best_program, best_objective, evaluations,
                              trace)


class _SearchSpace(object):
    """Feasible programs and their neighbourhoods for the hill climbers."""
    def __init__(self, scenario, constraints, step, effort_cap):
        self.technique_ids = tuple(sorted(scenario.technique_ids))
        self.graph = constraints.graph(self.technique_ids)
        self.levels = dict(constraints.allowed_levels)
        self.budget = constraints.budget()
        self.step = float(step)
        if not self.step > 0:
            raise ConstraintError('Effort step must be positive, got '
                                  '{}'.format(step))
        if effort_cap is None:
            effort_cap = (constraints.max_total_effort
                          if constraints.max_total_effort is not None
                          else DEFAULT_EFFORT_CAP)
        self.effort_cap = float(effort_cap)
        lowest = math.fsum(self.levels[tid][0] if tid in self.levels else 0.0
                           for tid in self.technique_ids)
        if lowest > self.budget + FEASIBILITY_TOLERANCE:
            raise ConstraintError(
                'The lowest allowed levels need {} person-hours, above '
                'max_total_effort {}'.format(lowest, self.budget))

    def lowest(self, tid):
        return self.levels[tid][0] if tid in self.levels else 0.0

    def start(self):
        order = list(nx.lexicographical_topological_sort(self.graph))
        return Program([(tid, self.lowest(tid)) for tid in order])

    def random_program(self, rng):
        graph = self.graph.copy()
        order = []
        while graph.number_of_nodes():
            ready = sorted(n for n in graph if graph.in_degree(n) == 0)
            node = ready[rng.integers(len(ready))]
            order.append(node)
            graph.remove_node(node)
        efforts = {}
        for tid in self.technique_ids:
            if tid in self.levels:
                values = self.levels[tid]
                efforts[tid] = values[rng.integers(len(values))]
            else:
                steps = int(math.floor(self.effort_cap / self.step + 1e-9))
                efforts[tid] = self.step * rng.integers(steps + 1)
        for tid in order:
            excess = math.fsum(efforts.values()) - self.budget
            if excess <= FEASIBILITY_TOLERANCE:
                break
            efforts[tid] = self._project(tid, efforts[tid] - excess)
        return Program([(tid, efforts[tid]) for tid in order])

    def _project(self, tid, effort):
        """Largest admissible effort of `tid` not above `effort`."""
        if tid in self.levels:
            fitting = [v for v in self.levels[tid]
                       if v <= effort + FEASIBILITY_TOLERANCE]
            return fitting[-1] if fitting else self.levels[tid][0]
        return max(0.0, min(effort, self.effort_cap))

    def _effort_moves(self, tid, effort):
        if tid in self.levels:
            values = self.levels[tid]
            k = values.index(effort)
            return [values[j] for j in (k - 1, k + 1) if 0 <= j < len(values)]
        return [e for e in (max(0.0, effort - self.step),
                            min(self.effort_cap, effort + self.step))
                if e != effort]

    def neighbours(self, program):
        apps = list(program.applications)
        total = program.total_effort
        for position, (tid, effort) in enumerate(apps):
            for moved in self._effort_moves(tid, effort):
                excess = total - effort + moved - self.budget
                if excess > FEASIBILITY_TOLERANCE:
                    moved = self._project(tid, moved - excess)
                    if moved <= effort:
                        continue
                candidate = list(apps)
                candidate[position] = (tid, moved)
                yield Program(candidate)
        for a, b in itertools.combinations(range(len(apps)), 2):
            swapped = list(apps)
            swapped[a], swapped[b] = swapped[b], swapped[a]
            if self.respects_precedence([tid for tid, _ in swapped]):
                yield Program(swapped)

    def respects_precedence(self, order):
        position = {tid: k for k, tid in enumerate(order)}
        return all(position[a] < position[b] for a, b in self.graph.edges())


def _climb(task):
    """One random-restart climber; returns its best program and trace."""
    scenario, space, seed, restart, budget = task
    rng = rng_for(seed, restart)
    cache = {}
    spent = 0
    best_program = best_objective = None
    trace = []

    def evaluate(program):
        nonlocal spent, best_program, best_objective
        if program in cache:
            return cache[program]
        objective = net_benefit(program, scenario)
        cache[program] = objective
        spent += 1
        if _is_better(objective, program, best_objective, best_program):
            if best_program is None or objective > best_objective:
                trace.append((spent, objective))
            best_program, best_objective = program, objective
        return objective

    current = space.start() if restart == 0 else space.random_program(rng)
    current_objective = evaluate(current)
    stale = 0
    while spent < budget and stale < MAX_STALE_RESTARTS:
        best_neighbour, best_value = None, None
        for neighbour in space.neighbours(current):
            if spent >= budget and neighbour not in cache:
                break
            value = evaluate(neighbour)
            if best_value is None or value > best_value:
                best_neighbour, best_value = neighbour, value
        if (best_neighbour is not None and
                best_value > current_objective + TIE_TOLERANCE):
            current, current_objective = best_neighbour, best_value
            continue
        if spent >= budget:
            break
        restart_program = space.random_program(rng)
        # small search spaces run out before the budget does
        stale = stale + 1 if restart_program in cache else 0
        current, current_objective = restart_program, evaluate(
            restart_program)
    return best_program, best_objective, spent, trace


def canonical_start(scenario, constraints):
    """Lexicographically smallest order at the lowest effort levels."""
    space = _SearchSpace(scenario, constraints, 1.0, None)
    return space.start()


def optimize_heuristic(scenario, constraints, seed=DEFAULT_SEED, budget=1000,
                       restarts=8, step=1.0, effort_cap=None, jobs=1):
    """Random-restart steepest-ascent hill climbing.

    Parameters
    ----------
    scenario : Scenario or PracticalScenario
    constraints : Constraints
    seed : int, optional, default=12345
    budget : int, optional, default=1000
        Total number of objective evaluations, split evenly between the
        climbers.
    restarts : int, optional, default=8
        Number of independent climbers; the first one starts from
        `canonical_start`, the others from random feasible programs.
    step : float, optional, default=1.0
        Effort change of one move for techniques without allowed levels.
    effort_cap : float, optional
        Largest effort of one technique; defaults to ``max_total_effort``
        or 100 person-hours.
    jobs : int, optional, default=1
        Worker processes for the climbers; 0 uses every core.

    Returns
    -------
    OptimizationResult

    Raises
    ------
    ConstraintError
        If the constraints are infeasible.

    """
    if seed is None:
        seed = DEFAULT_SEED
    space = _SearchSpace(scenario, constraints, step, effort_cap)
    budget, restarts = int(budget), int(restarts)
    if budget < 0 or restarts < 1:
        raise ConstraintError('budget must be >= 0 and restarts >= 1, got '
                              '{} and {}'.format(budget, restarts))
    if budget == 0:
        start = space.start()
        objective = net_benefit(start, scenario)
        return OptimizationResult(start, objective, 1, [(1, objective)],
                                  seed=seed)
    shares = [budget // restarts + (1 if r < budget % restarts else 0)
              for r in range(restarts)]
    tasks = [(scenario, space, seed, r, share)
             for r, share in enumerate(shares) if share > 0]
    outcomes = ordered_map(_climb, tasks, jobs=jobs)

    best_program = best_objective = None
    evaluations, trace = 0, []
    for program, objective, spent, climber_trace in outcomes:
        for count, value in climber_trace:
            if best_objective is None or value > best_objective:
                trace.append((evaluations + count, value))
        if _is_better(objective, program, best_objective, best_program):
            best_program, best_objective = program, objective
        evaluations += spent
    logger.info('Hill climbing spent %d evaluations, best objective %g',
                evaluations, best_objective)
    return OptimizationResult(best_program, best_objective, evaluations,
                              trace, seed=seed)
