"""Command-line front end, ``qecon <subcommand> ...``.

Exit codes: 0 on success, 1 on numeric or internal failures, 2 when an
input is rejected.
"""
import argparse
import logging
import os
import sys

from qecon import __version__
from qecon.designs import available, get_study
from qecon.evaluate import breakdown
from qecon.exceptions import InputError, QEconError
from qecon.formats.reports import FORMATS, save_report
from qecon.formats.scenario_file import (MODELS, check_program,
                                         load_scenario, parse_program)
from qecon.formats.simlab import read_outputs, write_outputs, write_samples
from qecon.optimize import (Constraints, optimize_exhaustive,
                            optimize_heuristic, validate_program)
from qecon.sensitivity.benchmarks import BENCHMARKS
from qecon.sensitivity.binding import OUTPUTS, SensitivityStudy
from qecon.sensitivity.efast import (analyze_outputs, evaluate_model,
                                     generate_samples)
from qecon.simulation import estimate
from qecon.utils.seeding import DEFAULT_SEED

__all__ = ['main', 'build_parser']

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_INVALID = 2

SAMPLES_FILE = 'samples.csv'
OUTPUTS_FILE = 'output.csv'


def _positive_int(text):
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError('expected an integer, got '
                                         '{!r}'.format(text))
    if value < 1:
        raise argparse.ArgumentTypeError('must be at least 1, got '
                                         '{}'.format(value))
    return value


def _non_negative_int(text):
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError('expected an integer, got '
                                         '{!r}'.format(text))
    if value < 0:
        raise argparse.ArgumentTypeError('must be non-negative, got '
                                         '{}'.format(value))
    return value


def _grid(text):
    try:
        return [float(item) for item in text.split(',') if item.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError('expected comma-separated efforts, '
                                         'got {!r}'.format(text))


def _add_common(parser, scenario_required=True, randomized=False):
    parser.add_argument('--scenario', required=scenario_required,
                        metavar='PATH', help='scenario file (YAML)')
    parser.add_argument('--model', choices=MODELS,
                        help='override the model declared in the file')
    parser.add_argument('--out', default='.', metavar='DIR',
                        help='directory reports are written to')
    parser.add_argument('--format', default='csv', choices=FORMATS,
                        dest='fmt', help='report format')
    if randomized:
        parser.add_argument('--seed', type=_non_negative_int,
                            default=DEFAULT_SEED,
                            help='master seed (default: %(default)s)')
        parser.add_argument('--jobs', type=_non_negative_int, default=1,
                            help='worker processes, 0 for all cores')


def build_parser():
    parser = argparse.ArgumentParser(
        prog='qecon', description='Economics of defect-detection techniques.')
    parser.add_argument('--version', action='version',
                        version='%(prog)s ' + __version__)
    verbosity = parser.add_mutually_exclusive_group()
    verbosity.add_argument('-v', '--verbose', action='store_true',
                           help='log progress information')
    verbosity.add_argument('-q', '--quiet', action='store_true',
                           help='only log errors')
    commands = parser.add_subparsers(dest='command', metavar='COMMAND')
    commands.required = True

    evaluate = commands.add_parser(
        'evaluate', help='costs, revenues and ROI of a program')
    _add_common(evaluate)
    evaluate.add_argument('--program', metavar='PATH|INLINE',
                          help='program file or inline ID:EFFORT,...')

    simulate = commands.add_parser(
        'simulate', help='Monte-Carlo estimate of the expected costs')
    _add_common(simulate, randomized=True)
    simulate.add_argument('--program', metavar='PATH|INLINE')
    simulate.add_argument('--n', type=_positive_int, default=10000,
                          help='number of simulated runs')

    sensitivity = commands.add_parser(
        'sensitivity', help='eFAST first- and total-order indices')
    _add_common(sensitivity, scenario_required=False, randomized=True)
    sensitivity.add_argument(
        '--design', metavar='NAME|PATH',
        help='built-in design ({}) or a file with a design '
             'section'.format(', '.join(available())))
    sensitivity.add_argument('--output', choices=OUTPUTS, default='roi',
                             help='analysed model output')
    sensitivity.add_argument('--analyze', metavar='PATH',
                             help='compute indices from an externally '
                                  'evaluated output file')

    optimize = commands.add_parser(
        'optimize', help='efforts and order maximizing net benefit')
    _add_common(optimize, randomized=True)
    optimize.add_argument('--budget', type=_non_negative_int, default=1000,
                          help='objective evaluations of the heuristic')
    optimize.add_argument('--restarts', type=_positive_int, default=8)
    optimize.add_argument('--step', type=float, default=1.0,
                          help='effort change of one move')
    optimize.add_argument('--exhaustive', action='store_true',
                          help='enumerate every feasible program')
    optimize.add_argument('--grid', type=_grid, metavar='E1,E2,...',
                          help='effort grid of the exhaustive search')

    validate = commands.add_parser(
        'validate', help='check a scenario file without evaluating it')
    validate.add_argument('--scenario', required=True, metavar='PATH')
    validate.add_argument('--model', choices=MODELS)
    return parser


def _load(args):
    if not os.path.isfile(args.scenario):
        raise InputError('Scenario file {} does not exist'.format(
            args.scenario))
    return load_scenario(args.scenario, model=args.model)


def _program(args, scenario_file):
    if args.program is None:
        if scenario_file.program is None:
            raise InputError('{} holds no program; pass --program'.format(
                args.scenario))
        return scenario_file.program
    if os.path.isfile(args.program):
        with open(args.program, 'r', encoding='utf-8') as program_file:
            program = parse_program(program_file.read().strip(),
                                    path=args.program)
    else:
        program = parse_program(args.program, path='--program')
    if scenario_file.scenario is not None:
        check_program(program, scenario_file.scenario, 'program')
    return program


def _scenario(args, scenario_file):
    if scenario_file.scenario is None:
        raise InputError('{} holds no scenario section'.format(args.scenario))
    return scenario_file.scenario


def _report(result, args, seed=None):
    path = save_report(result, args.out, args.fmt, seed=seed)
    print(path)
    return path


def run_evaluate(args):
    scenario_file = _load(args)
    scenario = _scenario(args, scenario_file)
    result = breakdown(_program(args, scenario_file), scenario)
    _report(result, args)


def run_simulate(args):
    print('seed: {}'.format(args.seed))
    scenario_file = _load(args)
    scenario = _scenario(args, scenario_file)
    result = estimate(scenario, _program(args, scenario_file), args.n,
                      seed=args.seed, jobs=args.jobs)
    _report(result, args, seed=args.seed)


def _study(args):
    design = args.design
    if design is not None and not os.path.isfile(design):
        return get_study(design, output=args.output)
    source = design if design is not None else args.scenario
    if source is None:
        raise InputError('Pass --design NAME|PATH or a --scenario file with a '
                         'design section')
    scenario_file = load_scenario(source, model=args.model)
    if scenario_file.design is None:
        raise InputError('{} holds no design section'.format(source))
    if scenario_file.benchmark is not None:
        return SensitivityStudy(scenario_file.design,
                                BENCHMARKS[scenario_file.benchmark]())
    return SensitivityStudy.from_template(
        scenario_file.design, scenario_file.design.template, args.output)


def run_sensitivity(args):
    print('seed: {}'.format(args.seed))
    study = _study(args)
    design = study.design
    samples = generate_samples(design, args.seed)
    os.makedirs(args.out, exist_ok=True)
    write_samples(os.path.join(args.out, SAMPLES_FILE), samples,
                  design.names)
    if args.analyze is not None:
        outputs = read_outputs(args.analyze)
    else:
        logger.info('Evaluating %d samples of design %r', len(samples),
                    design.name)
        outputs = evaluate_model(study.model, samples, jobs=args.jobs)
        write_outputs(os.path.join(args.out, OUTPUTS_FILE), outputs)
    result = analyze_outputs(outputs, design, seed=args.seed)
    _report(result, args, seed=args.seed)


def run_optimize(args):
    print('seed: {}'.format(args.seed))
    scenario_file = _load(args)
    scenario = _scenario(args, scenario_file)
    constraints = scenario_file.constraints or Constraints()
    if args.exhaustive:
        grid = args.grid if args.grid is not None else scenario_file.effort_grid
        result = optimize_exhaustive(scenario, constraints, effort_grid=grid)
        result.seed = args.seed
    else:
        result = optimize_heuristic(scenario, constraints, seed=args.seed,
                                    budget=args.budget,
                                    restarts=args.restarts, step=args.step,
                                    jobs=args.jobs)
    validate_program(result.best_program, scenario, constraints)
    _report(result, args, seed=args.seed)


def run_validate(args):
    scenario_file = _load(args)
    if (scenario_file.scenario is not None and
            scenario_file.program is not None and
            scenario_file.constraints is not None):
        validate_program(scenario_file.program, scenario_file.scenario,
                         scenario_file.constraints)
    print('{}: valid {} scenario file'.format(args.scenario,
                                              scenario_file.model))


_COMMANDS = {
    'evaluate': run_evaluate,
    'simulate': run_simulate,
    'sensitivity': run_sensitivity,
    'optimize': run_optimize,
    'validate': run_validate,
}


def main(argv=None):
    """Run the command line with `argv` and return the exit code."""
    parser = build_parser()
    args = parser.parse_args(argv)
    level = logging.WARNING
    if args.verbose:
        level = logging.INFO
    elif args.quiet:
        level = logging.ERROR
    logging.basicConfig(format='%(name)s - %(levelname)s - %(message)s')
    logging.getLogger('qecon').setLevel(level)
    try:
        _COMMANDS[args.command](args)
    except InputError as error:
        print('error: {}'.format(error), file=sys.stderr)
        return EXIT_INVALID
    except QEconError as error:
        print('error: {}'.format(error), file=sys.stderr)
        return EXIT_FAILURE
    except OSError as error:
        print('error: {}'.format(error), file=sys.stderr)
        return EXIT_INVALID
    return EXIT_OK


if __name__ == '__main__':
    sys.exit(main())
