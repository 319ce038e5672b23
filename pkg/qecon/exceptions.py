class QEconError(Exception):
    """Base class for all non-trivial errors raised by qecon """


class InputError(QEconError, ValueError):
    """Invalid input: a scenario, design, program or constraint is rejected.

    The command line front end maps every `InputError` to exit code 2.
    """


class CalibrationError(InputError):
    """A difficulty curve cannot be calibrated from the given mean."""


class ConfigurationError(InputError):
    """A scenario is wired inconsistently, e.g. a technique lacks a fault."""


class InvariantViolationError(InputError):
    """A domain invariant does not hold.

    Parameters
    ----------
    message : str
        Human readable description.
    rule : str
        Name of the violated field or rule, e.g. ``'failure_probability'``.
    """
    def __init__(self, message, rule):
        super(InvariantViolationError, self).__init__(message)
        self.rule = rule


class ScenarioFileError(InputError):
    """Base class for errors raised while reading a scenario file."""


class ScenarioSyntaxError(ScenarioFileError):
    """The scenario file is not well-formed YAML."""
    def __init__(self, message, line=None, column=None):
        if line is not None:
            message = 'line {}, column {}: {}'.format(line, column, message)
        super(ScenarioSyntaxError, self).__init__(message)
        self.line = line
        self.column = column


class UnresolvedReferenceError(ScenarioFileError):
    """A fault, technique or defect type id is referenced but never defined."""
    def __init__(self, message, identifier):
        super(UnresolvedReferenceError, self).__init__(message)
        self.identifier = identifier


class UnknownKeyError(ScenarioFileError):
    """A mapping in the scenario file holds a key the schema does not know."""
    def __init__(self, message, key):
        super(UnknownKeyError, self).__init__(message)
        self.key = key


class SchemaVersionError(ScenarioFileError):
    """The scenario file declares an unsupported major schema version."""


class DesignError(InputError):
    """A sensitivity design is invalid or a factor is not bound."""


class ConstraintError(InputError):
    """Optimisation constraints are infeasible."""


class SearchSpaceError(InputError):
    """The exhaustive search space exceeds the configured ceiling."""
    def __init__(self, size, ceiling):
        super(SearchSpaceError, self).__init__(
            'Exhaustive search space holds at least {} candidate programs, '
            'above the ceiling of {}. Use the heuristic optimiser or '
            'coarsen the effort grid.'.format(size, ceiling))
        self.size = size
        self.ceiling = ceiling


class NumericError(QEconError, ArithmeticError):
    """A numeric result is undefined; the command line maps it to exit 1."""


class UndefinedROIError(NumericError):
    """ROI requested while direct plus future costs are zero."""
