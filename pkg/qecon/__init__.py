from qecon.difficulty import (Constant, Exponential, Linear, Sigmoid,
                              calibrate, calibrate_exponential,
                              eval_difficulty, mean_difficulty)
from qecon.scenario import (CostBreakdown, DocumentClass, Fault, Program,
                            Scenario, Technique)
from qecon.economics import *
from qecon.practical import *
from qecon.evaluate import breakdown, net_benefit
from qecon.simulation import SimEstimate, SimOutcome, estimate, simulate_once
from qecon.sensitivity import *
from qecon.optimize import (Constraints, OptimizationResult,
                            optimize_exhaustive, optimize_heuristic,
                            validate_program)
from qecon.formats.scenario_file import (dump_scenario, load_scenario,
                                         parse_program, parse_scenario)
from qecon.formats.reports import write_report
from qecon.designs import get_study, register as register_design
from qecon.version import version

__version__ = version
