"""Exact solver for the cell formation problem with a variable number of
production cells, maximizing grouping efficacy.

The pipeline: a multi-start local search seeds a parametric (ratio-fixing)
outer loop whose subproblems are solved exactly by branch-and-bound over
machine partitions; a brute-force oracle certifies small instances, and a
two-index 0-1 model with LP export supports external solvers.
"""

from .bnb import (SubproblemResult, SubproblemStats, WeightMatrix, label_cap,
                  best_part_assignment, make_weights, node_bound,
                  solve_subproblem)
from .dinkelbach import (IterationRecord, SolveOutcome, SolveStatus,
                         raw_ratio, seed_from, solve, trivial_solution)
from .heuristic import SearchConfig, fit_parts, heuristic_solve
from .instances import (FormatError, Instance, ValidationReport,
                        load_instance, parse_instance, validate_instance,
                        write_instance)
from .model import (DecodeError, LinearModel, ModelRow, RelationAssignment,
                    build_model, decode, encode, export_lp, objective_value,
                    read_assignment, violated_rows)
from .oracle import OracleSizeError, oracle_solve
from .rational import Ratio, parse_ratio
from .solutions import (Regime, Solution, canonicalize, check_feasible,
                        efficacy, efficacy_counts, efficacy_ratio,
                        parse_solution, report_line, void_upper_bound,
                        write_solution)

__version__ = "0.1.0"

__all__ = [
    "FormatError", "Instance", "ValidationReport", "load_instance",
    "parse_instance", "validate_instance", "write_instance",
    "Ratio", "parse_ratio",
    "Regime", "Solution", "canonicalize", "check_feasible", "efficacy",
    "efficacy_counts", "efficacy_ratio", "parse_solution", "report_line",
    "void_upper_bound", "write_solution",
    "WeightMatrix", "SubproblemResult", "SubproblemStats", "label_cap",
    "best_part_assignment", "make_weights", "node_bound", "solve_subproblem",
    "SolveOutcome", "SolveStatus", "IterationRecord", "raw_ratio",
    "seed_from", "solve", "trivial_solution",
    "SearchConfig", "fit_parts", "heuristic_solve",
    "LinearModel", "ModelRow", "RelationAssignment", "DecodeError",
    "build_model", "decode", "encode", "export_lp", "objective_value",
    "read_assignment", "violated_rows",
    "OracleSizeError", "oracle_solve",
    "__version__",
]
