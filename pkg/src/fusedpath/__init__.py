"""Exact integer-lambda solution paths of the 1-D fused lasso with convex piecewise-linear losses."""

from .cut import solve_fixed_lambda
from .documents import dump_path, load_path, parse_instance
from .errors import (FusedPathError, InvalidEps, InvalidPWL, NotCoercive, OverlappingInsert,
                     ParseError, TooLarge, UncoveredLambda, UnassignedNode)
from .fusing import compute_group, find_all_fusing_values, lambda_max
from .instance import ProblemInstance
from .path import SolutionPath, eval_path, inverse_query, solve_full_path
from .pwl import ConvexPWL, evaluate, make_pwl, piecewise_linearize, subgradient, sum_pwl

__all__ = [
    "ConvexPWL", "ProblemInstance", "SolutionPath",
    "make_pwl", "evaluate", "subgradient", "sum_pwl", "piecewise_linearize",
    "solve_fixed_lambda", "compute_group", "lambda_max", "find_all_fusing_values",
    "solve_full_path", "eval_path", "inverse_query",
    "parse_instance", "dump_path", "load_path",
    "FusedPathError", "InvalidPWL", "NotCoercive", "InvalidEps", "UnassignedNode",
    "OverlappingInsert", "UncoveredLambda", "TooLarge", "ParseError",
]
