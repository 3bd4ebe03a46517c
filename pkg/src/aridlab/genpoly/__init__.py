"""Generalised polynomials: expressions, sound evaluation and analysis."""

from .analysis import (HEISENBERG, DiscrepancyReport, GenPolySequence,
                       SparseGenPolySpec, discrepancy, heisenberg_set,
                       star_discrepancy, threshold_set)
from .evaluate import (DEFAULT_P0, DEFAULT_PMAX, Compiled, EvalResult,
                       UnresolvedFloorError, evaluate, floor_value)
from .expr import (FUNCTIONS, N, PHI, PI, Add, Const, Expr, Func, Mul, Neg,
                   Num, ParseError, Pow, Sub, Var, count_nodes, dist, floor,
                   frac, is_rational, nint, parse, sqrt, to_string)
from .interval import IntervalValue

eval = evaluate  # noqa: A001  (matches the operation name used in the docs)
