"""Solvers and benchmark harness for three-objective relief distribution."""

from ._kernels import BACKEND as KERNEL_BACKEND
from .model import (
    FeasibilityReport,
    ObjectiveVector,
    ProblemInstance,
    ShapeError,
    Solution,
    check_feasibility,
    evaluate_objectives,
    validate_instance,
)
from .pareto import ParetoFront, dominates

__version__ = "0.1.0"

__all__ = [
    "KERNEL_BACKEND",
    "FeasibilityReport",
    "ObjectiveVector",
    "ProblemInstance",
    "ShapeError",
    "Solution",
    "check_feasibility",
    "evaluate_objectives",
    "validate_instance",
    "ParetoFront",
    "dominates",
    "__version__",
]
