"""carveopt: purchase and production planning for recipe-based processing.

Public API re-exports; see the README for a tour.
"""

from .model import (
    AlternativeGroup,
    Instance,
    Material,
    Recipe,
    Scenario,
    Solution,
    StockBatch,
    Violation,
    WeightVector,
    merge_batches,
    validate_instance,
)
from .solver import SolverOptions, Status, SolveOutcome
from .engine import SolveReport, solve_global, solve_iterative

__all__ = [
    "AlternativeGroup",
    "Instance",
    "Material",
    "Recipe",
    "Scenario",
    "Solution",
    "StockBatch",
    "Violation",
    "WeightVector",
    "merge_batches",
    "validate_instance",
    "SolverOptions",
    "Status",
    "SolveOutcome",
    "SolveReport",
    "solve_global",
    "solve_iterative",
]

__version__ = "0.1.0"
