"""Solver options shared by all backends."""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Optional


@dataclass(frozen=True)
class SolverOptions:
    feasibility_tolerance: float = 1e-7
    integrality_tolerance: float = 1e-6
    optimality_tolerance: float = 1e-7  # absolute, on reduced costs / MILP gap
    relative_gap: float = 1e-6
    time_limit: float = 60.0  # seconds, whole solve
    node_limit: Optional[int] = None
    backend: str = "simplex"

    def __post_init__(self):
        for name in ("feasibility_tolerance", "integrality_tolerance",
                     "optimality_tolerance", "relative_gap", "time_limit"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be positive")

    def with_time_limit(self, seconds: float) -> "SolverOptions":
        return replace(self, time_limit=max(seconds, 1e-9))
