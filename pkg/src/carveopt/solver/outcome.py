"""Solve outcomes returned by every backend."""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Optional


class Status(str, enum.Enum):
    OPTIMAL = "optimal"
    INFEASIBLE = "infeasible"
    UNBOUNDED = "unbounded"
    TIME_LIMIT = "time_limit"
    NODE_LIMIT = "node_limit"

    def __str__(self) -> str:  # pragma: no cover
        return self.value


@dataclass
class SolveOutcome:
    status: Status
    values: Optional[dict[str, float]] = None
    objective: Optional[float] = None
    duals: Optional[list[float]] = None  # one per constraint, LP solves only
    iterations: int = 0
    nodes: int = 0
    wall_time: float = 0.0

    @property
    def has_solution(self) -> bool:
        return self.values is not None
