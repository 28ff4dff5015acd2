"""A minimal linear-program container shared by the builder and the solvers.

Variables are referenced by name; semantic keys such as ``z[r1]`` or
``b[m4]`` double as variable names so callers can look values up directly
in a solve outcome.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Mapping

__all__ = ["Variable", "Constraint", "LinearProgram", "LE", "EQ", "GE"]

LE, EQ, GE = "<=", "==", ">="
_SENSES = (LE, EQ, GE)


@dataclass
class Variable:
    name: str
    lb: float = 0.0
    ub: float = math.inf
    binary: bool = False


@dataclass
class Constraint:
    coeffs: dict[int, float]  # column index -> coefficient
    sense: str
    rhs: float
    name: str = ""


class LinearProgram:
    """Minimization LP/MILP with named variables and dict-based rows."""

    def __init__(self) -> None:
        self.variables: list[Variable] = []
        self.index: dict[str, int] = {}
        self.constraints: list[Constraint] = []
        self.objective: dict[int, float] = {}

    @property
    def num_vars(self) -> int:
        return len(self.variables)

    @property
    def num_constraints(self) -> int:
        return len(self.constraints)

    def add_var(
        self, name: str, lb: float = 0.0, ub: float = math.inf, binary: bool = False
    ) -> int:
        if name in self.index:
            raise ValueError(f"variable {name!r} already declared")
        if lb > ub:
            raise ValueError(f"variable {name!r}: lower bound {lb} exceeds upper bound {ub}")
        col = len(self.variables)
        self.variables.append(Variable(name, lb, ub, binary))
        self.index[name] = col
        return col

    def has_var(self, name: str) -> bool:
        return name in self.index

    def col(self, name: str) -> int:
        try:
            return self.index[name]
        except KeyError:
            raise KeyError(f"unknown variable {name!r}") from None

    def _resolve(self, coeffs: Mapping[str | int, float]) -> dict[int, float]:
        resolved: dict[int, float] = {}
        for key, coef in coeffs.items():
            col = self.col(key) if isinstance(key, str) else key
            if not 0 <= col < len(self.variables):
                raise KeyError(f"constraint references undeclared column {col}")
            if coef != 0.0:
                resolved[col] = resolved.get(col, 0.0) + coef
        return resolved

    def add_constraint(
        self, coeffs: Mapping[str | int, float], sense: str, rhs: float, name: str = ""
    ) -> int:
        if sense not in _SENSES:
            raise ValueError(f"unknown sense {sense!r}")
        row = len(self.constraints)
        self.constraints.append(Constraint(self._resolve(coeffs), sense, rhs, name))
        return row

    def set_objective_coeff(self, name: str | int, coef: float) -> None:
        col = self.col(name) if isinstance(name, str) else name
        if coef == 0.0:
            self.objective.pop(col, None)
        else:
            self.objective[col] = coef

    def add_objective_coeff(self, name: str | int, coef: float) -> None:
        col = self.col(name) if isinstance(name, str) else name
        self.set_objective_coeff(col, self.objective.get(col, 0.0) + coef)

    def binary_columns(self) -> list[int]:
        return [c for c, v in enumerate(self.variables) if v.binary]

    def objective_value(self, values: Mapping[str, float]) -> float:
        return sum(
            coef * values.get(self.variables[col].name, 0.0)
            for col, coef in self.objective.items()
        )
