"""Solve paths: iterative constraint generation and the one-shot full model.

The iterative path solves the continuous relaxation, checks the MOQ / MPA
disjunctions, adds every violated group in one batch, and re-solves until
the iterate is feasible for the full model.  Constraints only accumulate,
so each iterate's objective lower-bounds the full optimum; the first
globally feasible iterate is therefore optimal.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import Optional

from .builder import build_base_lp, extract_solution
from .milp import (
    BigMProber,
    add_moq_group,
    add_mpa_group,
    big_m_for_moq,
    big_m_for_mpa,
    build_global_model,
    moq_eligible_materials,
    mpa_tuples,
)
from .model import Scenario, Solution
from .solver.backends import get_backend
from .solver.outcome import SolveOutcome, Status

__all__ = ["ViolationSet", "IterationStat", "SolveReport", "check_violations",
           "solve_iterative", "solve_global"]

_MOQ_TOL = 1e-6
_MPA_RATIO_TOL = 1e-6
_Z_ZERO_TOL = 1e-9


@dataclass(frozen=True)
class ViolationSet:
    moq: tuple[str, ...]
    mpa: tuple[tuple[str, int, str], ...]

    def __bool__(self) -> bool:
        return bool(self.moq or self.mpa)


@dataclass(frozen=True)
class IterationStat:
    objective: Optional[float]
    wall_time: float
    added_moq: int
    added_mpa: int


@dataclass
class SolveReport:
    status: Status
    iterations: int
    moq_groups: int
    mpa_groups: int
    wall_time: float
    solution: Optional[Solution] = None
    per_iteration: list[IterationStat] = field(default_factory=list)
    method: str = "iterative"

    @property
    def objective(self) -> Optional[float]:
        return self.solution.objective_value if self.solution else None


def check_violations(
    scenario: Scenario,
    solution: Solution,
    existing_moq: set[str] = frozenset(),
    existing_mpa: set[tuple[str, int, str]] = frozenset(),
) -> ViolationSet:
    """Disjunctions violated beyond tolerance and not yet added as groups."""
    moq: list[str] = []
    for mid in moq_eligible_materials(scenario):
        if mid in existing_moq:
            continue
        bmin = scenario.effective_moq(scenario.instance.materials[mid])
        tol = _MOQ_TOL * max(1.0, bmin)
        value = solution.buy.get(mid, 0.0)
        if tol < value < bmin - tol:
            moq.append(mid)

    mpa: list[tuple[str, int, str]] = []
    for key in mpa_tuples(scenario):
        if key in existing_mpa:
            continue
        rid, g, mid = key
        z = solution.z.get(rid, 0.0)
        if z <= _Z_ZERO_TOL * max(1.0, scenario.instance.recipes[rid].throughput):
            continue
        ratio = solution.z_hat.get(key, 0.0) / z
        if _MPA_RATIO_TOL < ratio < scenario.mpa_ratio - _MPA_RATIO_TOL:
            mpa.append(key)

    return ViolationSet(moq=tuple(moq), mpa=tuple(mpa))


def solve_iterative(scenario: Scenario) -> SolveReport:
    opts = scenario.solver_options
    backend = get_backend(opts.backend)
    start = time.monotonic()
    deadline = start + opts.time_limit

    lp = build_base_lp(scenario)
    existing_moq: set[str] = set()
    existing_mpa: set[tuple[str, int, str]] = set()
    moq_ms: dict[str, float] = {}
    mpa_ms: dict[str, float] = {}
    prober = BigMProber(scenario)
    per_iteration: list[IterationStat] = []
    best_feasible: Optional[Solution] = None

    iteration = 0
    while True:
        iteration += 1
        remaining = deadline - time.monotonic()
        if remaining <= 0:
            return _timeout_report(iteration - 1, existing_moq, existing_mpa,
                                   per_iteration, best_feasible, start)
        outcome = backend.solve(lp, opts.with_time_limit(remaining))
        if outcome.status in (Status.INFEASIBLE, Status.UNBOUNDED):
            return SolveReport(
                status=outcome.status, iterations=iteration,
                moq_groups=len(existing_moq), mpa_groups=len(existing_mpa),
                wall_time=time.monotonic() - start, per_iteration=per_iteration,
            )
        if outcome.status in (Status.TIME_LIMIT, Status.NODE_LIMIT):
            per_iteration.append(IterationStat(outcome.objective, outcome.wall_time, 0, 0))
            return _timeout_report(iteration, existing_moq, existing_mpa,
                                   per_iteration, best_feasible, start,
                                   status=outcome.status)

        solution = extract_solution(scenario, outcome)
        violations = check_violations(scenario, solution, existing_moq, existing_mpa)
        per_iteration.append(
            IterationStat(outcome.objective, outcome.wall_time,
                          len(violations.moq), len(violations.mpa))
        )
        if not violations:
            return SolveReport(
                status=Status.OPTIMAL, iterations=iteration,
                moq_groups=len(existing_moq), mpa_groups=len(existing_mpa),
                wall_time=time.monotonic() - start, solution=solution,
                per_iteration=per_iteration,
            )

        for mid in violations.moq:
            if mid not in moq_ms:
                moq_ms[mid] = big_m_for_moq(scenario, mid, prober)
            add_moq_group(lp, scenario, mid, big_m=moq_ms[mid])
            existing_moq.add(mid)
        for rid, g, mid in violations.mpa:
            if rid not in mpa_ms:
                mpa_ms[rid] = big_m_for_mpa(scenario, rid, prober)
            add_mpa_group(lp, scenario, rid, g, mid, big_m=mpa_ms[rid])
            existing_mpa.add((rid, g, mid))


def _timeout_report(iterations, existing_moq, existing_mpa, per_iteration,
                    best_feasible, start, status=Status.TIME_LIMIT) -> SolveReport:
    return SolveReport(
        status=status, iterations=max(iterations, 1),
        moq_groups=len(existing_moq), mpa_groups=len(existing_mpa),
        wall_time=time.monotonic() - start, solution=best_feasible,
        per_iteration=per_iteration,
    )


def solve_global(scenario: Scenario) -> SolveReport:
    """One solve of the complete model with every group present."""
    opts = scenario.solver_options
    backend = get_backend(opts.backend)
    start = time.monotonic()
    lp = build_global_model(scenario)
    n_moq = len(moq_eligible_materials(scenario))
    n_mpa = len(mpa_tuples(scenario))
    outcome = backend.solve(lp, opts)
    solution = extract_solution(scenario, outcome) if outcome.has_solution else None
    return SolveReport(
        status=outcome.status, iterations=1,
        moq_groups=n_moq, mpa_groups=n_mpa,
        wall_time=time.monotonic() - start, solution=solution,
        per_iteration=[IterationStat(outcome.objective, outcome.wall_time, n_moq, n_mpa)],
        method="global",
    )
