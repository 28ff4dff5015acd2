"""Backend interface: pluggable LP/MILP solvers behind a common contract.

The built-in simplex + branch-and-bound backend is registered by default
under the name ``simplex``.  A HiGHS-based backend (via scipy) is
registered under ``highs`` when scipy is importable; it is the practical
choice for instances with thousands of rows.
"""

from __future__ import annotations

import math
import time
from typing import Callable, Protocol

import numpy as np

from ..lp import EQ, GE, LE, LinearProgram
from .branchbound import solve_milp
from .options import SolverOptions
from .outcome import SolveOutcome, Status
from .simplex import compile_lp, solve_lp

__all__ = ["Backend", "register_backend", "get_backend", "available_backends", "solve"]


class Backend(Protocol):
    def solve(self, lp: LinearProgram, opts: SolverOptions) -> SolveOutcome: ...


class BuiltinBackend:
    """Revised simplex with branch-and-bound for binary marks."""

    name = "simplex"

    def solve(self, lp: LinearProgram, opts: SolverOptions) -> SolveOutcome:
        if lp.binary_columns():
            return solve_milp(lp, opts)
        return solve_lp(lp, opts)


class HighsBackend:
    """scipy.optimize (HiGHS) adapter; agrees with the built-in solver on
    the oracle suite and scales to company-sized instances."""

    name = "highs"

    def solve(self, lp: LinearProgram, opts: SolverOptions) -> SolveOutcome:
        from scipy import optimize, sparse

        start = time.monotonic()
        n = lp.num_vars
        c = np.zeros(n)
        for col, coef in lp.objective.items():
            c[col] = coef
        lb = np.array([v.lb for v in lp.variables])
        ub = np.array([v.ub for v in lp.variables])
        integrality = np.zeros(n)
        for col in lp.binary_columns():
            integrality[col] = 1
            lb[col] = max(lb[col], 0.0)
            ub[col] = min(ub[col], 1.0)

        rows, cols, vals = [], [], []
        row_lb, row_ub = [], []
        for i, con in enumerate(lp.constraints):
            for col, coef in con.coeffs.items():
                rows.append(i)
                cols.append(col)
                vals.append(coef)
            if con.sense == LE:
                row_lb.append(-np.inf)
                row_ub.append(con.rhs)
            elif con.sense == GE:
                row_lb.append(con.rhs)
                row_ub.append(np.inf)
            else:
                row_lb.append(con.rhs)
                row_ub.append(con.rhs)
        m = lp.num_constraints
        A = sparse.csc_matrix((vals, (rows, cols)), shape=(m, n))

        constraints = optimize.LinearConstraint(A, row_lb, row_ub)
        bounds = optimize.Bounds(lb, ub)
        import warnings

        has_bins = bool(np.any(integrality > 0))

        def run_milp(tight: bool):
            milp_options = {"time_limit": opts.time_limit,
                            "mip_rel_gap": opts.relative_gap,
                            "presolve": True}
            if tight:
                # Forwarded verbatim to HiGHS by scipy (with a warning we
                # silence, since scipy does not recognise the option name).
                milp_options["mip_feasibility_tolerance"] = 1e-9
            with warnings.catch_warnings():
                warnings.filterwarnings(
                    "ignore", message="Unrecognized options detected")
                res = optimize.milp(
                    c,
                    constraints=constraints,
                    bounds=bounds,
                    integrality=integrality,
                    options=milp_options,
                )
            dual = getattr(res, "mip_dual_bound", None)
            if res.status == 0 and has_bins and res.x is not None:
                # MIP solvers may leave binaries a hair off integral, which a
                # big-M row can amplify into a real constraint violation.  Fix
                # the binaries to their rounded values and re-solve the rest as
                # an LP.  Skip the extra solve when they came back exact.
                bc = integrality > 0
                rounded = np.round(res.x[bc])
                if np.max(np.abs(res.x[bc] - rounded), initial=0.0) > 1e-12:
                    lbf, ubf = lb.copy(), ub.copy()
                    lbf[bc] = rounded
                    ubf[bc] = rounded
                    repaired = optimize.milp(
                        c, constraints=constraints,
                        bounds=optimize.Bounds(lbf, ubf),
                        options={"time_limit": max(1.0, opts.time_limit / 4),
                                 "presolve": True},
                    )
                    if repaired.status == 0:
                        res = repaired
            return res, dual

        # A binary left within the solver's default integrality tolerance of
        # 0/1 lets a big-M row leak real slack (roughly tolerance x M x unit
        # cost), which can corrupt incumbents and hence pruning.  Running every
        # solve with a tight tolerance is several times slower, so instead
        # prove the cheap solve correct: the tolerance only enlarges the
        # feasible set, so the reported dual bound is a valid lower bound on
        # the honest optimum, and the rounded-and-repaired objective is a
        # valid upper bound.  When the two agree the answer stands; otherwise
        # re-solve with a much tighter integrality tolerance.
        res, dual = run_milp(tight=False)
        if (res.status == 0 and has_bins and dual is not None
                and math.isfinite(dual)):
            gap_tol = max(2.0 * opts.relative_gap * max(1.0, abs(res.fun)),
                          1e-9)
            if res.fun - dual > gap_tol:
                res, dual = run_milp(tight=True)
        wall = time.monotonic() - start
        if res.status == 0:
            values = dict(zip((v.name for v in lp.variables), res.x.tolist()))
            return SolveOutcome(status=Status.OPTIMAL, values=values,
                                objective=float(res.fun), wall_time=wall)
        if res.status == 1:  # iteration / time limit
            values = None
            objective = None
            if res.x is not None:
                values = dict(zip((v.name for v in lp.variables), res.x.tolist()))
                objective = float(res.fun)
            return SolveOutcome(status=Status.TIME_LIMIT, values=values,
                                objective=objective, wall_time=wall)
        if res.status == 3:
            return SolveOutcome(status=Status.UNBOUNDED, wall_time=wall)
        return SolveOutcome(status=Status.INFEASIBLE, wall_time=wall)


_REGISTRY: dict[str, Backend] = {}


def register_backend(name: str, backend: Backend) -> None:
    _REGISTRY[name] = backend


def get_backend(name: str) -> Backend:
    try:
        return _REGISTRY[name]
    except KeyError:
        raise KeyError(
            f"unknown solver backend {name!r}; available: {sorted(_REGISTRY)}"
        ) from None


def available_backends() -> list[str]:
    return sorted(_REGISTRY)


def solve(lp: LinearProgram, opts: SolverOptions | None = None) -> SolveOutcome:
    opts = opts or SolverOptions()
    return get_backend(opts.backend).solve(lp, opts)


register_backend("simplex", BuiltinBackend())
try:  # pragma: no cover - scipy is a hard dependency in practice
    import scipy  # noqa: F401

    register_backend("highs", HighsBackend())
except ImportError:  # pragma: no cover
    pass
