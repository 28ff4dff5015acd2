"""Dense revised simplex for LPs with general variable bounds.

Two-phase method: rows are turned into equalities with bounded slacks, an
artificial column is added for every row the slack cannot absorb, and
phase one minimizes the artificial total.  The basis inverse is kept
explicitly and refactorized periodically; pivoting is Dantzig with a
Bland's-rule fallback after a run of degenerate steps.  All tie-breaking
is index-based, so repeated runs produce the identical pivot sequence.
"""

from __future__ import annotations

import math
import time

import numpy as np
import scipy.sparse as sp

from ..lp import EQ, GE, LE, LinearProgram
from .options import SolverOptions
from .outcome import SolveOutcome, Status

__all__ = ["solve_lp", "solve_lp_arrays", "ArrayLP", "compile_lp"]

_AT_LOWER, _AT_UPPER, _FREE, _BASIC = 0, 1, 2, 3
_REFACTOR_EVERY = 100
_STALL_THRESHOLD = 1000
_PIVOT_EPS = 1e-9
_STABLE_PIVOT_REL = 1e-7  # pivot must not be tiny relative to its column


class _NumericalBreakdown(Exception):
    """The factorized basis became singular; the solve must restart."""


class ArrayLP:
    """Array form of a LinearProgram: min c.x  s.t.  A x (sense) rhs, lb <= x <= ub."""

    def __init__(self, lp: LinearProgram):
        n = lp.num_vars
        m = lp.num_constraints
        self.names = [v.name for v in lp.variables]
        self.lb = np.array([v.lb for v in lp.variables], dtype=float)
        self.ub = np.array([v.ub for v in lp.variables], dtype=float)
        self.binary_cols = lp.binary_columns()
        self.c = np.zeros(n)
        for col, coef in lp.objective.items():
            self.c[col] = coef
        rows, cols, vals = [], [], []
        self.senses: list[str] = []
        self.rhs = np.zeros(m)
        for i, con in enumerate(lp.constraints):
            self.senses.append(con.sense)
            self.rhs[i] = con.rhs
            for col, coef in con.coeffs.items():
                rows.append(i)
                cols.append(col)
                vals.append(coef)
        self.A = sp.csc_matrix((vals, (rows, cols)), shape=(m, n))
        self.n = n
        self.m = m


def compile_lp(lp: LinearProgram) -> ArrayLP:
    return ArrayLP(lp)


class _Simplex:
    def __init__(self, alp: ArrayLP, lb: np.ndarray, ub: np.ndarray,
                 opts: SolverOptions, deadline: float, bland: bool = False):
        self.opts = opts
        self.deadline = deadline
        m, n = alp.m, alp.n

        # Slack per row: <= gets s in [0, inf), >= gets s in (-inf, 0],
        # equalities get a slack fixed at zero.
        slack_lb = np.zeros(m)
        slack_ub = np.zeros(m)
        for i, sense in enumerate(alp.senses):
            if sense == LE:
                slack_ub[i] = math.inf
            elif sense == GE:
                slack_lb[i] = -math.inf

        self.lb = np.concatenate([lb, slack_lb])
        self.ub = np.concatenate([ub, slack_ub])
        self.c = np.concatenate([alp.c, np.zeros(m)])

        # Start every column at a finite bound (0 for free columns).
        x = np.where(np.isfinite(self.lb), self.lb,
                     np.where(np.isfinite(self.ub), self.ub, 0.0))
        status = np.where(np.isfinite(self.lb), _AT_LOWER,
                          np.where(np.isfinite(self.ub), _AT_UPPER, _FREE))

        base = sp.hstack([alp.A, sp.identity(m, format="csc")], format="csc")
        resid = alp.rhs - base @ x

        # Rows whose slack can absorb the residual get the slack as the basic
        # column; the rest get a signed artificial column.
        basis = np.empty(m, dtype=int)
        art_rows: list[int] = []
        art_signs: list[float] = []
        ftol = opts.feasibility_tolerance
        for i in range(m):
            sval = x[n + i] + resid[i]
            if slack_lb[i] - ftol <= sval <= slack_ub[i] + ftol:
                basis[i] = n + i
                x[n + i] = sval
                status[n + i] = _BASIC
            else:
                art_rows.append(i)
                art_signs.append(1.0 if resid[i] >= 0 else -1.0)
        self.art_rows = np.array(art_rows, dtype=int)

        n_art = len(art_rows)
        if n_art:
            art = sp.csc_matrix(
                (art_signs, (art_rows, range(n_art))), shape=(m, n_art)
            )
            self.A = sp.hstack([base, art], format="csc")
            self.lb = np.concatenate([self.lb, np.zeros(n_art)])
            self.ub = np.concatenate([self.ub, np.full(n_art, math.inf)])
            self.c = np.concatenate([self.c, np.zeros(n_art)])
            x = np.concatenate([x, np.zeros(n_art)])
            status = np.concatenate([status, np.full(n_art, _AT_LOWER, dtype=status.dtype)])
            for k, i in enumerate(art_rows):
                col = base.shape[1] + k
                basis[i] = col
                x[col] = abs(resid[i])
                status[col] = _BASIC
        else:
            self.A = base

        self.AT = self.A.T.tocsr()
        self.art_cols = np.arange(base.shape[1], self.A.shape[1])
        self.m = m
        self.n_struct = n
        self.ncols = self.A.shape[1]
        self.x = x
        self.status = status
        self.basis = basis
        self.rhs = alp.rhs
        self.binv = None
        self.iterations = 0
        self._degenerate_run = 0
        self._bland = bland
        self._bland_locked = bland
        self._refactor()

    # -- linear algebra -------------------------------------------------

    def _refactor(self) -> None:
        B = self.A[:, self.basis].toarray()
        try:
            self.binv = np.linalg.inv(B)
        except np.linalg.LinAlgError as exc:
            raise _NumericalBreakdown from exc
        self._recompute_basics()

    def _recompute_basics(self) -> None:
        xn = self.x.copy()
        xn[self.basis] = 0.0
        self.x[self.basis] = self.binv @ (self.rhs - self.A @ xn)

    # -- pivoting -------------------------------------------------------

    def _reduced_costs(self, costs: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        y = self.binv.T @ costs[self.basis]
        d = costs - self.AT @ y
        return d, y

    def _choose_entering(self, d: np.ndarray, banned: set[int]) -> int:
        tol = self.opts.optimality_tolerance
        status = self.status
        eligible = (
            ((status == _AT_LOWER) & (d < -tol))
            | ((status == _AT_UPPER) & (d > tol))
            | ((status == _FREE) & (np.abs(d) > tol))
        )
        eligible &= (self.ub - self.lb) > 0  # fixed columns never enter
        if banned:
            eligible[list(banned)] = False
        idx = np.nonzero(eligible)[0]
        if idx.size == 0:
            return -1
        if self._bland:
            return int(idx[0])
        return int(idx[np.argmax(np.abs(d[idx]))])

    def _ratio_test(self, entering: int, delta: float, w: np.ndarray):
        """Return (t, leaving_pos, leaving_hits_upper). leaving_pos == -1 is a bound flip.

        Among candidates whose ratio lies within a feasibility-tolerance
        window of the minimum, the one with the largest pivot magnitude is
        chosen (stability); under Bland's rule the smallest basis index wins.
        """
        lb, ub, x, basis = self.lb, self.ub, self.x, self.basis
        t_flip = ub[entering] - lb[entering]  # bound flip distance (may be inf)
        xB = x[basis]
        lbB = lb[basis]
        ubB = ub[basis]
        dw = delta * w
        absw = np.abs(w)
        mask = absw > _PIVOT_EPS
        t_arr = np.full(self.m, np.inf)
        dec = mask & (dw > 0) & np.isfinite(lbB)  # basic column pushed toward its lower bound
        inc = mask & (dw < 0) & np.isfinite(ubB)
        t_arr[dec] = (xB[dec] - lbB[dec]) / dw[dec]
        t_arr[inc] = (xB[inc] - ubB[inc]) / dw[inc]
        np.maximum(t_arr, 0.0, out=t_arr)
        t_min = float(t_arr.min(initial=np.inf))
        if t_flip <= t_min:
            return t_flip, -1, False
        if not np.isfinite(t_min):
            return math.inf, -1, False
        ftol = self.opts.feasibility_tolerance
        window = t_arr <= t_min + ftol / np.maximum(absw, _PIVOT_EPS)
        idx = np.nonzero(window & np.isfinite(t_arr))[0]
        if self._bland:
            pos = int(idx[np.argmin(basis[idx])])
        else:
            pos = int(idx[np.argmax(absw[idx])])
        return float(t_arr[pos]), pos, bool(inc[pos])

    def _pivot(self, entering: int, delta: float, w: np.ndarray,
               t: float, leaving_pos: int, hits_upper: bool) -> None:
        basis, x = self.basis, self.x
        x[basis] = x[basis] - delta * t * w
        if leaving_pos < 0:
            # Bound flip: entering moves across its range, basis unchanged.
            x[entering] += delta * t
            self.status[entering] = _AT_UPPER if delta > 0 else _AT_LOWER
            return
        leaving = basis[leaving_pos]
        x[leaving] = self.ub[leaving] if hits_upper else self.lb[leaving]
        self.status[leaving] = _AT_UPPER if hits_upper else _AT_LOWER
        x[entering] += delta * t
        self.status[entering] = _BASIC
        basis[leaving_pos] = entering
        # Product-form update of the basis inverse.
        wr = w[leaving_pos]
        row = self.binv[leaving_pos] / wr
        wcol = w.copy()
        wcol[leaving_pos] = 0.0
        self.binv -= np.outer(wcol, row)
        self.binv[leaving_pos] = row

    def max_infeasibility(self) -> float:
        """Worst bound violation or row residual of the current point."""
        bound = np.maximum(self.lb - self.x, self.x - self.ub)
        bound = bound[np.isfinite(bound)]
        resid = np.abs(self.A @ self.x - self.rhs)
        worst = float(resid.max(initial=0.0))
        if bound.size:
            worst = max(worst, float(bound.max()))
        return worst

    def run_phase(self, costs: np.ndarray, max_iter: int) -> Status:
        banned: set[int] = set()
        fresh = True  # basis inverse factorized since the last pivot
        since_refactor = 0
        while True:
            if self.iterations >= max_iter:
                return Status.TIME_LIMIT
            if self.iterations % 16 == 0 and time.monotonic() > self.deadline:
                return Status.TIME_LIMIT
            if since_refactor >= _REFACTOR_EVERY:
                self._refactor()
                fresh = True
                since_refactor = 0
            d, _ = self._reduced_costs(costs)
            entering = self._choose_entering(d, banned)
            if entering < 0:
                if banned:
                    # Only numerically unstable columns remain priced; treat
                    # the point as optimal rather than loop forever.
                    banned.clear()
                return Status.OPTIMAL
            delta = 1.0 if (self.status[entering] == _AT_LOWER
                            or (self.status[entering] == _FREE and d[entering] < 0)) else -1.0
            w = self.binv @ self.A[:, entering].toarray().ravel()
            t, leaving_pos, hits_upper = self._ratio_test(entering, delta, w)
            if not np.isfinite(t):
                return Status.UNBOUNDED
            if leaving_pos >= 0:
                wmax = float(np.abs(w).max())
                if abs(w[leaving_pos]) < _STABLE_PIVOT_REL * max(1.0, wmax):
                    if not fresh:
                        # Stale inverse may be lying about the column; rebuild
                        # and re-price before trusting this pivot.
                        self._refactor()
                        fresh = True
                        since_refactor = 0
                        continue
                    # Fresh factorization and still a tiny pivot: pivoting here
                    # would make the basis near-singular.  Skip the column.
                    banned.add(entering)
                    continue
            self._pivot(entering, delta, w, t, leaving_pos, hits_upper)
            banned.clear()
            fresh = False
            since_refactor += 1
            self.iterations += 1
            if t <= self.opts.feasibility_tolerance:
                self._degenerate_run += 1
                if self._degenerate_run >= _STALL_THRESHOLD:
                    self._bland = True
            else:
                self._degenerate_run = 0
                if self._bland and not self._bland_locked:
                    self._bland = False


def solve_lp_arrays(alp: ArrayLP, lb: np.ndarray, ub: np.ndarray,
                    opts: SolverOptions,
                    deadline: float | None = None) -> SolveOutcome:
    """Solve with the given bound overrides (binaries must already be relaxed)."""
    start = time.monotonic()
    if deadline is None:
        deadline = start + opts.time_limit
    if np.any(lb > ub):
        return SolveOutcome(status=Status.INFEASIBLE, wall_time=time.monotonic() - start)

    if alp.m == 0:
        # Pure bound problem: each variable sits at its cheaper bound.
        x = np.where(alp.c > 0, lb, np.where(alp.c < 0, ub, np.where(np.isfinite(lb), lb, 0.0)))
        if np.any(~np.isfinite(x) & (alp.c != 0)):
            return SolveOutcome(status=Status.UNBOUNDED, wall_time=time.monotonic() - start)
        x = np.where(np.isfinite(x), x, 0.0)
        values = dict(zip(alp.names, x.tolist()))
        return SolveOutcome(status=Status.OPTIMAL, values=values,
                            objective=float(alp.c @ x), duals=[],
                            wall_time=time.monotonic() - start)

    max_iter = 200 * (alp.m + alp.n) + 10_000

    def attempt(bland: bool) -> SolveOutcome:
        sx = _Simplex(alp, lb, ub, opts, deadline, bland=bland)
        if sx.art_cols.size:
            phase1 = np.zeros(sx.ncols)
            phase1[sx.art_cols] = 1.0
            status = sx.run_phase(phase1, max_iter)
            if status == Status.TIME_LIMIT:
                return SolveOutcome(status=Status.TIME_LIMIT, iterations=sx.iterations,
                                    wall_time=time.monotonic() - start)
            art_vals = sx.x[sx.art_cols]
            row_scale = np.maximum(1.0, np.abs(alp.rhs[sx.art_rows]))
            if np.any(art_vals > opts.feasibility_tolerance * row_scale):
                return SolveOutcome(status=Status.INFEASIBLE, iterations=sx.iterations,
                                    wall_time=time.monotonic() - start)
            # Pin artificials at zero for phase two.
            sx.ub[sx.art_cols] = 0.0
            sx.x[sx.art_cols] = np.clip(sx.x[sx.art_cols], 0.0, 0.0)

        status = sx.run_phase(sx.c, max_iter)
        duals = None
        objective = None
        values = None
        if status == Status.OPTIMAL:
            sx._refactor()
            scale = max(1.0, float(np.abs(alp.rhs).max(initial=0.0)))
            if sx.max_infeasibility() > opts.feasibility_tolerance * scale * 10:
                raise _NumericalBreakdown("optimal point fails feasibility check")
            _, y = sx._reduced_costs(sx.c)
            x = sx.x[: alp.n]
            values = dict(zip(alp.names, x.tolist()))
            objective = float(alp.c @ x)
            duals = y.tolist()
        return SolveOutcome(status=status, values=values, objective=objective,
                            duals=duals, iterations=sx.iterations,
                            wall_time=time.monotonic() - start)

    try:
        return attempt(bland=False)
    except _NumericalBreakdown:
        # The basis went singular under aggressive pricing; redo the whole
        # solve with Bland's rule, which pivots far more conservatively.
        return attempt(bland=True)


def solve_lp(lp: LinearProgram, opts: SolverOptions | None = None) -> SolveOutcome:
    """Solve the continuous problem; binary marks are relaxed to [0, 1]."""
    opts = opts or SolverOptions()
    alp = compile_lp(lp)
    lb, ub = alp.lb.copy(), alp.ub.copy()
    for col in alp.binary_cols:
        lb[col] = max(lb[col], 0.0)
        ub[col] = min(ub[col], 1.0)
    return solve_lp_arrays(alp, lb, ub, opts)
