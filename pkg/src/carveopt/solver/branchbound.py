"""Best-bound branch-and-bound over binary variables.

Node relaxations are solved from scratch by the built-in simplex.
Branching picks the most fractional binary (ties to the lowest column
index); node selection is best bound, ties broken by depth, then by
creation order, so search is fully deterministic.
"""

from __future__ import annotations

import heapq
import time

import numpy as np

from ..lp import LinearProgram
from .options import SolverOptions
from .outcome import SolveOutcome, Status
from .simplex import ArrayLP, compile_lp, solve_lp_arrays

__all__ = ["solve_milp"]


def _gap_closed(incumbent: float, bound: float, opts: SolverOptions) -> bool:
    return incumbent - bound <= max(opts.optimality_tolerance,
                                    opts.relative_gap * max(1.0, abs(incumbent)))


def solve_milp(lp: LinearProgram, opts: SolverOptions | None = None) -> SolveOutcome:
    opts = opts or SolverOptions()
    start = time.monotonic()
    deadline = start + opts.time_limit
    alp = compile_lp(lp)
    bin_cols = np.array(alp.binary_cols, dtype=int)

    lb0, ub0 = alp.lb.copy(), alp.ub.copy()
    if bin_cols.size:
        lb0[bin_cols] = np.maximum(lb0[bin_cols], 0.0)
        ub0[bin_cols] = np.minimum(ub0[bin_cols], 1.0)

    root = solve_lp_arrays(alp, lb0, ub0, opts, deadline)
    nodes = 1
    iterations = root.iterations
    if root.status != Status.OPTIMAL or bin_cols.size == 0:
        root.nodes = nodes
        root.wall_time = time.monotonic() - start
        return root

    itol = opts.integrality_tolerance
    incumbent: dict[str, float] | None = None
    incumbent_obj = float("inf")

    # Heap entries: (bound, depth, seq, lb, ub, relaxation outcome).
    seq = 0
    heap: list = [(root.objective, 0, seq, lb0, ub0, root)]
    best_bound = root.objective
    status = Status.OPTIMAL

    while heap:
        bound, depth, _, lb, ub, relax = heapq.heappop(heap)
        best_bound = bound
        if incumbent is not None and _gap_closed(incumbent_obj, bound, opts):
            break
        if time.monotonic() > deadline:
            status = Status.TIME_LIMIT
            break
        if opts.node_limit is not None and nodes >= opts.node_limit:
            status = Status.NODE_LIMIT
            break

        x = np.array([relax.values[name] for name in alp.names])
        frac = np.abs(x[bin_cols] - np.round(x[bin_cols]))
        if frac.size == 0 or np.max(frac) <= itol:
            # Near-integral relaxations can still lean on tolerance-times-big-M
            # slack, so fix the binaries to their rounded values and re-solve
            # before accepting an incumbent.
            lbr, ubr = lb.copy(), ub.copy()
            rounded = np.round(x[bin_cols])
            lbr[bin_cols] = rounded
            ubr[bin_cols] = rounded
            repaired = solve_lp_arrays(alp, lbr, ubr, opts, deadline)
            nodes += 1
            iterations += repaired.iterations
            if repaired.status == Status.OPTIMAL and repaired.objective < incumbent_obj:
                incumbent = repaired.values
                incumbent_obj = repaired.objective
            if np.max(frac, initial=0.0) == 0.0:
                # Exactly integral: the relaxation optimum is the best point
                # in this subtree, so the node is finished.
                continue
            # A nearly-integral relaxation may still hide a better integral
            # point elsewhere in the subtree; branch on the residual binary.

        # Most fractional binary, ties broken by lowest column index.
        best_f = np.max(frac)
        branch = int(bin_cols[int(np.argmax(frac >= best_f - 1e-12))])

        for fixed in (0.0, 1.0):
            lb2, ub2 = lb.copy(), ub.copy()
            lb2[branch] = fixed
            ub2[branch] = fixed
            child = solve_lp_arrays(alp, lb2, ub2, opts, deadline)
            nodes += 1
            iterations += child.iterations
            if child.status == Status.TIME_LIMIT:
                status = Status.TIME_LIMIT
                heap = []
                break
            if child.status != Status.OPTIMAL:
                continue
            if incumbent is not None and child.objective >= incumbent_obj - opts.optimality_tolerance:
                continue
            seq += 1
            heapq.heappush(heap, (child.objective, depth + 1, seq, lb2, ub2, child))

    wall = time.monotonic() - start
    if incumbent is not None:
        return SolveOutcome(status=status if status != Status.OPTIMAL else Status.OPTIMAL,
                            values=incumbent, objective=incumbent_obj,
                            iterations=iterations, nodes=nodes, wall_time=wall)
    if status in (Status.TIME_LIMIT, Status.NODE_LIMIT):
        return SolveOutcome(status=status, iterations=iterations, nodes=nodes, wall_time=wall)
    return SolveOutcome(status=Status.INFEASIBLE, iterations=iterations, nodes=nodes, wall_time=wall)
