"""Construction of the continuous relaxation of the planning model.

Per material the model carries buy, total/new/old stock, production and
usage variables tied together by flow balance; old stock is penalized by a
convex piecewise-linear expiration function linearized as epigraph cuts on
an auxiliary variable.  Alternative groups contribute split variables that
must sum to the recipe activity.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .lp import EQ, GE, LE, LinearProgram
from .model import Material, Scenario, Solution
from .solver.outcome import SolveOutcome

__all__ = [
    "PwlBreakpoints",
    "pwl_breakpoints",
    "pwl_cuts",
    "pwl_evaluate",
    "build_base_lp",
    "objective_components",
    "extract_solution",
    "recipe_flows",
    "z_name",
    "zhat_name",
    "b_name",
    "s_name",
    "snew_name",
    "sold_name",
    "p_name",
    "u_name",
    "r_name",
]


def z_name(recipe_id: str) -> str:
    return f"z[{recipe_id}]"


def zhat_name(recipe_id: str, group: int, material_id: str) -> str:
    return f"zhat[{recipe_id}|{group}|{material_id}]"


def b_name(material_id: str) -> str:
    return f"b[{material_id}]"


def s_name(material_id: str) -> str:
    return f"s[{material_id}]"


def snew_name(material_id: str) -> str:
    return f"snew[{material_id}]"


def sold_name(material_id: str) -> str:
    return f"sold[{material_id}]"


def p_name(material_id: str) -> str:
    return f"p[{material_id}]"


def u_name(material_id: str) -> str:
    return f"u[{material_id}]"


def r_name(material_id: str) -> str:
    return f"r[{material_id}]"


@dataclass(frozen=True)
class PwlBreakpoints:
    """Expiration-penalty breakpoints, starting at (0, 0).

    Batches are taken newest first (descending remaining shelf life), so
    segment slopes e^(-life/scale) strictly increase and the function is
    convex; the last x equals the total stock on hand.
    """

    points: tuple[tuple[float, float], ...]
    slopes: tuple[float, ...]  # slope of segment k, between points k and k+1

    @property
    def total_quantity(self) -> float:
        return self.points[-1][0] if len(self.points) > 1 else 0.0


def pwl_breakpoints(material: Material, exponent_scale: float) -> PwlBreakpoints:
    if exponent_scale <= 0:
        raise ValueError("exponent_scale must be positive")
    ordered = sorted(material.batches, key=lambda b: -b.remaining_shelf_life)
    points: list[tuple[float, float]] = [(0.0, 0.0)]
    slopes: list[float] = []
    cx = cy = 0.0
    for batch in ordered:
        slope = math.exp(-batch.remaining_shelf_life / exponent_scale)
        cx += batch.quantity
        cy += batch.quantity * slope
        points.append((cx, cy))
        slopes.append(slope)
    return PwlBreakpoints(points=tuple(points), slopes=tuple(slopes))


def pwl_cuts(bp: PwlBreakpoints) -> list[tuple[float, float]]:
    """Epigraph cuts, one per segment: slope * s_old - r <= rhs.

    The max over cuts of (slope * s_old - rhs) equals the piecewise-linear
    penalty at every s_old in [0, total stock].
    """
    cuts = []
    for k, slope in enumerate(bp.slopes):
        x_k, y_k = bp.points[k + 1]
        cuts.append((slope, slope * x_k - y_k))
    return cuts


def pwl_evaluate(bp: PwlBreakpoints, s_old: float) -> float:
    """Direct breakpoint interpolation (the oracle for the cut envelope)."""
    pts = bp.points
    if len(pts) <= 1:
        return 0.0
    if s_old <= 0:
        return 0.0
    for k in range(1, len(pts)):
        x0, y0 = pts[k - 1]
        x1, y1 = pts[k]
        if s_old <= x1 or k == len(pts) - 1:
            return y0 + (s_old - x0) * (y1 - y0) / (x1 - x0)
    return pts[-1][1]


def build_base_lp(scenario: Scenario) -> LinearProgram:
    """Continuous relaxation: all model rows except the MOQ/MPA groups."""
    inst = scenario.instance
    w = scenario.weights
    scale = scenario.exponent_scale
    lp = LinearProgram()

    for rid in inst.recipes:
        level = scenario.fixed_recipe_levels.get(rid)
        if level is None:
            lp.add_var(z_name(rid))
        else:
            lp.add_var(z_name(rid), lb=level, ub=level)

    # Production / usage coefficients per material.
    producers: dict[str, list[tuple[str, float]]] = {mid: [] for mid in inst.materials}
    consumers: dict[str, list[tuple[str, float]]] = {mid: [] for mid in inst.materials}
    group_uses: dict[str, list[tuple[str, int, float]]] = {mid: [] for mid in inst.materials}
    for rid, rec in inst.recipes.items():
        for mid, qty in rec.outputs:
            producers[mid].append((rid, qty))
        for mid, qty in rec.inputs:
            consumers[mid].append((rid, qty))
        for g, group in enumerate(rec.alt_groups):
            for mid in group.members:
                group_uses[mid].append((rid, g, group.total_quantity))

    for rid, rec in inst.recipes.items():
        for g, group in enumerate(rec.alt_groups):
            coeffs: dict[str, float] = {z_name(rid): 1.0}
            for mid in group.members:
                lp.add_var(zhat_name(rid, g, mid))
                coeffs[zhat_name(rid, g, mid)] = -1.0
            lp.add_constraint(coeffs, EQ, 0.0, name=f"group[{rid}|{g}]")

    for mid, mat in inst.materials.items():
        h = mat.stock
        buyable = inst.purchasable(mid)
        lp.add_var(b_name(mid), ub=math.inf if buyable else 0.0)
        lp.add_var(s_name(mid))
        lp.add_var(snew_name(mid))
        lp.add_var(sold_name(mid), ub=h)
        lp.add_var(p_name(mid))
        lp.add_var(u_name(mid))

        lp.add_constraint(
            {b_name(mid): 1.0, p_name(mid): 1.0, s_name(mid): -1.0, u_name(mid): -1.0},
            EQ,
            mat.demand - h,
            name=f"flow[{mid}]",
        )
        p_row: dict[str, float] = {p_name(mid): 1.0}
        for rid, qty in producers[mid]:
            p_row[z_name(rid)] = p_row.get(z_name(rid), 0.0) - qty
        lp.add_constraint(p_row, EQ, 0.0, name=f"prod[{mid}]")

        u_row: dict[str, float] = {u_name(mid): 1.0}
        for rid, qty in consumers[mid]:
            u_row[z_name(rid)] = u_row.get(z_name(rid), 0.0) - qty
        for rid, g, total in group_uses[mid]:
            u_row[zhat_name(rid, g, mid)] = u_row.get(zhat_name(rid, g, mid), 0.0) - total
        lp.add_constraint(u_row, EQ, 0.0, name=f"use[{mid}]")

        lp.add_constraint(
            {s_name(mid): 1.0, snew_name(mid): -1.0, sold_name(mid): -1.0},
            EQ,
            0.0,
            name=f"split[{mid}]",
        )
        if h > 0:
            # s_old >= h - d - u; vacuous when nothing is on hand.
            lp.add_constraint(
                {sold_name(mid): 1.0, u_name(mid): 1.0},
                GE,
                h - mat.demand,
                name=f"oldfloor[{mid}]",
            )

        if mat.batches:
            lp.add_var(r_name(mid))
            bp = pwl_breakpoints(mat, scale)
            for k, (slope, rhs) in enumerate(pwl_cuts(bp)):
                lp.add_constraint(
                    {sold_name(mid): slope, r_name(mid): -1.0},
                    LE,
                    rhs,
                    name=f"pwl[{mid}|{k}]",
                )

        if w.w0 * mat.cost:
            lp.add_objective_coeff(b_name(mid), w.w0 * mat.cost)
        if w.w1 * mat.cost:
            lp.add_objective_coeff(s_name(mid), w.w1 * mat.cost)
        if w.w2:
            lp.add_objective_coeff(s_name(mid), w.w2 * math.exp(-mat.turnover / scale))
        if w.w3:
            lp.add_objective_coeff(snew_name(mid), w.w3 * math.exp(-mat.shelf_life / scale))
        if w.w4 and mat.batches:
            lp.add_objective_coeff(r_name(mid), w.w4)

    return lp


def recipe_flows(scenario: Scenario, z: dict[str, float],
                 z_hat: dict[tuple[str, int, str], float]
                 ) -> tuple[dict[str, float], dict[str, float]]:
    """Production and usage per material for given activity levels."""
    inst = scenario.instance
    production = {mid: 0.0 for mid in inst.materials}
    usage = {mid: 0.0 for mid in inst.materials}
    for rid, rec in inst.recipes.items():
        level = z.get(rid, 0.0)
        for mid, qty in rec.outputs:
            production[mid] += qty * level
        for mid, qty in rec.inputs:
            usage[mid] += qty * level
        for g, group in enumerate(rec.alt_groups):
            for mid in group.members:
                usage[mid] += group.total_quantity * z_hat.get((rid, g, mid), 0.0)
    return production, usage


def objective_components(scenario: Scenario, solution: Solution
                         ) -> tuple[float, float, float, float, float]:
    """f0..f4 evaluated directly from the solution and instance data.

    The expiration component f4 is interpolated from the breakpoints, not
    read off the epigraph variable.
    """
    inst = scenario.instance
    scale = scenario.exponent_scale
    f0 = f1 = f2 = f3 = f4 = 0.0
    for mid, mat in inst.materials.items():
        f0 += mat.cost * solution.buy.get(mid, 0.0)
        s = solution.stock_total.get(mid, 0.0)
        f1 += mat.cost * s
        f2 += math.exp(-mat.turnover / scale) * s
        f3 += math.exp(-mat.shelf_life / scale) * solution.stock_new.get(mid, 0.0)
        if mat.batches:
            bp = pwl_breakpoints(mat, scale)
            f4 += pwl_evaluate(bp, solution.stock_old.get(mid, 0.0))
    return (f0, f1, f2, f3, f4)


def extract_solution(scenario: Scenario, outcome: SolveOutcome) -> Solution:
    """Read the model variables out of a solve outcome."""
    if not outcome.has_solution:
        raise ValueError(f"no solution available (status {outcome.status})")
    vals = outcome.values
    inst = scenario.instance

    z = {rid: vals.get(z_name(rid), 0.0) for rid in inst.recipes}
    z_hat: dict[tuple[str, int, str], float] = {}
    for rid, rec in inst.recipes.items():
        for g, group in enumerate(rec.alt_groups):
            for mid in group.members:
                z_hat[(rid, g, mid)] = vals.get(zhat_name(rid, g, mid), 0.0)

    buy = {mid: vals.get(b_name(mid), 0.0) for mid in inst.materials}
    stock_new = {mid: vals.get(snew_name(mid), 0.0) for mid in inst.materials}
    stock_old = {mid: vals.get(sold_name(mid), 0.0) for mid in inst.materials}
    stock_total = {mid: vals.get(s_name(mid), 0.0) for mid in inst.materials}
    production = {mid: vals.get(p_name(mid), 0.0) for mid in inst.materials}
    usage = {mid: vals.get(u_name(mid), 0.0) for mid in inst.materials}
    pwl_value = {
        mid: vals.get(r_name(mid), 0.0)
        for mid, mat in inst.materials.items()
        if mat.batches
    }

    partial = Solution(
        z=z, z_hat=z_hat, buy=buy, stock_new=stock_new, stock_old=stock_old,
        stock_total=stock_total, production=production, usage=usage,
        pwl_value=pwl_value, objective_components=(0.0,) * 5, objective_value=0.0,
    )
    comps = objective_components(scenario, partial)
    w = scenario.weights.as_tuple()
    return Solution(
        z=z, z_hat=z_hat, buy=buy, stock_new=stock_new, stock_old=stock_old,
        stock_total=stock_total, production=production, usage=usage,
        pwl_value=pwl_value, objective_components=comps,
        objective_value=outcome.objective
        if outcome.objective is not None
        else sum(wi * fi for wi, fi in zip(w, comps)),
    )
