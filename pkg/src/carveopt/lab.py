"""Experiment protocols: weight sweeps, pinned-recipe sweeps, MOQ sweeps,
and demand-scalability runs with triangular demand sampling.

Every sweep returns a list of :class:`SweepRow` and can be written to CSV
with :func:`write_sweep_csv`.  All columns except wall time are
deterministic for a fixed instance, seed, and solver options.
"""

from __future__ import annotations

import csv
import random
from dataclasses import dataclass, replace
from typing import Iterable, Optional, Sequence

from .builder import build_base_lp, snew_name, z_name, zhat_name
from .engine import SolveReport, solve_iterative
from .lp import GE
from .model import Instance, Material, Scenario, WeightVector
from .solver import SolverOptions, Status
from .solver.backends import get_backend

__all__ = [
    "SweepRow",
    "SweepError",
    "weight_sweep",
    "hog_sweep",
    "moq_sweep",
    "calibrate_demands",
    "sample_demand",
    "demand_scalability",
    "write_sweep_csv",
]

_FORCED_ACTIVITY = 0.01
_FORCED_SHARE = 0.05


class SweepError(RuntimeError):
    """A sweep could not produce its reference solves."""


@dataclass(frozen=True)
class SweepRow:
    """One table row of a sweep report."""

    key: str
    status: str
    objective: Optional[float]
    f: Optional[tuple[float, float, float, float, float]]
    t: Optional[tuple[Optional[float], ...]]
    iterations: int
    cons_moq: int
    cons_mpa: int
    wall_time: float


def _row(key: str, report: SolveReport,
         t: Optional[tuple[Optional[float], ...]] = None) -> SweepRow:
    sol = report.solution
    return SweepRow(
        key=key,
        status=str(report.status),
        objective=report.objective,
        f=sol.objective_components if sol else None,
        t=t,
        iterations=report.iterations,
        cons_moq=report.moq_groups,
        cons_mpa=report.mpa_groups,
        wall_time=report.wall_time,
    )


def weight_sweep(
    instance: Instance,
    weight_sets: Sequence[Sequence[float]],
    options: SolverOptions | None = None,
    mpa_ratio: float = 0.05,
    moq_override: Optional[float] = None,
) -> list[SweepRow]:
    """Solve each weight set and report relative deteriorations.

    ``t_l = 100 * (f_l / f*_l - 1)`` where ``f*_l`` is component ``l`` of the
    solve with unit weight on ``l`` alone; ``t_l`` is None when ``f*_l = 0``.
    """
    if not weight_sets:
        raise ValueError("weight_sets must be nonempty")
    opts = options or SolverOptions()

    reference: list[float] = []
    for l in range(5):
        unit = [0.0] * 5
        unit[l] = 1.0
        sc = Scenario(instance=instance, weights=WeightVector.of(unit),
                      moq_override=moq_override, mpa_ratio=mpa_ratio,
                      solver_options=opts)
        rep = solve_iterative(sc)
        if rep.status != Status.OPTIMAL or rep.solution is None:
            raise SweepError(
                f"reference solve for component f{l} ended {rep.status}; "
                "cannot compute relative deterioration"
            )
        reference.append(rep.solution.objective_components[l])

    rows = []
    for ws in weight_sets:
        weights = WeightVector.of(ws)
        sc = Scenario(instance=instance, weights=weights,
                      moq_override=moq_override, mpa_ratio=mpa_ratio,
                      solver_options=opts)
        rep = solve_iterative(sc)
        t: Optional[tuple[Optional[float], ...]] = None
        if rep.solution is not None:
            t = tuple(
                100.0 * (rep.solution.objective_components[l] / reference[l] - 1.0)
                if reference[l] > 0 else None
                for l in range(5)
            )
        key = "(" + ",".join(f"{w:g}" for w in weights.as_tuple()) + ")"
        rows.append(_row(key, rep, t))
    return rows


def hog_sweep(
    instance: Instance,
    recipe_id: str,
    levels: Sequence[float],
    weights: WeightVector | None = None,
    options: SolverOptions | None = None,
) -> list[SweepRow]:
    """One row per pinned activity level of the given recipe."""
    if recipe_id not in instance.recipes:
        raise KeyError(f"unknown recipe id: {recipe_id!r}")
    rows = []
    for level in levels:
        sc = Scenario(instance=instance, weights=weights or WeightVector(),
                      fixed_recipe_levels={recipe_id: float(level)},
                      solver_options=options or SolverOptions())
        rows.append(_row(f"{level:g}", solve_iterative(sc)))
    return rows


def moq_sweep(
    instance: Instance,
    moq_values: Sequence[float],
    weights: WeightVector | None = None,
    options: SolverOptions | None = None,
) -> list[SweepRow]:
    """One row per uniform minimum-order-quantity override."""
    rows = []
    for moq in moq_values:
        if moq < 0:
            raise ValueError("moq values must be non-negative")
        sc = Scenario(instance=instance, weights=weights or WeightVector(),
                      moq_override=float(moq),
                      solver_options=options or SolverOptions())
        rows.append(_row(f"{moq:g}", solve_iterative(sc)))
    return rows


def calibrate_demands(
    instance: Instance,
    options: SolverOptions | None = None,
) -> dict[str, float]:
    """Reference demand level per material from a forced-activity solve.

    Demands are zeroed, every recipe is forced to run at a small level, every
    alternative member is forced to a small share, and the resulting fresh
    overproduction of each material is its reference demand.
    """
    zeroed = Instance(
        materials={
            mid: replace(m, demand=0.0) for mid, m in instance.materials.items()
        },
        recipes=instance.recipes,
    )
    sc = Scenario(instance=zeroed, solver_options=options or SolverOptions())
    lp = build_base_lp(sc)
    for rid, rec in zeroed.recipes.items():
        col = lp.col(z_name(rid))
        lp.variables[col].lb = max(lp.variables[col].lb, _FORCED_ACTIVITY)
        for g, group in enumerate(rec.alt_groups):
            for mid in group.members:
                lp.add_constraint(
                    {lp.col(zhat_name(rid, g, mid)): 1.0, col: -_FORCED_SHARE},
                    GE, 0.0, name=f"force[{rid}|{g}|{mid}]",
                )
    outcome = get_backend(sc.solver_options.backend).solve(lp, sc.solver_options)
    if outcome.status != Status.OPTIMAL or outcome.values is None:
        raise SweepError(f"forced-activity calibration solve ended {outcome.status}")
    return {
        mid: max(0.0, outcome.values.get(snew_name(mid), 0.0))
        for mid in instance.materials
    }


def sample_demand(d_tilde: float, rng: random.Random) -> float:
    """Triangular demand sample on [0.1·d̃, 5·d̃] with mode d̃; zero stays zero."""
    if d_tilde < 0:
        raise ValueError("reference demand must be non-negative")
    if d_tilde == 0:
        return 0.0
    return rng.triangular(0.1 * d_tilde, 5.0 * d_tilde, d_tilde)


def demand_scalability(
    instance: Instance,
    counts: Sequence[int],
    seed: int = 0,
    moq: float = 100.0,
    weights: Sequence[float] = (100.0, 100.0, 1.0, 1.0, 1.0),
    options: SolverOptions | None = None,
) -> list[SweepRow]:
    """Runtime as a function of the number of sampled demands.

    Calibrated reference demands are sampled once, materials are shuffled in
    a seed-determined order, and each count takes the first ``count``
    materials of that order as demand carriers.
    """
    if list(counts) != sorted(counts):
        raise ValueError("counts must be ascending")
    calibration = calibrate_demands(instance, options)
    rng = random.Random(seed)
    carriers = sorted(mid for mid, d in calibration.items() if d > 0)
    rng.shuffle(carriers)
    sampled = {mid: sample_demand(calibration[mid], rng) for mid in carriers}

    rows = []
    for count in counts:
        chosen = set(carriers[: min(count, len(carriers))])
        materials = {
            mid: replace(m, demand=sampled[mid] if mid in chosen else 0.0)
            for mid, m in instance.materials.items()
        }
        inst = Instance(materials=materials, recipes=instance.recipes)
        sc = Scenario(instance=inst, weights=WeightVector.of(weights),
                      moq_override=float(moq),
                      solver_options=options or SolverOptions())
        rows.append(_row(str(count), solve_iterative(sc)))
    return rows


def _fmt_f(value: Optional[float]) -> str:
    return "" if value is None else f"{value:.5e}"


def _fmt_g(value) -> str:
    if value is None:
        return "n/a"
    if isinstance(value, float):
        return f"{value:.6g}"
    return str(value)


def write_sweep_csv(rows: Iterable[SweepRow], path, key_label: str = "key",
                    include_t: bool = False) -> None:
    """Write sweep rows as CSV: comma-separated, decimal point, 6 significant
    digits, scientific notation for the f columns."""
    rows = list(rows)
    header = [key_label, "status", "objective",
              "f0", "f1", "f2", "f3", "f4"]
    if include_t:
        header += ["t0", "t1", "t2", "t3", "t4"]
    header += ["iterations", "consB", "consP", "wall_time"]
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        for row in rows:
            f = row.f or (None,) * 5
            record = [row.key, row.status, _fmt_f(row.objective)]
            record += [_fmt_f(v) for v in f]
            if include_t:
                t = row.t or (None,) * 5
                record += [_fmt_g(v) for v in t]
            record += [row.iterations, row.cons_moq, row.cons_mpa,
                       f"{row.wall_time:.6g}"]
            writer.writerow(record)
