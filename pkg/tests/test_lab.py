"""Scenario lab: sweeps, calibration, sampling, CSV output."""

import csv
import math
import random

import pytest

from carveopt.lab import (
    SweepError,
    calibrate_demands,
    demand_scalability,
    hog_sweep,
    moq_sweep,
    sample_demand,
    weight_sweep,
    write_sweep_csv,
)
from carveopt.model import Instance, Material, Scenario, WeightVector
from carveopt.solver.options import SolverOptions
from carveopt.synth import demo_instance


def _demand_instance() -> Instance:
    inst = demo_instance()
    mats = dict(inst.materials)
    mats["m6"] = Material(id="m6", name="product", cost=8.0, demand=700.0)
    return Instance(materials=mats, recipes=inst.recipes)


def test_weight_sweep_reports_nonnegative_deterioration():
    inst = _demand_instance()
    rows = weight_sweep(inst, [(1, 1, 1, 1, 1), (100, 100, 1, 1, 1)])
    assert len(rows) == 2
    for row in rows:
        assert row.status == str(row.status)  # stringly-typed status
        for t in row.t:
            assert t is None or t >= -1e-6


def test_weight_sweep_unit_weight_row_has_zero_deterioration():
    inst = _demand_instance()
    rows = weight_sweep(inst, [(1, 0, 0, 0, 0)])
    t0 = rows[0].t[0]
    assert t0 == pytest.approx(0.0, abs=1e-6)


def test_weight_sweep_requires_sets():
    with pytest.raises(ValueError):
        weight_sweep(_demand_instance(), [])


def test_hog_sweep_pinned_never_beats_unconstrained():
    inst = _demand_instance()
    from carveopt.engine import solve_iterative

    free = solve_iterative(Scenario(instance=inst))
    rows = hog_sweep(inst, "r1", [0.0, 0.5, 1.0, 2.0])
    assert [r.key for r in rows] == ["0", "0.5", "1", "2"]
    for row in rows:
        if row.objective is not None:
            assert row.objective >= free.objective - 1e-6 * max(1.0, abs(free.objective))


def test_hog_sweep_unknown_recipe():
    with pytest.raises(KeyError):
        hog_sweep(_demand_instance(), "nope", [1.0])


def test_moq_sweep_monotone_in_override():
    inst = _demand_instance()
    rows = moq_sweep(inst, [0.0, 50.0, 100.0])
    objs = [r.objective for r in rows]
    assert all(o is not None for o in objs)
    # a larger uniform minimum order quantity only restricts the feasible set
    for a, b in zip(objs, objs[1:]):
        assert b >= a - 1e-6 * max(1.0, abs(a))
    with pytest.raises(ValueError):
        moq_sweep(inst, [-1.0])


def test_calibrate_demands_covers_produced_materials():
    cal = calibrate_demands(demo_instance())
    assert set(cal) == set(demo_instance().materials)
    assert all(v >= 0.0 for v in cal.values())
    # forced activity of every recipe must overproduce something
    assert any(v > 0.0 for v in cal.values())


def test_sample_demand_support_and_zero():
    rng = random.Random(3)
    assert sample_demand(0.0, rng) == 0.0
    for _ in range(1000):
        s = sample_demand(2.0, rng)
        assert 0.2 <= s <= 10.0
    with pytest.raises(ValueError):
        sample_demand(-1.0, rng)


def test_demand_scalability_rows_and_ordering():
    rows = demand_scalability(demo_instance(), [1, 2], seed=5, moq=10.0)
    assert [r.key for r in rows] == ["1", "2"]
    with pytest.raises(ValueError):
        demand_scalability(demo_instance(), [2, 1])


def test_write_sweep_csv_layout(tmp_path):
    inst = _demand_instance()
    rows = weight_sweep(inst, [(1, 1, 1, 1, 1)])
    path = tmp_path / "sweep.csv"
    write_sweep_csv(rows, path, key_label="weights", include_t=True)
    with open(path, newline="") as fh:
        records = list(csv.reader(fh))
    assert records[0] == ["weights", "status", "objective",
                          "f0", "f1", "f2", "f3", "f4",
                          "t0", "t1", "t2", "t3", "t4",
                          "iterations", "consB", "consP", "wall_time"]
    assert len(records) == 2
    body = records[1]
    # objective in scientific notation, undefined ratios rendered as n/a
    assert "e" in body[2]
    undefined = [rows[0].t[l] is None for l in range(5)]
    for l, is_none in enumerate(undefined):
        if is_none:
            assert body[8 + l] == "n/a"
