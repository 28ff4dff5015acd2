"""Acceptance criteria, one test per criterion, each printing a pass/fail line.

Expected values come only from independent oracles: brute-force MILP
enumeration with exact disjunction encodings, direct piecewise-linear
interpolation, brute-force independent-set search, and closed-form
statistics of the triangular distribution.
"""

import math
import random
import time

import pytest

from carveopt.builder import (
    build_base_lp,
    extract_solution,
    pwl_breakpoints,
    pwl_cuts,
    pwl_evaluate,
    r_name,
    recipe_flows,
)
from carveopt.engine import check_violations, solve_global, solve_iterative
from carveopt.lab import hog_sweep, sample_demand, weight_sweep
from carveopt.milp import moq_eligible_materials, mpa_tuples
from carveopt.model import (
    Instance,
    Material,
    Scenario,
    StockBatch,
    WeightVector,
    merge_batches,
)
from carveopt.reductions import (
    all_graphs,
    brute_force_independent_set,
    reduce_is_moq,
    reduce_is_mpa,
)
from carveopt.solver import get_backend
from carveopt.solver.options import SolverOptions
from carveopt.solver.outcome import Status
from carveopt.synth import company_scale_instance, demo_instance, random_instance

from conftest import brute_force_optimum, count_binaries, record_acceptance

_N_SEEDS = 200
_BRUTE_BINARY_LIMIT = 12


@pytest.fixture(scope="module")
def random_suite():
    """Solve the seeded random suite once; several criteria read it."""
    suite = []
    for seed in range(_N_SEEDS):
        sc = Scenario(instance=random_instance(seed),
                      weights=WeightVector(1, 1, 1, 1, 1))
        it = solve_iterative(sc)
        gl = solve_global(sc)
        brute = (brute_force_optimum(sc)
                 if count_binaries(sc) <= _BRUTE_BINARY_LIMIT else None)
        suite.append((seed, sc, it, gl, brute))
    return suite


def _close(a, b, rel=1e-6):
    return abs(a - b) <= rel * max(1.0, abs(a), abs(b))


def test_oracle_equivalence(random_suite):
    """≥ 200 seeded instances: iterative ≡ global ≡ brute enumeration."""
    bad = []
    brute_checked = 0
    for seed, sc, it, gl, brute in random_suite:
        if it.status != gl.status:
            bad.append((seed, "status", it.status, gl.status))
            continue
        if it.status == Status.OPTIMAL and not _close(it.objective, gl.objective):
            bad.append((seed, "iter-vs-global", it.objective, gl.objective))
        if brute is None:
            continue
        brute_checked += 1
        if brute.status == "optimal":
            if it.status != Status.OPTIMAL or not _close(it.objective, brute.objective):
                bad.append((seed, "iter-vs-brute", it.objective, brute.objective))
            if gl.status != Status.OPTIMAL or not _close(gl.objective, brute.objective):
                bad.append((seed, "global-vs-brute", gl.objective, brute.objective))
        elif it.status == Status.OPTIMAL or gl.status == Status.OPTIMAL:
            bad.append((seed, "feasibility", it.status, gl.status))
    ok = not bad and len(random_suite) >= 200 and brute_checked >= 100
    record_acceptance(
        "oracle equivalence", ok,
        f"{len(random_suite)} instances, {brute_checked} brute-checked, "
        f"{len(bad)} mismatches")
    assert ok, bad[:5]


def _reduction_holds(scenario, target) -> bool:
    rep = solve_global(scenario.with_options(SolverOptions(backend="highs")))
    return (rep.status == Status.OPTIMAL
            and abs(rep.objective - target) <= 1e-4 * max(1.0, abs(target)))


def test_reduction_theorem():
    """Gadget optimum hits its target exactly iff the independent set exists:
    every n = 5 graph for the MOQ variant, every n ≤ 4 graph for both."""
    start = time.monotonic()
    failures = []
    checks = 0
    for g in all_graphs(5):
        for k in range(1, 6):
            scenario, target = reduce_is_moq(g, k)
            if _reduction_holds(scenario, target) != \
                    brute_force_independent_set(g, k):
                failures.append(("moq", 5, g.edges, k))
            checks += 1
    for n in range(2, 5):
        for g in all_graphs(n):
            for k in range(1, n + 1):
                for variant, red in (("moq", reduce_is_moq),
                                     ("mpa", reduce_is_mpa)):
                    scenario, target = red(g, k)
                    if _reduction_holds(scenario, target) != \
                            brute_force_independent_set(g, k):
                        failures.append((variant, n, g.edges, k))
                    checks += 1
    elapsed = time.monotonic() - start
    ok = not failures and elapsed < 600.0
    record_acceptance("reduction theorem", ok,
                      f"{checks} graph/k checks, {len(failures)} failures, "
                      f"{elapsed:.0f}s (budget 600s)")
    assert ok, failures[:5]


def test_worked_example_flows():
    """Half activity of the finishing recipe with a 1/3 + 1/6 group split."""
    sc = Scenario(instance=demo_instance())
    production, usage = recipe_flows(
        sc, {"r3": 0.5},
        {("r3", 0, "m4"): 1.0 / 3.0, ("r3", 0, "m5"): 1.0 / 6.0})
    checks = {
        "input m3": (usage["m3"], 600.0),
        "output m6": (production["m6"], 700.0),
        "group m4": (usage["m4"], 100.0),
        "group m5": (usage["m5"], 50.0),
    }
    bad = {k: v for k, v in checks.items() if abs(v[0] - v[1]) > 1e-12}
    record_acceptance("worked example flows", not bad,
                      "600/700/100/50 at 1e-12")
    assert not bad, bad


def test_pwl_correctness():
    """Envelope of cuts ≡ direct interpolation; slopes strictly increase;
    Σ r equals the directly evaluated expiry component at LP optima."""
    rng = random.Random(2024)
    envelope_bad = slope_bad = 0
    for _ in range(1000):
        batches = merge_batches(
            StockBatch(quantity=round(rng.uniform(0.1, 100), 6),
                       remaining_shelf_life=round(rng.uniform(0, 2000), 6))
            for _ in range(rng.randint(1, 8))
        )
        bp = pwl_breakpoints(Material(id="x", batches=batches), 5000.0)
        if not all(a < b for a, b in zip(bp.slopes, bp.slopes[1:])):
            slope_bad += 1
        cuts = pwl_cuts(bp)
        for _ in range(100):
            s = rng.uniform(0.0, bp.total_quantity)
            env = max(0.0, max((m * s - r for m, r in cuts), default=0.0))
            if abs(env - pwl_evaluate(bp, s)) > 1e-12:
                envelope_bad += 1

    # at LP optima with w4 > 0 the epigraph is tight: Σ r_i = f4
    optimum_bad = 0
    solved = 0
    for seed in range(40):
        sc = Scenario(instance=random_instance(seed),
                      weights=WeightVector(1, 1, 1, 1, 7))
        lp = build_base_lp(sc)
        out = get_backend("simplex").solve(lp, SolverOptions())
        if out.status != Status.OPTIMAL:
            continue
        solved += 1
        sol = extract_solution(sc, out)
        total_r = sum(
            out.values[r_name(mid)]
            for mid, mat in sc.instance.materials.items()
            if mat.batches and lp.has_var(r_name(mid))
        )
        f4 = sum(
            pwl_evaluate(pwl_breakpoints(mat, sc.exponent_scale),
                         sol.stock_old[mid])
            for mid, mat in sc.instance.materials.items() if mat.batches
        )
        if abs(total_r - f4) > 1e-9 * max(1.0, abs(f4)):
            optimum_bad += 1

    ok = envelope_bad == 0 and slope_bad == 0 and optimum_bad == 0 and solved > 10
    record_acceptance(
        "piecewise-linear penalty", ok,
        f"1000 batch lists x 100 points, {solved} LP optima checked")
    assert ok, (envelope_bad, slope_bad, optimum_bad, solved)


def test_iterative_model_bounds(random_suite):
    """Iterations ≤ 1 + #MOQ-eligible + Σ|A|; objectives non-decreasing;
    final solutions satisfy every disjunction."""
    bad = []
    for seed, sc, it, _, _ in random_suite:
        bound = 1 + len(moq_eligible_materials(sc)) + len(mpa_tuples(sc))
        if it.iterations > bound:
            bad.append((seed, "iterations", it.iterations, bound))
        objs = [s.objective for s in it.per_iteration if s.objective is not None]
        for a, b in zip(objs, objs[1:]):
            if b < a - 1e-6 * max(1.0, abs(a)):
                bad.append((seed, "monotonicity", a, b))
        if it.status == Status.OPTIMAL and check_violations(sc, it.solution):
            bad.append((seed, "violations"))
    record_acceptance("iterative-model bounds", not bad,
                      f"{len(random_suite)} instances, {len(bad)} breaches")
    assert not bad, bad[:5]


def _demand_instance() -> Instance:
    inst = demo_instance()
    mats = dict(inst.materials)
    mats["m6"] = Material(id="m6", name="product", cost=8.0, demand=700.0)
    return Instance(materials=mats, recipes=inst.recipes)


def test_sweep_semantics():
    """t_l ≥ −1e-6; pinning a recipe never improves the objective; the
    pure-LP pinned-level value function passes midpoint convexity."""
    bad = []
    inst = _demand_instance()
    rows = weight_sweep(inst, [(1, 1, 1, 1, 1), (100, 100, 1, 1, 1),
                               (1, 0, 0, 0, 0), (5, 4, 3, 2, 1)])
    for row in rows:
        for l, t in enumerate(row.t):
            if t is not None and t < -1e-6:
                bad.append(("t", row.key, l, t))

    free = solve_iterative(Scenario(instance=inst))
    levels = [0.0, 0.4, 0.8, 1.2, 1.6, 2.0]
    hog = hog_sweep(inst, "r1", levels)
    objs = {}
    for level, row in zip(levels, hog):
        if row.objective is None:
            bad.append(("pinned-status", level, row.status))
            continue
        objs[level] = row.objective
        if row.objective < free.objective - 1e-6 * max(1.0, abs(free.objective)):
            bad.append(("pinned<free", level, row.objective, free.objective))
    for lo, mid, hi in [(0.0, 0.4, 0.8), (0.4, 0.8, 1.2), (0.8, 1.2, 1.6),
                        (0.0, 0.8, 1.6), (0.4, 1.2, 2.0)]:
        if not {lo, mid, hi} <= objs.keys():
            continue
        if objs[mid] > (objs[lo] + objs[hi]) / 2 + 1e-6 * max(
                1.0, abs(objs[lo]), abs(objs[hi])):
            bad.append(("convexity", lo, mid, hi))
    record_acceptance("sweep semantics", not bad,
                      f"{len(rows)} weight rows, {len(levels)} pinned levels")
    assert not bad, bad


def test_scale_performance():
    """1130 materials / 1131 recipes / 300 demands / MOQ 100 under 60 s."""
    inst = company_scale_instance(1130, 1131, 300)
    sc = Scenario(instance=inst, weights=WeightVector(100, 100, 1, 1, 1),
                  moq_override=100.0,
                  solver_options=SolverOptions(backend="highs",
                                               time_limit=120.0))
    start = time.monotonic()
    rep = solve_iterative(sc)
    elapsed = time.monotonic() - start
    ok = rep.status == Status.OPTIMAL and elapsed < 60.0
    record_acceptance(
        "scale within budget", ok,
        f"{len(inst.materials)} materials, {len(inst.recipes)} recipes, "
        f"{rep.iterations} iterations, {elapsed:.1f}s (budget 60s)")
    assert ok, (rep.status, elapsed)


def test_triangular_sampler():
    """10^5 samples at reference 1: support within [0.1, 5], mean near 61/30."""
    rng = random.Random(12345)
    samples = [sample_demand(1.0, rng) for _ in range(100_000)]
    lo, hi = min(samples), max(samples)
    mean = sum(samples) / len(samples)
    expected = 61.0 / 30.0  # (a + b + c) / 3 with a=0.1, b=5, c=1
    ok = lo >= 0.1 and hi <= 5.0 and abs(mean - expected) < 0.02
    record_acceptance(
        "triangular sampler", ok,
        f"support [{lo:.3f}, {hi:.3f}], mean {mean:.4f} vs {expected:.4f}")
    assert ok, (lo, hi, mean)
