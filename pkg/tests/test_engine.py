"""Constraint-generation engine: bounds, monotonicity, final feasibility."""

import pytest

from carveopt.engine import check_violations, solve_global, solve_iterative
from carveopt.milp import moq_eligible_materials, mpa_tuples
from carveopt.model import (
    Instance,
    Material,
    Recipe,
    Scenario,
    WeightVector,
)
from carveopt.solver.options import SolverOptions
from carveopt.solver.outcome import Status
from carveopt.synth import demo_instance, random_instance

from conftest import brute_force_optimum, count_binaries


def _scenario(seed: int, backend: str = "simplex") -> Scenario:
    return Scenario(instance=random_instance(seed),
                    weights=WeightVector(1, 1, 1, 1, 1),
                    solver_options=SolverOptions(backend=backend))


@pytest.mark.parametrize("seed", range(12))
def test_iteration_bound_and_monotone_objectives(seed):
    sc = _scenario(seed)
    rep = solve_iterative(sc)
    bound = 1 + len(moq_eligible_materials(sc)) + len(mpa_tuples(sc))
    assert rep.iterations <= bound
    objs = [s.objective for s in rep.per_iteration if s.objective is not None]
    for a, b in zip(objs, objs[1:]):
        assert b >= a - 1e-6 * max(1.0, abs(a))


@pytest.mark.parametrize("seed", range(12))
def test_final_solution_has_no_violations(seed):
    sc = _scenario(seed)
    rep = solve_iterative(sc)
    if rep.status == Status.OPTIMAL:
        assert not check_violations(sc, rep.solution)


@pytest.mark.parametrize("seed", [0, 4, 6, 9])
def test_iterative_equals_global_and_oracle(seed):
    sc = _scenario(seed)
    if count_binaries(sc) > 12:
        pytest.skip("too many binaries for the brute oracle")
    br = brute_force_optimum(sc)
    it = solve_iterative(sc)
    gl = solve_global(sc)
    if br.status == "optimal":
        assert it.status == Status.OPTIMAL and gl.status == Status.OPTIMAL
        assert it.objective == pytest.approx(br.objective, rel=1e-6, abs=1e-6)
        assert gl.objective == pytest.approx(br.objective, rel=1e-6, abs=1e-6)
    else:
        assert it.status != Status.OPTIMAL
        assert gl.status != Status.OPTIMAL


def test_clean_first_iterate_short_circuits():
    # No MOQ and no groups: the base LP is already exact.
    sc = Scenario(instance=demo_instance())
    rep = solve_iterative(sc)
    assert rep.status == Status.OPTIMAL
    assert rep.moq_groups == 0
    assert rep.iterations == 1


def test_infeasible_fixed_level_reported():
    # r2 consumes a produced material faster than r1 can make it, and the
    # producer is pinned to zero.
    inst = Instance.of(
        [Material(id="raw", cost=1.0), Material(id="mid", cost=1.0)],
        [Recipe(id="r1", inputs=(("raw", 1.0),), outputs=(("mid", 1.0),)),
         Recipe(id="r2", inputs=(("mid", 10.0),), outputs=())],
    )
    sc = Scenario(instance=inst,
                  fixed_recipe_levels={"r1": 0.0, "r2": 1.0})
    rep = solve_iterative(sc)
    assert rep.status == Status.INFEASIBLE
    assert rep.solution is None
    assert solve_global(sc).status == Status.INFEASIBLE


def test_check_violations_flags_partial_bulk():
    inst = Instance.of(
        [Material(id="a", cost=1.0, demand=30.0, moq=100.0)], [])
    sc = Scenario(instance=inst)
    base = solve_iterative(sc)
    assert base.status == Status.OPTIMAL
    # fabricate a violating point: bought above zero but below the minimum
    sol = base.solution
    bad = type(sol)(**{**sol.__dict__, "buy": {"a": 30.0}})
    v = check_violations(sc, bad)
    assert v.moq == ("a",)
    assert not check_violations(sc, bad, existing_moq={"a"})


def test_report_method_label():
    sc = Scenario(instance=demo_instance())
    assert solve_iterative(sc).method == "iterative"
    assert solve_global(sc).method == "global"
