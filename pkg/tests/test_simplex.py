"""Built-in revised simplex against hand-checked optima and scipy."""

import random

import numpy as np
import pytest
from scipy import optimize

from carveopt.lp import EQ, GE, LE, LinearProgram
from carveopt.solver.options import SolverOptions
from carveopt.solver.outcome import Status
from carveopt.solver.simplex import solve_lp


def _simple_lp():
    # min -x - 2y  s.t. x + y <= 4, x <= 3, y <= 2  -> optimum at (2, 2), -6
    lp = LinearProgram()
    lp.add_var("x", ub=3.0)
    lp.add_var("y", ub=2.0)
    lp.add_constraint({"x": 1.0, "y": 1.0}, LE, 4.0)
    lp.set_objective_coeff("x", -1.0)
    lp.set_objective_coeff("y", -2.0)
    return lp


def test_hand_checked_optimum():
    out = solve_lp(_simple_lp(), SolverOptions())
    assert out.status == Status.OPTIMAL
    assert out.objective == pytest.approx(-6.0, abs=1e-9)
    assert out.values["x"] == pytest.approx(2.0, abs=1e-9)
    assert out.values["y"] == pytest.approx(2.0, abs=1e-9)


def test_equality_and_ge_rows():
    # min x + y  s.t. x + y = 5, x >= 2 (row), y >= 0 -> objective 5
    lp = LinearProgram()
    lp.add_var("x")
    lp.add_var("y")
    lp.add_constraint({"x": 1.0, "y": 1.0}, EQ, 5.0)
    lp.add_constraint({"x": 1.0}, GE, 2.0)
    lp.set_objective_coeff("x", 1.0)
    lp.set_objective_coeff("y", 1.0)
    out = solve_lp(lp, SolverOptions())
    assert out.status == Status.OPTIMAL
    assert out.objective == pytest.approx(5.0, abs=1e-9)


def test_infeasible_detected():
    lp = LinearProgram()
    lp.add_var("x", ub=1.0)
    lp.add_constraint({"x": 1.0}, GE, 2.0)
    out = solve_lp(lp, SolverOptions())
    assert out.status == Status.INFEASIBLE


def test_unbounded_detected():
    lp = LinearProgram()
    lp.add_var("x")
    lp.set_objective_coeff("x", -1.0)
    out = solve_lp(lp, SolverOptions())
    assert out.status == Status.UNBOUNDED


def test_negative_lower_bounds_respected():
    # min x with x in [-7, 3]
    lp = LinearProgram()
    lp.add_var("x", lb=-7.0, ub=3.0)
    lp.set_objective_coeff("x", 1.0)
    out = solve_lp(lp, SolverOptions())
    assert out.status == Status.OPTIMAL
    assert out.objective == pytest.approx(-7.0, abs=1e-9)


def _random_lp(seed: int):
    """Random bounded-feasible LP; returns (lp, c, A_ub, b_ub, bounds)."""
    rng = random.Random(seed)
    n = rng.randint(2, 6)
    m = rng.randint(1, 5)
    c = [round(rng.uniform(-5, 5), 3) for _ in range(n)]
    ub = [round(rng.uniform(1, 20), 3) for _ in range(n)]
    rows = []
    rhs = []
    for _ in range(m):
        row = [round(rng.uniform(0, 3), 3) for _ in range(n)]
        rows.append(row)
        # rhs large enough that x = 0 is feasible
        rhs.append(round(rng.uniform(1, 40), 3))
    lp = LinearProgram()
    for j in range(n):
        lp.add_var(f"x{j}", ub=ub[j])
        lp.set_objective_coeff(f"x{j}", c[j])
    for i, row in enumerate(rows):
        lp.add_constraint({f"x{j}": v for j, v in enumerate(row) if v}, LE, rhs[i])
    return lp, c, rows, rhs, [(0.0, u) for u in ub]


@pytest.mark.parametrize("seed", range(30))
def test_agrees_with_scipy_linprog(seed):
    lp, c, rows, rhs, bounds = _random_lp(seed)
    out = solve_lp(lp, SolverOptions())
    ref = optimize.linprog(c, A_ub=np.array(rows), b_ub=np.array(rhs),
                           bounds=bounds, method="highs")
    assert ref.status == 0
    assert out.status == Status.OPTIMAL
    assert out.objective == pytest.approx(ref.fun, abs=1e-7, rel=1e-7)


def test_reported_point_is_feasible_and_matches_objective():
    lp, c, rows, rhs, bounds = _random_lp(99)
    out = solve_lp(lp, SolverOptions())
    assert out.status == Status.OPTIMAL
    x = np.array([out.values[f"x{j}"] for j in range(len(c))])
    assert np.all(np.array(rows) @ x <= np.array(rhs) + 1e-8)
    for xj, (lo, hi) in zip(x, bounds):
        assert lo - 1e-9 <= xj <= hi + 1e-9
    assert float(np.dot(c, x)) == pytest.approx(out.objective, abs=1e-9)
