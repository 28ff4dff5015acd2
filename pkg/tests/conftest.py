"""Shared fixtures and independent oracles for the test suite.

The brute-force MILP oracle enumerates every on/off assignment of the
minimum-order and minimum-share disjunctions and solves the resulting LP.
It encodes the disjunctions *exactly* (bound changes and a share row), with
no big-M constants, so it is independent of the encoding used by the
solver under test.

For speed the oracle keeps a single HiGHS model alive and flips bounds
between assignments (warm-started re-solves are ~100x faster than building
a fresh LP per assignment).  It uses ``highspy`` when installed and
otherwise falls back to the copy scipy ships internally; if neither is
importable it degrades to one ``scipy.optimize.linprog`` call per
assignment.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Optional

import numpy as np
import pytest
from scipy import optimize, sparse

from carveopt.builder import b_name, build_base_lp, z_name, zhat_name
from carveopt.lp import EQ, GE, LE
from carveopt.milp import moq_eligible_materials, mpa_tuples
from carveopt.model import Scenario, WeightVector
from carveopt.solver.simplex import compile_lp
from carveopt.synth import demo_instance, random_instance

_INF = 1e30


def _highs_class():
    try:
        import highspy

        return highspy.Highs
    except ImportError:
        try:
            from scipy.optimize._highspy import _core

            return _core._Highs
        except ImportError:  # pragma: no cover - environment dependent
            return None


@dataclass
class BruteResult:
    status: str  # "optimal" | "infeasible"
    objective: Optional[float]
    values: Optional[dict[str, float]]


def count_binaries(scenario: Scenario) -> int:
    return len(moq_eligible_materials(scenario)) + len(mpa_tuples(scenario))


def brute_force_optimum(scenario: Scenario) -> BruteResult:
    """Exact optimum by enumeration over all disjunction assignments."""
    lp = build_base_lp(scenario)
    alp = compile_lp(lp)
    inst = scenario.instance
    col = {name: j for j, name in enumerate(alp.names)}

    # (column of b_i, its minimum order quantity, its natural bounds)
    moq_cols = [(col[b_name(mid)], scenario.effective_moq(inst.materials[mid]))
                for mid in moq_eligible_materials(scenario)]
    # (column of zhat, column of z) per minimum-share disjunction
    mpa_cols = [(col[zhat_name(rid, g, mid)], col[z_name(rid)])
                for rid, g, mid in mpa_tuples(scenario)]

    highs_cls = _highs_class()
    if highs_cls is not None:
        return _brute_highs(scenario, alp, moq_cols, mpa_cols, highs_cls)
    return _brute_linprog(scenario, alp, moq_cols, mpa_cols)


def _brute_highs(scenario, alp, moq_cols, mpa_cols, highs_cls) -> BruteResult:
    h = highs_cls()
    h.setOptionValue("output_flag", False)
    lb = np.where(np.isfinite(alp.lb), alp.lb, -_INF)
    ub = np.where(np.isfinite(alp.ub), alp.ub, _INF)
    h.addCols(alp.n, alp.c, lb, ub, 0,
              np.zeros(1, dtype=np.int32), np.array([], dtype=np.int32),
              np.array([], dtype=float))
    A = alp.A.tocsr()
    rlb = np.array([(-_INF if s == LE else alp.rhs[i])
                    for i, s in enumerate(alp.senses)])
    rub = np.array([(_INF if s == GE else alp.rhs[i])
                    for i, s in enumerate(alp.senses)])
    h.addRows(alp.m, rlb, rub, A.nnz, A.indptr.astype(np.int32),
              A.indices.astype(np.int32), A.data)
    # One share row per minimum-share disjunction: ratio * z - zhat <= 0,
    # kept inactive (upper bound +inf) while the member is switched off.
    ratio = scenario.mpa_ratio
    for k, (jhat, jz) in enumerate(mpa_cols):
        h.addRow(-_INF, _INF, 2, np.array([jhat, jz], dtype=np.int32),
                 np.array([-1.0, ratio]))
    share_row0 = alp.m

    from scipy.optimize._highspy._core import HighsModelStatus  # noqa: PLC0415

    optimal = HighsModelStatus.kOptimal
    best: Optional[float] = None
    best_x: Optional[list[float]] = None
    n_moq = len(moq_cols)
    for bits in itertools.product((0, 1), repeat=n_moq + len(mpa_cols)):
        ok = True
        for (j, bmin), bit in zip(moq_cols, bits[:n_moq]):
            if bit:
                if bmin > ub[j]:
                    ok = False
                    break
                h.changeColBounds(j, float(max(lb[j], bmin)), float(ub[j]))
            else:
                h.changeColBounds(j, float(lb[j]), float(min(ub[j], 0.0)))
        if not ok:
            continue
        for k, ((jhat, _), bit) in enumerate(zip(mpa_cols, bits[n_moq:])):
            if bit:
                h.changeColBounds(jhat, float(lb[jhat]), float(ub[jhat]))
                h.changeRowBounds(share_row0 + k, -_INF, 0.0)
            else:
                h.changeColBounds(jhat, float(lb[jhat]),
                                  float(min(ub[jhat], 0.0)))
                h.changeRowBounds(share_row0 + k, -_INF, _INF)
        h.run()
        if h.getModelStatus() == optimal:
            obj = h.getObjectiveValue()
            if best is None or obj < best - 1e-12:
                best = float(obj)
                best_x = list(h.getSolution().col_value)
    if best is None:
        return BruteResult("infeasible", None, None)
    return BruteResult("optimal", best, dict(zip(alp.names, best_x)))


def _brute_linprog(scenario, alp, moq_cols, mpa_cols) -> BruteResult:
    le = [i for i, s in enumerate(alp.senses) if s == LE]
    ge = [i for i, s in enumerate(alp.senses) if s == GE]
    eq = [i for i, s in enumerate(alp.senses) if s == EQ]
    A = alp.A.tocsr()
    A_ub = sparse.vstack([A[le], -A[ge]], format="csr") if le or ge else None
    b_ub = np.concatenate([alp.rhs[le], -alp.rhs[ge]]) if le or ge else None
    A_eq = A[eq] if eq else None
    b_eq = alp.rhs[eq] if eq else None

    ratio = scenario.mpa_ratio
    share_rows = []
    for jhat, jz in mpa_cols:
        row = np.zeros(alp.n)
        row[jhat] = -1.0
        row[jz] = ratio
        share_rows.append(row)

    best: Optional[float] = None
    best_x = None
    n_moq = len(moq_cols)
    for bits in itertools.product((0, 1), repeat=n_moq + len(mpa_cols)):
        lb = alp.lb.copy()
        ub = alp.ub.copy()
        extra = []
        for (j, bmin), bit in zip(moq_cols, bits[:n_moq]):
            if bit:
                lb[j] = max(lb[j], bmin)
            else:
                ub[j] = min(ub[j], 0.0)
        for ((jhat, _), row), bit in zip(zip(mpa_cols, share_rows),
                                         bits[n_moq:]):
            if bit:
                extra.append(row)
            else:
                ub[jhat] = min(ub[jhat], 0.0)
        if np.any(lb > ub):
            continue
        if extra:
            block = sparse.csr_matrix(np.array(extra))
            Au = sparse.vstack([A_ub, block]) if A_ub is not None else block
            bu = (np.concatenate([b_ub, np.zeros(len(extra))])
                  if b_ub is not None else np.zeros(len(extra)))
        else:
            Au, bu = A_ub, b_ub
        res = optimize.linprog(alp.c, A_ub=Au, b_ub=bu, A_eq=A_eq, b_eq=b_eq,
                               bounds=np.column_stack([lb, ub]),
                               method="highs")
        if res.status == 0 and (best is None or res.fun < best - 1e-12):
            best = float(res.fun)
            best_x = res.x
    if best is None:
        return BruteResult("infeasible", None, None)
    return BruteResult("optimal", best, dict(zip(alp.names, best_x.tolist())))


@pytest.fixture()
def demo_scenario() -> Scenario:
    return Scenario(instance=demo_instance())


@pytest.fixture()
def small_random_scenario() -> Scenario:
    return Scenario(instance=random_instance(3),
                    weights=WeightVector(1, 1, 1, 1, 1))


# --- acceptance criterion reporting ---------------------------------------

ACCEPTANCE_LINES: list[str] = []


def record_acceptance(name: str, ok: bool, detail: str = "") -> None:
    """One printed pass/fail line per acceptance criterion."""
    line = f"[ACCEPTANCE] {name}: {'PASS' if ok else 'FAIL'}"
    if detail:
        line += f" ({detail})"
    ACCEPTANCE_LINES.append(line)
    print(line)


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
