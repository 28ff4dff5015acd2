"""Disjunctive MOQ / MPA constraint groups with big-M indicators.

Each group adds one binary and two rows.  A tight big-M is probed with an
auxiliary LP on small instances before falling back to the 1e7 default;
huge constants are exactly what makes the all-at-once model numerically
fragile, so any derivable bound is worth the extra solve.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import optimize, sparse

from .builder import b_name, build_base_lp, z_name, zhat_name
from .lp import EQ, GE, LE, LinearProgram
from .model import Scenario
from .solver.simplex import compile_lp

__all__ = [
    "DEFAULT_BIG_M",
    "BigMProber",
    "ConstraintGroup",
    "big_m_for_moq",
    "big_m_for_mpa",
    "add_moq_group",
    "add_mpa_group",
    "build_global_model",
    "moq_eligible_materials",
    "mpa_tuples",
    "moq_binary_name",
    "mpa_binary_name",
]

DEFAULT_BIG_M = 1e7
# Probing an exact variable bound costs one LP per group; only worth it on
# desk-scale instances.
_PROBE_SIZE_LIMIT = 120


@dataclass(frozen=True)
class ConstraintGroup:
    kind: str  # "moq" or "mpa"
    key: tuple
    binary: str
    rows: tuple[int, int]


def moq_binary_name(material_id: str) -> str:
    return f"vmoq[{material_id}]"


def mpa_binary_name(recipe_id: str, group: int, material_id: str) -> str:
    return f"vmpa[{recipe_id}|{group}|{material_id}]"


def moq_eligible_materials(scenario: Scenario) -> list[str]:
    """Purchasable materials with a positive minimum order quantity."""
    inst = scenario.instance
    return [
        mid
        for mid, mat in inst.materials.items()
        if inst.purchasable(mid) and scenario.effective_moq(mat) > 0
    ]


def mpa_tuples(scenario: Scenario) -> list[tuple[str, int, str]]:
    out = []
    for rid, rec in scenario.instance.recipes.items():
        for g, group in enumerate(rec.alt_groups):
            for mid in group.members:
                out.append((rid, g, mid))
    return out


_PROBE_INF = 1e30


def _highs_class():
    """A reusable HiGHS model class, if one is importable.

    Prefers an installed ``highspy``; otherwise uses the copy scipy ships
    for its own solvers.  Returns None when neither is available, in which
    case probing falls back to one ``linprog`` call per bound.
    """
    try:
        import highspy  # noqa: PLC0415

        return highspy.Highs
    except ImportError:
        try:
            from scipy.optimize._highspy import _core  # noqa: PLC0415

            return _core._Highs
        except ImportError:  # pragma: no cover - environment dependent
            return None


class BigMProber:
    """Probed variable upper bounds valid at any optimum of one scenario.

    Compiles the base relaxation once and answers each probe with a warm
    re-solve under a flipped objective, caching per variable; creating a
    fresh model per group was the dominant cost of model construction.

    The probe region is the base relaxation intersected with the objective
    cutoff ``c.x <= F``, where F is the objective of the "everything on"
    restriction (every purchase at or above its MOQ, every group member at
    or above its minimum share) — a feasible point of the full disjunctive
    model, so every optimum satisfies the cutoff.  Without the cutoff most
    purchase quantities are unbounded (surplus is free) and every big-M
    falls back to the 1e7 default, whose product with the solver's
    integrality tolerance and a large unit cost is enough slack to corrupt
    tie-heavy instances.
    """

    def __init__(self, scenario: Scenario):
        self._scenario = scenario
        self._compiled = None
        self._cache: dict[str, float] = {}

    def _restriction(self, alp, col):
        """Bound tweaks and extra rows forcing every disjunction "on"."""
        sc = self._scenario
        forced_lb: list[tuple[int, float]] = []
        for mid in moq_eligible_materials(sc):
            bmin = sc.effective_moq(sc.instance.materials[mid])
            forced_lb.append((col[b_name(mid)], bmin))
        share_rows: list[tuple[int, int]] = []  # (zhat col, z col)
        for rid, g, mid in mpa_tuples(sc):
            share_rows.append((col[zhat_name(rid, g, mid)], col[z_name(rid)]))
        return forced_lb, share_rows

    def _compile(self):
        sc = self._scenario
        alp = compile_lp(build_base_lp(sc))
        col = {name: j for j, name in enumerate(alp.names)}
        forced_lb, share_rows = self._restriction(alp, col)
        cls = _highs_class()
        if cls is not None:
            h = cls()
            h.setOptionValue("output_flag", False)
            lb = np.where(np.isfinite(alp.lb), alp.lb, -_PROBE_INF)
            ub = np.where(np.isfinite(alp.ub), alp.ub, _PROBE_INF)
            h.addCols(alp.n, alp.c, lb, ub, 0,
                      np.zeros(1, dtype=np.int32), np.array([], dtype=np.int32),
                      np.array([], dtype=float))
            A = alp.A.tocsr()
            rlb = np.array([(-_PROBE_INF if s == LE else alp.rhs[i])
                            for i, s in enumerate(alp.senses)])
            rub = np.array([(_PROBE_INF if s == GE else alp.rhs[i])
                            for i, s in enumerate(alp.senses)])
            h.addRows(alp.m, rlb, rub, A.nnz, A.indptr.astype(np.int32),
                      A.indices.astype(np.int32), A.data)
            # Solve the everything-on restriction for the cutoff value.
            for j, bmin in forced_lb:
                h.changeColBounds(j, float(max(lb[j], bmin)), float(ub[j]))
            for jhat, jz in share_rows:
                h.addRow(0.0, _PROBE_INF, 2,
                         np.array([jhat, jz], dtype=np.int32),
                         np.array([1.0, -sc.mpa_ratio]))
            h.run()
            cutoff = (float(h.getObjectiveValue())
                      if str(h.getModelStatus()).endswith("kOptimal") else None)
            # Revert to the relaxation, keep the cutoff, zero the objective.
            for j, _ in forced_lb:
                h.changeColBounds(j, float(lb[j]), float(ub[j]))
            for k in range(len(share_rows)):
                h.changeRowBounds(alp.m + k, -_PROBE_INF, _PROBE_INF)
            if cutoff is not None:
                nz = np.flatnonzero(alp.c)
                h.addRow(-_PROBE_INF,
                         cutoff * (1 + 1e-9) + 1e-6,
                         len(nz), nz.astype(np.int32), alp.c[nz])
            for j in range(alp.n):
                if alp.c[j]:
                    h.changeColCost(j, 0.0)
            return ("highs", h, col, alp)
        le = [i for i, s in enumerate(alp.senses) if s == LE]
        ge = [i for i, s in enumerate(alp.senses) if s == GE]
        eq = [i for i, s in enumerate(alp.senses) if s == EQ]
        A = alp.A.tocsr()
        a_ub = sparse.vstack([A[le], -A[ge]], format="csr") if le or ge else None
        b_ub = np.concatenate([alp.rhs[le], -alp.rhs[ge]]) if le or ge else None
        a_eq = A[eq] if eq else None
        b_eq = alp.rhs[eq] if eq else None
        bounds = np.column_stack([alp.lb, alp.ub])
        # Everything-on restriction for the cutoff value.
        rbounds = bounds.copy()
        for j, bmin in forced_lb:
            rbounds[j, 0] = max(rbounds[j, 0], bmin)
        extra = []
        for jhat, jz in share_rows:
            row = np.zeros(alp.n)
            row[jhat] = -1.0
            row[jz] = sc.mpa_ratio
            extra.append(row)
        a_r = a_ub
        b_r = b_ub
        if extra:
            block = sparse.csr_matrix(np.array(extra))
            a_r = sparse.vstack([a_ub, block]) if a_ub is not None else block
            b_r = (np.concatenate([b_ub, np.zeros(len(extra))])
                   if b_ub is not None else np.zeros(len(extra)))
        res = optimize.linprog(alp.c, A_ub=a_r, b_ub=b_r, A_eq=a_eq, b_eq=b_eq,
                               bounds=rbounds, method="highs")
        if res.status == 0:
            row = sparse.csr_matrix(alp.c)
            a_ub = sparse.vstack([a_ub, row]) if a_ub is not None else row
            rhs = float(res.fun) * (1 + 1e-9) + 1e-6
            b_ub = (np.concatenate([b_ub, [rhs]])
                    if b_ub is not None else np.array([rhs]))
        return ("linprog", (alp.n, a_ub, b_ub, a_eq, b_eq, bounds), col, alp)

    def _probe(self, j: int) -> float:
        kind, payload, _, _ = self._compiled
        if kind == "highs":
            h = payload
            h.changeColCost(j, -1.0)
            h.run()
            # Read status and objective before resetting the cost: a model
            # change clears the cached solve results.
            status = str(h.getModelStatus())
            objective = float(h.getObjectiveValue())
            h.changeColCost(j, 0.0)
            if status.endswith("kOptimal"):
                return -objective if -objective < _PROBE_INF / 2 else math.inf
            return math.inf
        n, a_ub, b_ub, a_eq, b_eq, bounds = payload
        c = np.zeros(n)
        c[j] = -1.0
        res = optimize.linprog(c, A_ub=a_ub, b_ub=b_ub, A_eq=a_eq, b_eq=b_eq,
                               bounds=bounds, method="highs")
        return -float(res.fun) if res.status == 0 else math.inf

    def upper_bound(self, var: str) -> float:
        """Maximum of one variable over the relaxation; inf if unbounded."""
        if var in self._cache:
            return self._cache[var]
        if self._compiled is None:
            self._compiled = self._compile()
        value = self._probe(self._compiled[2][var])
        self._cache[var] = value
        return value


def _small_enough_to_probe(scenario: Scenario) -> bool:
    inst = scenario.instance
    return len(inst.materials) + len(inst.recipes) <= _PROBE_SIZE_LIMIT


def big_m_for_moq(scenario: Scenario, material_id: str,
                  prober: BigMProber | None = None) -> float:
    """Big-M for the buy disjunction of one material: never below its MOQ."""
    mat = scenario.instance.materials[material_id]
    bmin = scenario.effective_moq(mat)
    m = DEFAULT_BIG_M
    if _small_enough_to_probe(scenario):
        prober = prober or BigMProber(scenario)
        probed = prober.upper_bound(b_name(material_id))
        if math.isfinite(probed):
            # Headroom keeps the rounded-off bound from cutting the optimum.
            m = min(m, probed * (1 + 1e-9) + 1.0)
    return max(m, bmin)


def big_m_for_mpa(scenario: Scenario, recipe_id: str,
                  prober: BigMProber | None = None) -> float:
    """Big-M for a group-split disjunction: a valid bound on the recipe level."""
    m = DEFAULT_BIG_M
    if _small_enough_to_probe(scenario):
        prober = prober or BigMProber(scenario)
        probed = prober.upper_bound(z_name(recipe_id))
        if math.isfinite(probed):
            m = min(m, probed * (1 + 1e-9) + 1.0)
    return m


def add_moq_group(lp: LinearProgram, scenario: Scenario, material_id: str,
                  big_m: float | None = None) -> ConstraintGroup:
    """b is either 0 or at least the MOQ: two rows switched by one binary."""
    mat = scenario.instance.materials[material_id]
    if not scenario.instance.purchasable(material_id):
        raise ValueError(f"material {material_id!r} is not purchasable")
    binary = moq_binary_name(material_id)
    if lp.has_var(binary):
        raise ValueError(f"MOQ group for {material_id!r} already added")
    bmin = scenario.effective_moq(mat)
    m = big_m if big_m is not None else big_m_for_moq(scenario, material_id)
    lp.add_var(binary, lb=0.0, ub=1.0, binary=True)
    row_on = lp.add_constraint({b_name(material_id): 1.0, binary: -m}, LE, 0.0,
                               name=f"moq_on[{material_id}]")
    row_min = lp.add_constraint({b_name(material_id): 1.0, binary: -m}, GE, bmin - m,
                                name=f"moq_min[{material_id}]")
    return ConstraintGroup("moq", (material_id,), binary, (row_on, row_min))


def add_mpa_group(lp: LinearProgram, scenario: Scenario, recipe_id: str,
                  group: int, material_id: str,
                  big_m: float | None = None) -> ConstraintGroup:
    """A group member carries at least the minimum share of z, or nothing."""
    rec = scenario.instance.recipes[recipe_id]
    if group >= len(rec.alt_groups) or material_id not in rec.alt_groups[group].members:
        raise ValueError(
            f"material {material_id!r} is not in group {group} of recipe {recipe_id!r}"
        )
    binary = mpa_binary_name(recipe_id, group, material_id)
    if lp.has_var(binary):
        raise ValueError(
            f"MPA group for ({recipe_id!r}, {group}, {material_id!r}) already added"
        )
    m = big_m if big_m is not None else big_m_for_mpa(scenario, recipe_id)
    zh = zhat_name(recipe_id, group, material_id)
    lp.add_var(binary, lb=0.0, ub=1.0, binary=True)
    row_on = lp.add_constraint({zh: 1.0, binary: -m}, LE, 0.0,
                               name=f"mpa_on[{recipe_id}|{group}|{material_id}]")
    row_min = lp.add_constraint(
        {zh: 1.0, z_name(recipe_id): -scenario.mpa_ratio, binary: -m}, GE, -m,
        name=f"mpa_min[{recipe_id}|{group}|{material_id}]",
    )
    return ConstraintGroup("mpa", (recipe_id, group, material_id), binary, (row_on, row_min))


def build_global_model(scenario: Scenario) -> LinearProgram:
    """The complete model: base rows plus every MOQ and MPA group."""
    lp = build_base_lp(scenario)
    prober = BigMProber(scenario)
    moq_ms: dict[str, float] = {}
    for mid in moq_eligible_materials(scenario):
        moq_ms[mid] = big_m_for_moq(scenario, mid, prober)
    mpa_ms: dict[str, float] = {}
    for rid, g, mid in mpa_tuples(scenario):
        if rid not in mpa_ms:
            mpa_ms[rid] = big_m_for_mpa(scenario, rid, prober)
    for mid, m in moq_ms.items():
        add_moq_group(lp, scenario, mid, big_m=m)
    for rid, g, mid in mpa_tuples(scenario):
        add_mpa_group(lp, scenario, rid, g, mid, big_m=mpa_ms[rid])
    return lp
