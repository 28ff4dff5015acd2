"""Domain types for the purchase and production planning problem.

An :class:`Instance` is the immutable problem description: materials with
cost/demand/stock data, and recipes transforming input materials into output
materials, optionally with groups of interchangeable (alternative) materials.
A :class:`Scenario` wraps an instance with objective weights and solve
options.  Both are frozen after validation and safe to share across
concurrent solves.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Iterable, Mapping, Optional, Sequence

from .solver.options import SolverOptions

__all__ = [
    "StockBatch",
    "Material",
    "AlternativeGroup",
    "Recipe",
    "Instance",
    "WeightVector",
    "Scenario",
    "Solution",
    "Violation",
    "validate_instance",
    "purchasable",
    "merge_batches",
]


@dataclass(frozen=True)
class StockBatch:
    """A quantity of stocked material with a common remaining shelf life."""

    quantity: float
    remaining_shelf_life: float


@dataclass(frozen=True)
class Material:
    id: str
    name: str = ""
    cost: float = 0.0
    demand: float = 0.0
    moq: float = 0.0
    turnover: float = 0.0
    shelf_life: float = 0.0
    batches: tuple[StockBatch, ...] = ()

    @property
    def stock(self) -> float:
        """Total quantity on hand (sum over batches)."""
        return sum(b.quantity for b in self.batches)


def merge_batches(batches: Iterable[StockBatch]) -> tuple[StockBatch, ...]:
    """Merge batches with equal remaining shelf life (quantities are summed).

    Ties in shelf life would create zero-width segments in the expiration
    penalty, so loaders call this before constructing a Material.
    """
    merged: dict[float, float] = {}
    for b in batches:
        merged[b.remaining_shelf_life] = merged.get(b.remaining_shelf_life, 0.0) + b.quantity
    return tuple(
        StockBatch(quantity=q, remaining_shelf_life=e)
        for e, q in sorted(merged.items())
    )


@dataclass(frozen=True)
class AlternativeGroup:
    """A set of mutually interchangeable input materials within a recipe.

    The individual contributions of the members must sum to
    ``total_quantity`` per unit of recipe activity.
    """

    members: tuple[str, ...]
    total_quantity: float


@dataclass(frozen=True)
class Recipe:
    id: str
    inputs: tuple[tuple[str, float], ...] = ()
    outputs: tuple[tuple[str, float], ...] = ()
    alt_groups: tuple[AlternativeGroup, ...] = ()

    @property
    def throughput(self) -> float:
        """Total quantity moved per unit activity; scales tolerance checks."""
        return (
            sum(q for _, q in self.inputs)
            + sum(q for _, q in self.outputs)
            + sum(g.total_quantity for g in self.alt_groups)
        )


@dataclass(frozen=True)
class Instance:
    materials: dict[str, Material]
    recipes: dict[str, Recipe]

    @staticmethod
    def of(materials: Iterable[Material], recipes: Iterable[Recipe]) -> "Instance":
        return Instance(
            materials={m.id: m for m in materials},
            recipes={r.id: r for r in recipes},
        )

    def produced_ids(self) -> set[str]:
        return {mid for r in self.recipes.values() for mid, _ in r.outputs}

    def purchasable(self, material_id: str) -> bool:
        return purchasable(self, material_id)

    def stock(self, material_id: str) -> float:
        return self.materials[material_id].stock


def purchasable(instance: Instance, material_id: str) -> bool:
    """A material can be bought only if no recipe produces it."""
    if material_id not in instance.materials:
        raise KeyError(f"unknown material id: {material_id!r}")
    return material_id not in instance.produced_ids()


@dataclass(frozen=True)
class WeightVector:
    w0: float = 1.0
    w1: float = 1.0
    w2: float = 1.0
    w3: float = 1.0
    w4: float = 1.0

    @staticmethod
    def of(values: Sequence[float]) -> "WeightVector":
        if len(values) != 5:
            raise ValueError("expected 5 weights")
        return WeightVector(*(float(v) for v in values))

    def as_tuple(self) -> tuple[float, float, float, float, float]:
        return (self.w0, self.w1, self.w2, self.w3, self.w4)


@dataclass(frozen=True)
class Scenario:
    """An instance plus everything that parameterizes one solve."""

    instance: Instance
    weights: WeightVector = WeightVector()
    fixed_recipe_levels: Mapping[str, float] = field(default_factory=dict)
    moq_override: Optional[float] = None
    mpa_ratio: float = 0.05
    exponent_scale: float = 5000.0
    solver_options: SolverOptions = field(default_factory=SolverOptions)

    def __post_init__(self):
        for rid in self.fixed_recipe_levels:
            if rid not in self.instance.recipes:
                raise ValueError(f"fixed level for unknown recipe {rid!r}")
        if not (0.0 < self.mpa_ratio < 1.0):
            raise ValueError("mpa_ratio must lie in (0, 1)")
        if self.exponent_scale <= 0:
            raise ValueError("exponent_scale must be positive")

    def effective_moq(self, material: Material) -> float:
        """Minimum order quantity in force for a purchasable material."""
        if self.moq_override is not None:
            return self.moq_override
        return material.moq

    def with_options(self, options: SolverOptions) -> "Scenario":
        return replace(self, solver_options=options)


@dataclass(frozen=True)
class Solution:
    """Variable values of a solve, keyed by material / recipe ids."""

    z: dict[str, float]
    z_hat: dict[tuple[str, int, str], float]
    buy: dict[str, float]
    stock_new: dict[str, float]
    stock_old: dict[str, float]
    stock_total: dict[str, float]
    production: dict[str, float]
    usage: dict[str, float]
    pwl_value: dict[str, float]
    objective_components: tuple[float, float, float, float, float]
    objective_value: float


@dataclass(frozen=True)
class Violation:
    subject: str
    reason: str

    def __str__(self) -> str:
        return f"{self.subject}: {self.reason}"


def _check_scalar(out: list[Violation], subject: str, name: str, value: float) -> None:
    if not math.isfinite(value):
        out.append(Violation(subject, f"{name} must be finite, got {value!r}"))
    elif value < 0:
        out.append(Violation(subject, f"{name} must be non-negative, got {value!r}"))


def validate_instance(instance: Instance) -> list[Violation]:
    """Return every violated invariant; an empty list means the instance is well-formed."""
    out: list[Violation] = []
    produced = instance.produced_ids()

    for mid, mat in instance.materials.items():
        subject = f"material {mid}"
        if mat.id != mid:
            out.append(Violation(subject, f"keyed as {mid!r} but id is {mat.id!r}"))
        for name, value in (
            ("cost", mat.cost),
            ("demand", mat.demand),
            ("moq", mat.moq),
            ("turnover", mat.turnover),
            ("shelf_life", mat.shelf_life),
        ):
            _check_scalar(out, subject, name, value)
        seen_lives: set[float] = set()
        for k, batch in enumerate(mat.batches):
            if not (batch.quantity > 0) or not math.isfinite(batch.quantity):
                out.append(Violation(subject, f"batch {k} quantity must be strictly positive"))
            if not math.isfinite(batch.remaining_shelf_life) or batch.remaining_shelf_life < 0:
                out.append(Violation(subject, f"batch {k} remaining shelf life must be finite and non-negative"))
            if batch.remaining_shelf_life in seen_lives:
                out.append(
                    Violation(subject, f"duplicate batch shelf life {batch.remaining_shelf_life}; merge batches at load")
                )
            seen_lives.add(batch.remaining_shelf_life)
        if mat.moq > 0 and mid in produced:
            out.append(
                Violation(
                    subject,
                    "has a minimum order quantity but is produced by a recipe; "
                    "a material that is both buyable and producible must be split into two ids",
                )
            )

    for rid, rec in instance.recipes.items():
        subject = f"recipe {rid}"
        if rec.id != rid:
            out.append(Violation(subject, f"keyed as {rid!r} but id is {rec.id!r}"))
        if not rec.inputs and not rec.outputs and not rec.alt_groups:
            out.append(Violation(subject, "has no inputs, outputs, or alternative groups"))
        for side, pairs in (("inputs", rec.inputs), ("outputs", rec.outputs)):
            seen: set[str] = set()
            for mid, qty in pairs:
                if mid in seen:
                    out.append(Violation(subject, f"material {mid} appears twice in {side}"))
                seen.add(mid)
                if mid not in instance.materials:
                    out.append(Violation(subject, f"{side} reference unknown material {mid!r}"))
                if not (qty > 0) or not math.isfinite(qty):
                    out.append(Violation(subject, f"{side} quantity for {mid} must be strictly positive"))
        for g, group in enumerate(rec.alt_groups):
            gsubj = f"{subject} group {g}"
            if len(group.members) < 2:
                out.append(Violation(gsubj, "needs at least two alternative materials"))
            if len(set(group.members)) != len(group.members):
                out.append(Violation(gsubj, "alternative materials must be distinct"))
            for mid in group.members:
                if mid not in instance.materials:
                    out.append(Violation(gsubj, f"references unknown material {mid!r}"))
            if not (group.total_quantity > 0) or not math.isfinite(group.total_quantity):
                out.append(Violation(gsubj, "total quantity must be strictly positive"))

    return out
