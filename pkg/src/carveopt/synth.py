"""Synthetic instances: a small worked demo, seeded random instances for
oracle testing, and a company-scale instance for performance runs.

The real production datasets behind this tool are proprietary; these
generators produce instances of comparable shape (layered recipes grounded
in purchasable raw materials, sparse demands, batched stock with mixed
shelf lives).
"""

from __future__ import annotations

import random

from .model import (
    AlternativeGroup,
    Instance,
    Material,
    Recipe,
    StockBatch,
    merge_batches,
)

__all__ = ["demo_instance", "random_instance", "company_scale_instance"]


def demo_instance() -> Instance:
    """Six materials, three recipes, one two-member alternative group.

    Material 1 is cut two ways into intermediates; recipe r3 turns 1200 of
    material m3 plus 300 of an arbitrary mix of m4/m5 into 1400 of m6.
    Only m1 and m5 are purchasable (everything else is produced).
    """
    materials = [
        Material(id="m1", name="carcass", cost=1.0),
        Material(id="m2", name="trim", cost=2.0),
        Material(id="m3", name="primal", cost=3.0),
        Material(id="m4", name="filler A", cost=2.5),
        Material(id="m5", name="filler B", cost=4.0),
        Material(id="m6", name="product", cost=8.0),
    ]
    recipes = [
        Recipe(id="r1", inputs=(("m1", 1000.0),),
               outputs=(("m2", 50.0), ("m3", 900.0))),
        Recipe(id="r2", inputs=(("m1", 1000.0),),
               outputs=(("m3", 400.0), ("m4", 600.0))),
        Recipe(id="r3", inputs=(("m3", 1200.0),),
               outputs=(("m6", 1400.0),),
               alt_groups=(AlternativeGroup(members=("m4", "m5"),
                                            total_quantity=300.0),)),
    ]
    return Instance.of(materials, recipes)


def random_instance(
    seed: int,
    max_materials: int = 15,
    max_recipes: int = 10,
    max_alt_groups: int = 3,
    moq_choices: tuple[float, ...] = (0.0, 50.0, 100.0),
) -> Instance:
    """Seeded random layered instance for oracle testing.

    Raw materials are purchasable; later layers are produced from earlier
    ones, so demands are always coverable and the LP stays bounded below.
    """
    rng = random.Random(seed)
    n_mat = rng.randint(6, max_materials)
    n_raw = max(2, n_mat // 3)
    ids = [f"m{i}" for i in range(n_mat)]

    moq = rng.choice(moq_choices)
    materials: dict[str, Material] = {}
    for i, mid in enumerate(ids):
        batches = []
        if rng.random() < 0.4:
            for _ in range(rng.randint(1, 3)):
                batches.append(StockBatch(
                    quantity=round(rng.uniform(5, 80), 3),
                    remaining_shelf_life=round(rng.uniform(1, 400), 3),
                ))
        materials[mid] = Material(
            id=mid,
            cost=round(rng.uniform(0.5, 20), 3),
            demand=round(rng.uniform(10, 200), 3) if rng.random() < 0.5 else 0.0,
            moq=moq,
            turnover=round(rng.uniform(0, 500), 3),
            shelf_life=round(rng.uniform(1, 600), 3),
            batches=merge_batches(batches),
        )

    n_rec = rng.randint(2, max_recipes)
    recipes = []
    produced: set[str] = set()
    n_groups = rng.randint(0, max_alt_groups)
    for j in range(n_rec):
        # Inputs from the early part of the id range, outputs from the rest,
        # so production never cycles back into raw materials.
        split = rng.randint(n_raw, n_mat - 1)
        in_pool = ids[:split]
        out_pool = ids[split:]
        if not out_pool:
            continue
        inputs = tuple(
            (mid, round(rng.uniform(1, 50), 3))
            for mid in rng.sample(in_pool, min(len(in_pool), rng.randint(1, 3)))
        )
        outputs = tuple(
            (mid, round(rng.uniform(1, 50), 3))
            for mid in rng.sample(out_pool, min(len(out_pool), rng.randint(1, 2)))
        )
        alt_groups = ()
        if n_groups > 0 and len(in_pool) >= 2 and rng.random() < 0.5:
            members = tuple(rng.sample(in_pool, rng.randint(2, min(3, len(in_pool)))))
            members = tuple(m for m in members if m not in {mid for mid, _ in outputs})
            if len(members) >= 2:
                alt_groups = (AlternativeGroup(
                    members=members,
                    total_quantity=round(rng.uniform(10, 100), 3),
                ),)
                n_groups -= 1
        recipes.append(Recipe(id=f"r{j}", inputs=inputs, outputs=outputs,
                              alt_groups=alt_groups))
        produced.update(mid for mid, _ in outputs)

    # MOQ only makes sense on purchasable materials.
    for mid in list(materials):
        if mid in produced and materials[mid].moq > 0:
            mat = materials[mid]
            materials[mid] = Material(
                id=mat.id, cost=mat.cost, demand=mat.demand, moq=0.0,
                turnover=mat.turnover, shelf_life=mat.shelf_life,
                batches=mat.batches,
            )
    return Instance.of(materials.values(), recipes)


def company_scale_instance(
    n_materials: int = 1130,
    n_recipes: int = 1131,
    n_demands: int = 300,
    seed: int = 7,
) -> Instance:
    """Layered instance matching the dimensions of the extended production
    dataset: ~1130 materials, ~1131 recipes, sparse demands, batched stock."""
    rng = random.Random(seed)
    ids = [f"m{i:04d}" for i in range(n_materials)]
    n_raw = n_materials // 4

    recipes: list[Recipe] = []
    produced: set[str] = set()
    group_budget = n_recipes // 20
    for j in range(n_recipes):
        lo = rng.randint(0, n_materials - n_raw // 2 - 4)
        hi = min(n_materials - 1, lo + rng.randint(4, 40))
        in_pool = ids[max(0, lo - 30): lo + 1] or ids[:1]
        out_pool = ids[lo + 1: hi + 1]
        if not out_pool:
            out_pool = ids[-4:]
        inputs = tuple(
            (mid, round(rng.uniform(1, 100), 2))
            for mid in rng.sample(in_pool, min(len(in_pool), rng.randint(1, 3)))
        )
        outputs = tuple(
            (mid, round(rng.uniform(1, 100), 2))
            for mid in rng.sample(out_pool, min(len(out_pool), rng.randint(1, 2)))
        )
        alt_groups = ()
        if group_budget > 0 and len(in_pool) >= 3 and rng.random() < 0.15:
            members = tuple(rng.sample(in_pool, rng.randint(2, 3)))
            alt_groups = (AlternativeGroup(
                members=members, total_quantity=round(rng.uniform(10, 200), 2),
            ),)
            group_budget -= 1
        recipes.append(Recipe(id=f"r{j:04d}", inputs=inputs, outputs=outputs,
                              alt_groups=alt_groups))
        produced.update(mid for mid, _ in outputs)

    demand_ids = set(rng.sample(ids[n_raw:], n_demands))
    materials: list[Material] = []
    for mid in ids:
        batches = []
        if rng.random() < 0.05:
            for _ in range(rng.randint(1, 4)):
                batches.append(StockBatch(
                    quantity=round(rng.uniform(10, 5000), 2),
                    remaining_shelf_life=round(rng.uniform(1, 700), 2),
                ))
        materials.append(Material(
            id=mid,
            cost=round(rng.uniform(0.1, 500), 3),
            demand=round(rng.uniform(0.7, 2000), 3) if mid in demand_ids else 0.0,
            moq=0.0,
            turnover=round(rng.uniform(0, 1000), 2),
            shelf_life=round(rng.uniform(1, 900), 2),
            batches=merge_batches(batches),
        ))
    return Instance.of(materials, recipes)
