"""Independent-set gadget instances: executable correctness oracles.

Both constructions map a graph and a target size k to a planning instance
whose optimal cost hits a computable target exactly when the graph has an
independent set of size k.  One uses the minimum-order-quantity rule, the
other the minimum-share-in-group rule; together they exercise the whole
solve pipeline end to end.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .model import (
    AlternativeGroup,
    Instance,
    Material,
    Recipe,
    Scenario,
    StockBatch,
    WeightVector,
)

__all__ = [
    "Graph",
    "parse_graph",
    "all_graphs",
    "reduce_is_moq",
    "reduce_is_mpa",
    "brute_force_independent_set",
]

_UNIT = 100.0  # per-vertex flow quantum; also the uniform MOQ
_SHELF = 1.0  # stock batches need some shelf life; the value is inert here


@dataclass(frozen=True)
class Graph:
    n: int
    edges: tuple[tuple[int, int], ...]  # 1-based, i < j

    def __post_init__(self):
        seen = set()
        for u, v in self.edges:
            if u == v:
                raise ValueError(f"self-loop at vertex {u}")
            if not (1 <= u <= self.n and 1 <= v <= self.n):
                raise ValueError(f"edge ({u},{v}) out of range")
            if u > v:
                raise ValueError(f"edge ({u},{v}) must be ordered u < v")
            if (u, v) in seen:
                raise ValueError(f"duplicate edge ({u},{v})")
            seen.add((u, v))

    def has_edge(self, u: int, v: int) -> bool:
        if u > v:
            u, v = v, u
        return (u, v) in set(self.edges)


def parse_graph(text: str) -> Graph:
    """Edge-list format: first line "n m", then m lines "u v" (1-based)."""
    lines = [ln for ln in text.splitlines() if ln.strip() and not ln.startswith("#")]
    if not lines:
        raise ValueError("empty graph file")
    header = lines[0].split()
    if len(header) != 2:
        raise ValueError('first line must be "n m"')
    n, m = int(header[0]), int(header[1])
    if len(lines) - 1 != m:
        raise ValueError(f"expected {m} edge lines, found {len(lines) - 1}")
    edges = []
    for ln in lines[1:]:
        u, v = (int(t) for t in ln.split())
        edges.append((min(u, v), max(u, v)))
    return Graph(n=n, edges=tuple(sorted(set(edges))))


def all_graphs(n: int):
    """Every labeled graph on n vertices (2^C(n,2) of them)."""
    pairs = list(itertools.combinations(range(1, n + 1), 2))
    for mask in range(1 << len(pairs)):
        yield Graph(n=n, edges=tuple(p for b, p in enumerate(pairs) if mask >> b & 1))


def brute_force_independent_set(graph: Graph, k: int) -> bool:
    """Exhaustive check for an independent set of size k (n <= 25)."""
    if graph.n > 25:
        raise ValueError("exhaustive search limited to n <= 25")
    if k <= 0:
        return True
    if k > graph.n:
        return False
    edge_set = set(graph.edges)
    for subset in itertools.combinations(range(1, graph.n + 1), k):
        if all((u, v) not in edge_set
               for u, v in itertools.combinations(subset, 2)):
            return True
    return False


def _vertex_mat(i: int) -> str:
    return f"v{i}"


def _vertex_aux(i: int) -> str:
    return f"v{i}t"


def _pair_mat(i: int, j: int) -> str:
    return f"p{i}_{j}"


def _pair_aux(i: int, j: int) -> str:
    return f"p{i}_{j}t"


def _stock(quantity: float) -> tuple[StockBatch, ...]:
    return (StockBatch(quantity=quantity, remaining_shelf_life=_SHELF),)


def reduce_is_moq(graph: Graph, k: int) -> tuple[Scenario, float]:
    """Construction using the minimum-order-quantity rule.

    Only the vertex materials carry a minimum order quantity; the optimum
    buys exactly k of them (at unit cost, MOQ-sized bulks) iff a
    k-independent set exists, for a target cost of 100 k.  The expensive
    auxiliary materials need no MOQ: any purchase of them already prices a
    solution out of the target.
    """
    n = graph.n
    if not 1 <= k <= n:
        raise ValueError(f"k must lie in [1, {n}]")
    if n < 2:
        raise ValueError("construction needs at least 2 vertices")
    expensive = _UNIT * (k + 1)  # any cost strictly above k preserves the argument

    materials: list[Material] = []
    recipes: list[Recipe] = []
    for i in range(1, n + 1):
        materials.append(Material(id=_vertex_mat(i), cost=1.0, moq=_UNIT))
        materials.append(Material(id=_vertex_aux(i), cost=expensive, batches=_stock(1.0)))
    for i, j in itertools.combinations(range(1, n + 1), 2):
        materials.append(Material(id=_pair_mat(i, j), cost=1.0))
        stock = 0.5 if graph.has_edge(i, j) else 1.0
        materials.append(Material(id=_pair_aux(i, j), cost=expensive, batches=_stock(stock)))
    materials.append(Material(id="t", cost=1.0, demand=_UNIT * k))

    share = _UNIT / (n - 1)
    for i in range(1, n + 1):
        outputs = tuple(
            (_pair_mat(min(i, j), max(i, j)), share)
            for j in range(1, n + 1) if j != i
        )
        recipes.append(Recipe(
            id=f"r{i}",
            inputs=((_vertex_mat(i), _UNIT), (_vertex_aux(i), 1.0)),
            outputs=outputs,
        ))
    for i, j in itertools.combinations(range(1, n + 1), 2):
        recipes.append(Recipe(
            id=f"r{i}_{j}",
            inputs=((_pair_mat(i, j), 2 * share), (_pair_aux(i, j), 1.0)),
            outputs=(("t", 2 * share),),
        ))

    scenario = Scenario(
        instance=Instance.of(materials, recipes),
        weights=WeightVector(1, 0, 0, 0, 0),
    )
    return scenario, _UNIT * k


def reduce_is_mpa(graph: Graph, k: int) -> tuple[Scenario, float]:
    """Construction using the minimum-share rule instead of MOQ.

    Each vertex gets a gadget: 100 units on stock must flow either into the
    vertex recipe or into a group of total 2000 feeding a unit demand, where
    100 is exactly the 5% floor.  Unavoidable leftovers of the pair-aux
    stocks make the target cost depend only on k, not on which set is chosen.
    """
    n = graph.n
    if not 1 <= k <= n:
        raise ValueError(f"k must lie in [1, {n}]")
    if n < 2:
        raise ValueError("construction needs at least 2 vertices")
    expensive = _UNIT * (k + 1)
    group_total = _UNIT / 0.05  # 100 is 5% of 2000

    materials: list[Material] = []
    recipes: list[Recipe] = []
    for i in range(1, n + 1):
        materials.append(Material(id=_vertex_mat(i), cost=expensive, batches=_stock(_UNIT)))
        materials.append(Material(id=_vertex_aux(i), cost=0.0))
        materials.append(Material(id=f"vd{i}", cost=1.0, demand=1.0))
    pair_aux_total = 0.0
    for i, j in itertools.combinations(range(1, n + 1), 2):
        # Stock costs are live here (w1 = 1), so intermediate leftovers and
        # sink overproduction must be priced out too.
        materials.append(Material(id=_pair_mat(i, j), cost=expensive))
        stock = 0.5 if graph.has_edge(i, j) else 1.0
        pair_aux_total += stock
        materials.append(Material(id=_pair_aux(i, j), cost=expensive, batches=_stock(stock)))
    materials.append(Material(id="t", cost=expensive, demand=_UNIT * k))

    share = _UNIT / (n - 1)
    for i in range(1, n + 1):
        outputs = tuple(
            (_pair_mat(min(i, j), max(i, j)), share)
            for j in range(1, n + 1) if j != i
        )
        recipes.append(Recipe(
            id=f"r{i}",
            inputs=((_vertex_mat(i), _UNIT),),
            outputs=outputs,
        ))
        recipes.append(Recipe(
            id=f"rg{i}",
            outputs=((f"vd{i}", 1.0),),
            alt_groups=(AlternativeGroup(
                members=(_vertex_mat(i), _vertex_aux(i)),
                total_quantity=group_total,
            ),),
        ))
    for i, j in itertools.combinations(range(1, n + 1), 2):
        recipes.append(Recipe(
            id=f"r{i}_{j}",
            inputs=((_pair_mat(i, j), 2 * share), (_pair_aux(i, j), 1.0)),
            outputs=(("t", 2 * share),),
        ))

    scenario = Scenario(
        instance=Instance.of(materials, recipes),
        weights=WeightVector(1, 1, 0, 0, 0),
    )
    # With a k-independent set every pair recipe absorbs (z_i + z_j)/2 of its
    # aux stock; the rest stays in stock at the expensive price.
    target = expensive * (pair_aux_total - k * (n - 1) / 2.0)
    return scenario, target
