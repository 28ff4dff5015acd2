"""JSON instance documents and solution documents.

Instances round-trip losslessly through ``parse_instance`` /
``serialize_instance``.  Parse errors carry a JSON-path-style location so a
user can find the offending field in a large file.
"""

from __future__ import annotations

import json
from typing import Any, Mapping

from .engine import SolveReport
from .model import (
    AlternativeGroup,
    Instance,
    Material,
    Recipe,
    Scenario,
    StockBatch,
    merge_batches,
    validate_instance,
)

__all__ = [
    "SCHEMA_VERSION",
    "InstanceFormatError",
    "parse_instance",
    "serialize_instance",
    "instance_to_dict",
    "instance_from_dict",
    "solution_document",
]

SCHEMA_VERSION = 1
_PRINT_THRESHOLD = 1e-9


class InstanceFormatError(ValueError):
    """Raised when an instance document is malformed; ``path`` locates the issue."""

    def __init__(self, path: str, message: str):
        self.path = path
        super().__init__(f"{path}: {message}")


def _want(obj: Mapping[str, Any], key: str, kind, path: str, default=...):
    if key not in obj:
        if default is not ...:
            return default
        raise InstanceFormatError(f"{path}.{key}", "missing required field")
    value = obj[key]
    if kind is float and isinstance(value, (int, float)) and not isinstance(value, bool):
        return float(value)
    if not isinstance(value, kind) or isinstance(value, bool):
        raise InstanceFormatError(f"{path}.{key}", f"expected {kind.__name__}")
    return value


def _material_from_dict(obj: Any, path: str) -> Material:
    if not isinstance(obj, dict):
        raise InstanceFormatError(path, "expected an object")
    batches = []
    raw_batches = _want(obj, "batches", list, path, default=[])
    for k, b in enumerate(raw_batches):
        bp = f"{path}.batches[{k}]"
        if not isinstance(b, dict):
            raise InstanceFormatError(bp, "expected an object")
        batches.append(StockBatch(
            quantity=_want(b, "quantity", float, bp),
            remaining_shelf_life=_want(b, "remaining_shelf_life", float, bp),
        ))
    return Material(
        id=_want(obj, "id", str, path),
        name=_want(obj, "name", str, path, default=""),
        cost=_want(obj, "cost", float, path),
        demand=_want(obj, "demand", float, path, default=0.0),
        moq=_want(obj, "moq", float, path, default=0.0),
        turnover=_want(obj, "turnover", float, path, default=0.0),
        shelf_life=_want(obj, "shelf_life", float, path, default=0.0),
        batches=merge_batches(batches),
    )


def _pairs_from_list(raw: Any, path: str) -> tuple[tuple[str, float], ...]:
    if not isinstance(raw, list):
        raise InstanceFormatError(path, "expected an array")
    pairs = []
    for k, item in enumerate(raw):
        ip = f"{path}[{k}]"
        if not isinstance(item, dict):
            raise InstanceFormatError(ip, "expected an object")
        pairs.append((_want(item, "material", str, ip), _want(item, "qty", float, ip)))
    return tuple(pairs)


def _recipe_from_dict(obj: Any, path: str) -> Recipe:
    if not isinstance(obj, dict):
        raise InstanceFormatError(path, "expected an object")
    groups = []
    for k, g in enumerate(_want(obj, "alt_groups", list, path, default=[])):
        gp = f"{path}.alt_groups[{k}]"
        if not isinstance(g, dict):
            raise InstanceFormatError(gp, "expected an object")
        members = _want(g, "members", list, gp)
        if not all(isinstance(m, str) for m in members):
            raise InstanceFormatError(f"{gp}.members", "expected an array of material ids")
        groups.append(AlternativeGroup(
            members=tuple(members),
            total_quantity=_want(g, "total_quantity", float, gp),
        ))
    return Recipe(
        id=_want(obj, "id", str, path),
        inputs=_pairs_from_list(_want(obj, "inputs", list, path, default=[]), f"{path}.inputs"),
        outputs=_pairs_from_list(_want(obj, "outputs", list, path, default=[]), f"{path}.outputs"),
        alt_groups=tuple(groups),
    )


def instance_from_dict(doc: Any) -> Instance:
    if not isinstance(doc, dict):
        raise InstanceFormatError("$", "expected a top-level object")
    version = _want(doc, "schema_version", int, "$", default=SCHEMA_VERSION)
    if version != SCHEMA_VERSION:
        raise InstanceFormatError("$.schema_version", f"unsupported version {version}")
    materials = [
        _material_from_dict(m, f"$.materials[{i}]")
        for i, m in enumerate(_want(doc, "materials", list, "$"))
    ]
    recipes = [
        _recipe_from_dict(r, f"$.recipes[{i}]")
        for i, r in enumerate(_want(doc, "recipes", list, "$"))
    ]
    if len({m.id for m in materials}) != len(materials):
        raise InstanceFormatError("$.materials", "duplicate material ids")
    if len({r.id for r in recipes}) != len(recipes):
        raise InstanceFormatError("$.recipes", "duplicate recipe ids")
    instance = Instance.of(materials, recipes)
    violations = validate_instance(instance)
    if violations:
        raise InstanceFormatError("$", "; ".join(str(v) for v in violations))
    return instance


def parse_instance(data: bytes | str) -> Instance:
    """Parse and validate a JSON instance document."""
    try:
        doc = json.loads(data)
    except json.JSONDecodeError as exc:
        raise InstanceFormatError("$", f"invalid JSON: {exc}") from exc
    return instance_from_dict(doc)


def instance_to_dict(instance: Instance) -> dict:
    return {
        "schema_version": SCHEMA_VERSION,
        "materials": [
            {
                "id": m.id,
                "name": m.name,
                "cost": m.cost,
                "demand": m.demand,
                "moq": m.moq,
                "turnover": m.turnover,
                "shelf_life": m.shelf_life,
                "batches": [
                    {"quantity": b.quantity, "remaining_shelf_life": b.remaining_shelf_life}
                    for b in m.batches
                ],
            }
            for m in instance.materials.values()
        ],
        "recipes": [
            {
                "id": r.id,
                "inputs": [{"material": mid, "qty": q} for mid, q in r.inputs],
                "outputs": [{"material": mid, "qty": q} for mid, q in r.outputs],
                "alt_groups": [
                    {"members": list(g.members), "total_quantity": g.total_quantity}
                    for g in r.alt_groups
                ],
            }
            for r in instance.recipes.values()
        ],
    }


def serialize_instance(instance: Instance) -> str:
    return json.dumps(instance_to_dict(instance), indent=2, sort_keys=True)


def _nonzero(mapping: Mapping, threshold: float = _PRINT_THRESHOLD) -> dict:
    out = {}
    for key, value in mapping.items():
        if abs(value) > threshold:
            name = "|".join(str(p) for p in key) if isinstance(key, tuple) else key
            out[name] = value
    return out


def solution_document(report: SolveReport, scenario: Scenario | None = None) -> dict:
    """JSON-ready summary of a solve; maps keep only values above 1e-9."""
    doc: dict = {
        "status": str(report.status),
        "method": report.method,
        "statistics": {
            "iterations": report.iterations,
            "moq_groups": report.moq_groups,
            "mpa_groups": report.mpa_groups,
            "wall_time": report.wall_time,
        },
    }
    sol = report.solution
    if sol is not None:
        doc["objective"] = sol.objective_value
        doc["components"] = {
            f"f{i}": sol.objective_components[i] for i in range(5)
        }
        doc["z"] = _nonzero(sol.z)
        doc["z_hat"] = _nonzero(sol.z_hat)
        doc["buy"] = _nonzero(sol.buy)
        doc["stock_new"] = _nonzero(sol.stock_new)
        doc["stock_old"] = _nonzero(sol.stock_old)
    return doc
