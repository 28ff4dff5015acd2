"""HTTP service exposing solve and sweep operations.

In-memory instance store and job table; each solve runs on a bounded
worker pool.  Nothing persists across restarts — this is a desk tool.
"""

from __future__ import annotations

import threading
import uuid
from concurrent.futures import Future, ThreadPoolExecutor
from concurrent.futures import TimeoutError as FutureTimeout
from typing import Literal, Optional

from fastapi import FastAPI, HTTPException, Request
from fastapi.exceptions import RequestValidationError
from fastapi.responses import JSONResponse
from pydantic import BaseModel, Field

from .engine import solve_global, solve_iterative
from .lab import (
    SweepError,
    SweepRow,
    demand_scalability,
    hog_sweep,
    moq_sweep,
    weight_sweep,
)
from .model import Instance, Scenario, WeightVector
from .serialize import InstanceFormatError, instance_from_dict, solution_document
from .solver import SolverOptions, Status
from .solver.backends import available_backends

__all__ = ["create_app"]

_MAX_WORKERS = 4
_MAX_PENDING = 32
_SYNC_WAIT_SECONDS = 10.0


class SolveRequest(BaseModel):
    instance_id: str
    weights: list[float] = Field(default=[1.0, 1.0, 1.0, 1.0, 1.0])
    moq: Optional[float] = None
    mpa_ratio: float = 0.05
    fixed_recipe_levels: dict[str, float] = Field(default_factory=dict)
    method: Literal["iterative", "global"] = "iterative"
    time_limit: float = 60.0
    backend: str = "simplex"


class SweepRequest(BaseModel):
    instance_id: str
    weights: Optional[list[float]] = None
    weight_sets: Optional[list[list[float]]] = None
    recipe: Optional[str] = None
    levels: Optional[list[float]] = None
    moq_values: Optional[list[float]] = None
    counts: Optional[list[int]] = None
    seed: int = 0
    moq: Optional[float] = None
    time_limit: float = 60.0
    backend: str = "simplex"


def _sweep_row_doc(row: SweepRow) -> dict:
    return {
        "key": row.key,
        "status": row.status,
        "objective": row.objective,
        "f": list(row.f) if row.f else None,
        "t": list(row.t) if row.t else None,
        "iterations": row.iterations,
        "consB": row.cons_moq,
        "consP": row.cons_mpa,
        "wall_time": row.wall_time,
    }


class _Jobs:
    """Bounded pool plus a job table; results are kept until the process dies."""

    def __init__(self) -> None:
        self.pool = ThreadPoolExecutor(max_workers=_MAX_WORKERS)
        self.lock = threading.Lock()
        self.futures: dict[str, Future] = {}

    def submit(self, fn) -> tuple[str, Future]:
        with self.lock:
            pending = sum(1 for f in self.futures.values() if not f.done())
            if pending >= _MAX_PENDING:
                raise HTTPException(status_code=503, detail="solver queue is full")
            job_id = uuid.uuid4().hex
            future = self.pool.submit(fn)
            self.futures[job_id] = future
        return job_id, future


def create_app() -> FastAPI:
    app = FastAPI(title="carveopt", version="1")
    instances: dict[str, Instance] = {}
    store_lock = threading.Lock()
    jobs = _Jobs()

    @app.exception_handler(RequestValidationError)
    async def malformed(request: Request, exc: RequestValidationError):
        return JSONResponse(status_code=400, content={"detail": exc.errors()})

    def _instance(instance_id: str) -> Instance:
        with store_lock:
            instance = instances.get(instance_id)
        if instance is None:
            raise HTTPException(status_code=404, detail=f"unknown instance {instance_id!r}")
        return instance

    def _options(time_limit: float, backend: str) -> SolverOptions:
        if backend not in available_backends():
            raise HTTPException(status_code=400,
                                detail=f"unknown backend {backend!r}")
        if time_limit <= 0:
            raise HTTPException(status_code=400, detail="time_limit must be positive")
        return SolverOptions(time_limit=time_limit, backend=backend)

    def _respond(job_id: str, future: Future):
        try:
            result = future.result(timeout=_SYNC_WAIT_SECONDS)
        except FutureTimeout:
            return JSONResponse(status_code=202, content={"job_id": job_id})
        except HTTPException:
            raise
        if isinstance(result, HTTPException):
            raise result
        return result

    @app.post("/api/v1/instances")
    async def upload_instance(request: Request):
        try:
            doc = await request.json()
        except Exception:
            raise HTTPException(status_code=400, detail="request body is not JSON")
        try:
            instance = instance_from_dict(doc)
        except InstanceFormatError as exc:
            raise HTTPException(status_code=400, detail=str(exc))
        instance_id = uuid.uuid4().hex
        with store_lock:
            instances[instance_id] = instance
        return {"id": instance_id}

    @app.get("/api/v1/instances/{instance_id}")
    async def instance_metadata(instance_id: str):
        instance = _instance(instance_id)
        demands = [m.demand for m in instance.materials.values() if m.demand > 0]
        return {
            "id": instance_id,
            "materials": len(instance.materials),
            "recipes": len(instance.recipes),
            "nonzero_demands": len(demands),
            "max_demand": max(demands, default=0.0),
            "min_nonzero_demand": min(demands, default=0.0),
            "mean_demand": sum(demands) / len(demands) if demands else 0.0,
        }

    @app.post("/api/v1/solve")
    async def solve(req: SolveRequest):
        instance = _instance(req.instance_id)
        opts = _options(req.time_limit, req.backend)
        if len(req.weights) != 5:
            raise HTTPException(status_code=400, detail="weights must have five entries")
        for rid in req.fixed_recipe_levels:
            if rid not in instance.recipes:
                raise HTTPException(status_code=400,
                                    detail=f"fixed level for unknown recipe {rid!r}")
        try:
            scenario = Scenario(
                instance=instance,
                weights=WeightVector.of(req.weights),
                fixed_recipe_levels=dict(req.fixed_recipe_levels),
                moq_override=req.moq,
                mpa_ratio=req.mpa_ratio,
                solver_options=opts,
            )
        except ValueError as exc:
            raise HTTPException(status_code=400, detail=str(exc))

        runner = solve_iterative if req.method == "iterative" else solve_global

        def work():
            report = runner(scenario)
            doc = solution_document(report, scenario)
            if report.status in (Status.INFEASIBLE, Status.UNBOUNDED):
                return HTTPException(status_code=422, detail=doc)
            return doc

        job_id, future = jobs.submit(work)
        return _respond(job_id, future)

    @app.post("/api/v1/sweeps/{kind}")
    async def sweep(kind: str, req: SweepRequest):
        instance = _instance(req.instance_id)
        opts = _options(req.time_limit, req.backend)
        weights = WeightVector.of(req.weights) if req.weights else WeightVector()

        def work():
            try:
                if kind == "weights":
                    if not req.weight_sets:
                        raise HTTPException(status_code=400,
                                            detail="weight_sets is required")
                    rows = weight_sweep(instance, req.weight_sets, options=opts,
                                        moq_override=req.moq)
                elif kind == "hogs":
                    if not req.recipe or not req.levels:
                        raise HTTPException(status_code=400,
                                            detail="recipe and levels are required")
                    if req.recipe not in instance.recipes:
                        raise HTTPException(status_code=400,
                                            detail=f"unknown recipe {req.recipe!r}")
                    rows = hog_sweep(instance, req.recipe, sorted(req.levels),
                                     weights=weights, options=opts)
                elif kind == "moq":
                    if req.moq_values is None:
                        raise HTTPException(status_code=400,
                                            detail="moq_values is required")
                    rows = moq_sweep(instance, req.moq_values,
                                     weights=weights, options=opts)
                elif kind == "demand":
                    if req.counts is None:
                        raise HTTPException(status_code=400,
                                            detail="counts is required")
                    rows = demand_scalability(
                        instance, req.counts, seed=req.seed,
                        moq=req.moq if req.moq is not None else 100.0,
                        weights=req.weights or (100.0, 100.0, 1.0, 1.0, 1.0),
                        options=opts)
                else:
                    raise HTTPException(status_code=404,
                                        detail=f"unknown sweep kind {kind!r}")
            except (SweepError, ValueError) as exc:
                return HTTPException(status_code=422, detail=str(exc))
            except HTTPException as exc:
                return exc
            return {"kind": kind, "rows": [_sweep_row_doc(r) for r in rows]}

        job_id, future = jobs.submit(work)
        return _respond(job_id, future)

    @app.get("/api/v1/jobs/{job_id}")
    async def job_status(job_id: str):
        with jobs.lock:
            future = jobs.futures.get(job_id)
        if future is None:
            raise HTTPException(status_code=404, detail=f"unknown job {job_id!r}")
        if not future.done():
            raise HTTPException(status_code=409, detail="job still running")
        result = future.result()
        if isinstance(result, HTTPException):
            raise result
        return result

    return app
