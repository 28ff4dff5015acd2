"""HTTP service: instance store, solves, sweeps, job semantics."""

import pytest
from fastapi.testclient import TestClient

from carveopt.model import Instance, Material, Recipe
from carveopt.serialize import instance_to_dict
from carveopt.service import create_app
from carveopt.synth import demo_instance


@pytest.fixture()
def client():
    return TestClient(create_app())


def _demand_doc():
    mats = dict(demo_instance().materials)
    mats["m6"] = Material(id="m6", name="product", cost=8.0, demand=700.0)
    return instance_to_dict(Instance(materials=mats,
                                     recipes=demo_instance().recipes))


def _upload(client, doc=None) -> str:
    resp = client.post("/api/v1/instances", json=doc or _demand_doc())
    assert resp.status_code == 200, resp.text
    return resp.json()["id"]


def test_upload_and_metadata(client):
    iid = _upload(client)
    meta = client.get(f"/api/v1/instances/{iid}").json()
    assert meta["materials"] == 6
    assert meta["recipes"] == 3
    assert meta["nonzero_demands"] == 1
    assert meta["max_demand"] == 700.0


def test_upload_rejects_bad_documents(client):
    assert client.post("/api/v1/instances",
                       content=b"{not json").status_code == 400
    assert client.post("/api/v1/instances",
                       json={"materials": []}).status_code == 400


def test_unknown_instance_is_404(client):
    assert client.get("/api/v1/instances/nope").status_code == 404
    resp = client.post("/api/v1/solve", json={"instance_id": "nope"})
    assert resp.status_code == 404


def test_solve_round_trip(client):
    iid = _upload(client)
    resp = client.post("/api/v1/solve", json={"instance_id": iid})
    assert resp.status_code == 200, resp.text
    doc = resp.json()
    assert doc["status"] == "optimal"
    assert doc["objective"] > 0
    assert doc["statistics"]["iterations"] >= 1


def test_solve_validates_request(client):
    iid = _upload(client)
    assert client.post("/api/v1/solve", json={
        "instance_id": iid, "weights": [1, 2]}).status_code == 400
    assert client.post("/api/v1/solve", json={
        "instance_id": iid,
        "fixed_recipe_levels": {"nope": 1.0}}).status_code == 400
    # malformed payloads are 400, not FastAPI's default 422
    assert client.post("/api/v1/solve", json={
        "instance_id": iid, "method": "psychic"}).status_code == 400


def test_infeasible_solve_is_422_with_diagnostics(client):
    inst = Instance.of(
        [Material(id="raw", cost=1.0), Material(id="mid", cost=1.0)],
        [Recipe(id="r1", inputs=(("raw", 1.0),), outputs=(("mid", 1.0),)),
         Recipe(id="r2", inputs=(("mid", 10.0),), outputs=())],
    )
    iid = _upload(client, instance_to_dict(inst))
    resp = client.post("/api/v1/solve", json={
        "instance_id": iid,
        "fixed_recipe_levels": {"r1": 0.0, "r2": 1.0}})
    assert resp.status_code == 422, resp.text
    assert resp.json()["detail"]["status"] == "infeasible"


def test_weight_sweep_endpoint(client):
    iid = _upload(client)
    resp = client.post("/api/v1/sweeps/weights", json={
        "instance_id": iid,
        "weight_sets": [[1, 1, 1, 1, 1], [100, 100, 1, 1, 1]]})
    assert resp.status_code == 200, resp.text
    doc = resp.json()
    assert doc["kind"] == "weights"
    assert len(doc["rows"]) == 2
    row = doc["rows"][0]
    assert set(row) >= {"key", "status", "objective", "f", "t",
                        "iterations", "consB", "consP", "wall_time"}


def test_sweep_requires_parameters(client):
    iid = _upload(client)
    assert client.post("/api/v1/sweeps/weights", json={
        "instance_id": iid}).status_code == 400
    assert client.post("/api/v1/sweeps/hogs", json={
        "instance_id": iid, "levels": [1.0]}).status_code == 400
    assert client.post("/api/v1/sweeps/hogs", json={
        "instance_id": iid, "recipe": "nope",
        "levels": [1.0]}).status_code == 400
    assert client.post("/api/v1/sweeps/martian", json={
        "instance_id": iid}).status_code == 404


def test_moq_sweep_endpoint(client):
    iid = _upload(client)
    resp = client.post("/api/v1/sweeps/moq", json={
        "instance_id": iid, "moq_values": [0.0, 50.0]})
    assert resp.status_code == 200, resp.text
    assert [r["key"] for r in resp.json()["rows"]] == ["0", "50"]


def test_unknown_job_is_404(client):
    assert client.get("/api/v1/jobs/nope").status_code == 404
