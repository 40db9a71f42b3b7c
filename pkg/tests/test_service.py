"""HTTP service: validation, run lifecycle, streaming, cancel, export."""

import json
import time

import pytest
from fastapi.testclient import TestClient

from blockea.blocks import ProgramBuilder, REGISTRY
from blockea.examples import example_xml
from blockea.service import create_app
from blockea.xmlio import serialize_xml


@pytest.fixture(scope="module")
def client():
    with TestClient(create_app()) as c:
        yield c


def submit(client, xml, seed=0, mode="seq"):
    response = client.post(f"/runs?seed={seed}&mode={mode}", content=xml)
    assert response.status_code == 200, response.text
    return response.json()["id"]


def wait_for(client, run_id, states=("finished",), timeout=30.0):
    deadline = time.time() + timeout
    while time.time() < deadline:
        state = client.get(f"/runs/{run_id}").json()["state"]
        if state in states:
            return state
        time.sleep(0.05)
    raise AssertionError(f"run {run_id} did not reach {states}")


def slow_program_xml(seconds=30.0):
    b = ProgramBuilder()
    b.block("sleep", inputs={"seconds": b.num(seconds)})
    return serialize_xml(b.build())


def test_registry_endpoint(client):
    payload = client.get("/registry").json()
    assert {g["name"] for g in payload["groups"]} == {
        "population", "individuals", "fitness", "primitives", "logic",
        "loops", "functions", "logging", "multithreading", "time",
    }
    assert len(payload["kinds"]) == len(REGISTRY)
    by_id = {k["id"]: k for k in payload["kinds"]}
    assert by_id["print"]["input_ports"] == [{"name": "value", "type": "Text"}]
    assert by_id["population_create"]["value_output"] == "Population"


def test_examples_endpoints(client):
    listing = client.get("/examples").json()
    assert {e["name"] for e in listing} == {
        "simple-plotting", "multithreading-performance-test",
    }
    xml = client.get("/examples/simple-plotting")
    assert xml.status_code == 200
    assert xml.text == example_xml("simple-plotting")
    assert client.get("/examples/zzz").status_code == 404


def test_validate_endpoint(client):
    good = example_xml("simple-plotting")
    result = client.post("/programs/validate", content=good).json()
    assert result == {"valid": True, "diagnostics": []}

    assert client.post("/programs/validate", content="<wat/>").status_code == 400

    b = ProgramBuilder()
    b.block("if_else")
    broken = client.post(
        "/programs/validate", content=serialize_xml(b.build())
    ).json()
    assert broken["valid"] is False
    assert broken["diagnostics"][0]["code"] == "MissingInput"


def test_run_lifecycle_and_stream(client):
    xml = example_xml("simple-plotting")
    run_id = submit(client, xml, seed=2)
    assert wait_for(client, run_id) == "finished"

    with client.stream("GET", f"/runs/{run_id}/events") as response:
        lines = [json.loads(l) for l in response.iter_lines() if l]
    assert lines[-1] == {"type": "end", "state": "finished"}
    kinds = [l["type"] for l in lines]
    assert kinds.count("run_started") == 15
    assert kinds.count("run_finished") == 15
    assert kinds.count("print") == 15
    finished = [l for l in lines if l["type"] == "run_finished"]
    assert all(f["best_fitness"] == 20.0 for f in finished)
    assert all(f["best_individual"] == "1" * 20 for f in finished)

    csv_text = client.get(f"/runs/{run_id}/export?format=csv").text
    assert csv_text.startswith("run,generation,evaluations,best_fitness\n")

    ioh = client.get(f"/runs/{run_id}/export?format=ioh").json()
    assert ioh["info_name"] == "onemax_DIM20.info"
    assert ioh["dat"].count('"function evaluation"') == 15

    assert client.get(f"/runs/{run_id}/export?format=xlsx").status_code == 400


def test_unknown_run_returns_404(client):
    assert client.get("/runs/9999/events").status_code == 404
    assert client.post("/runs/9999/cancel").status_code == 404
    assert client.get("/runs/9999/export").status_code == 404


def test_submit_rejects_invalid_programs(client):
    assert client.post("/runs", content="not xml").status_code == 400
    b = ProgramBuilder()
    b.block("if_else")
    response = client.post("/runs", content=serialize_xml(b.build()))
    assert response.status_code == 400
    assert response.json()["diagnostics"]


def test_submission_returns_quickly_and_cancel_works(client):
    xml = slow_program_xml()
    start = time.perf_counter()
    run_id = submit(client, xml)
    elapsed = time.perf_counter() - start
    assert elapsed < 0.1, f"submission took {elapsed:.3f}s"

    wait_for(client, run_id, states=("running",))
    export = client.get(f"/runs/{run_id}/export?format=csv")
    assert export.status_code == 409

    client.post(f"/runs/{run_id}/cancel")
    assert wait_for(client, run_id, states=("cancelled",)) == "cancelled"

    with client.stream("GET", f"/runs/{run_id}/events") as response:
        lines = [json.loads(l) for l in response.iter_lines() if l]
    assert lines[-1] == {"type": "end", "state": "cancelled"}


def test_failed_run_reports_error(client):
    b = ProgramBuilder()
    b.block("print", inputs={"value": b.block(
        "text_of_number",
        inputs={"value": b.block("var_get_number", {"name": "ghost"})},
    )})
    run_id = submit(client, serialize_xml(b.build()))
    assert wait_for(client, run_id, states=("failed",)) == "failed"
    status = client.get(f"/runs/{run_id}").json()
    assert "UnboundVariable" in status["error"]


def test_export_code_endpoint(client):
    xml = example_xml("simple-plotting")
    bundle = client.post("/programs/export-code?seed=5", content=xml).json()
    assert set(bundle) == {"main.py", "runtime_support.py"}
    assert "MASTER_SEED = 5" in bundle["main.py"]


def test_concurrent_runs(client):
    ids = [submit(client, example_xml("simple-plotting"), seed=s) for s in range(3)]
    for run_id in ids:
        wait_for(client, run_id)
    exports = {client.get(f"/runs/{i}/export?format=csv").text for i in ids}
    assert len(exports) == 3  # different seeds, different curves
