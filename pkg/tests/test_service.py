import warnings

import pytest

with warnings.catch_warnings():
    warnings.simplefilter("ignore")
    from fastapi.testclient import TestClient

from pdcc.diffop import OpMatrix
from pdcc.service.app import app
from pdcc.systems import load_fixture


@pytest.fixture(scope="module")
def client():
    return TestClient(app)


def test_catalog(client):
    body = client.get("/catalog").json()
    assert "conformal_killing" in body["systems"]
    assert "S4p" in body["fixtures"]
    assert body["suites"] == ["appendix", "formulas", "duality"]


def test_system_by_fixture_name(client):
    r = client.post("/system", json={"system": "R3"})
    assert r.status_code == 200
    assert OpMatrix.from_json_obj(r.json()["matrix"]) == load_fixture("R3")


def test_resolve(client):
    r = client.post("/resolve", json={"system": "killing", "dim": 3, "minimize": True})
    body = r.json()
    assert body["betti"] == [3, 6, 6, 3]
    assert body["euler_characteristic"] == 0
    assert "certificates" not in body


def test_resolve_with_certificates(client):
    r = client.post("/resolve", json={"system": "killing", "dim": 2, "minimize": True, "emit_certificates": True})
    assert len(r.json()["certificates"]) == 1


def test_inline_matrix(client):
    text = load_fixture("R2").to_json()
    r = client.post("/cc", json={"matrix_json": text})
    assert r.status_code == 200
    assert r.json()["matrix"]["rows"] == 0


def test_parse_error_position(client):
    r = client.post("/system", json={"matrix_json": '{"n": 2, "rows": 1, "cols": 1, "entries": [[[[1, 2]]]]}'})
    assert r.status_code == 400
    assert r.json()["error"] == "parse"
    assert r.json()["position"] == "$.entries[0][0][0]"


def test_usage_errors(client):
    assert client.post("/system", json={}).status_code == 400
    assert client.post("/system", json={"system": "nope"}).status_code == 400
    assert client.post("/system", json={"system": "killing", "metric": "weird", "dim": 2}).status_code == 422
    assert client.post("/verify", json={"suite": "nope"}).status_code == 400


def test_cohomology_janet_duality(client):
    c = client.post("/cohomology", json={"system": "killing", "dim": 3, "s": 2, "r": 0}).json()
    assert c["dim_H"] == 6
    j = client.post("/janet", json={"system": "mixed_pair_completed"}).json()
    assert j["alpha"] == [2, 0, 0] and j["sequence_ranks"] == [1, 4, 4, 1]
    d = client.post("/duality", json={"system": "cauchy_2"}).json()
    assert d["exact"] is True and d["parametrization"]["cols"] == 1


def test_adjoint_sequence(client):
    a = client.post("/adjoint", json={"system": "killing", "dim": 2, "sequence": True}).json()
    assert a["exact"] == [True]
    assert a["matrix"]["rows"] == 2
