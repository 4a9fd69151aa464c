import json
import math

import pytest
from fastapi.testclient import TestClient

from prytz import jsonio
from prytz.estimator import measure_two_directions
from prytz.geom2d import square_path
from prytz.service import create_app


@pytest.fixture(scope="module")
def client():
    return TestClient(create_app())


def square_payload(side=2.0):
    return jsonio.path_to_obj(square_path(side))


class TestHealth:
    def test_ok(self, client):
        resp = client.get("/health")
        assert resp.status_code == 200
        assert resp.json()["status"] == "ok"

    def test_cors_headers(self, client):
        resp = client.get("/health", headers={"Origin": "http://localhost:5173"})
        assert resp.headers.get("access-control-allow-origin") == "*"


class TestErrors:
    def test_malformed_json_400(self, client):
        resp = client.post("/trace", content=b"{nope")
        assert resp.status_code == 400
        body = resp.json()
        assert set(body) == {"code", "message"}
        assert body["code"] == "bad_json"

    def test_precondition_422(self, client):
        resp = client.post("/trace", json={
            "path": {"closed": False, "vertices": [[0, 0], [1, 0]]},
            "theta0": 0.5, "ell": 1.0, "loop": True})
        assert resp.status_code == 422
        assert resp.json()["code"] == "precondition_failed"

    def test_missing_field_422(self, client):
        resp = client.post("/trace", json={"path": square_payload(), "ell": 1.0})
        assert resp.status_code == 422

    def test_bad_parallelogram_422(self, client):
        resp = client.post("/menzin/parallelogram",
                           json={"v": [1, 0], "w": [2, 0], "ell": 1.0})
        assert resp.status_code == 422


class TestTrace:
    def test_closed_loop_report(self, client):
        resp = client.post("/trace", json={"path": square_payload(), "theta0": 0.5,
                                           "ell": 1.0, "samples": 32})
        assert resp.status_code == 200
        obj = resp.json()
        assert obj["closed"] is True
        assert obj["report"]["a_region"] == pytest.approx(4.0)
        assert abs(obj["report"]["residual"]) < 1e-5
        assert len(obj["states"]) <= 33

    def test_open_path(self, client):
        resp = client.post("/trace", json={
            "path": {"closed": False, "vertices": [[0, 0], [5, 0]]},
            "theta0": 1.5707963, "ell": 1.0})
        obj = resp.json()
        assert obj["closed"] is False
        assert obj["report"] is None
        assert obj["delta_theta"] > 0

    def test_determinism(self, client):
        body = {"path": square_payload(), "theta0": 0.5, "ell": 1.0}
        r1 = client.post("/trace", json=body)
        r2 = client.post("/trace", json=body)
        assert r1.content == r2.content


class TestHolonomy:
    def test_square_2l_trace_value(self, client):
        resp = client.post("/holonomy", json={"path": square_payload(2.0), "ell": 1.0})
        obj = resp.json()
        assert obj["trace"] == pytest.approx(2 - 4 * math.sinh(1.0) ** 4, rel=1e-12)
        assert obj["trace"] == pytest.approx(-5.63, abs=5e-3)
        assert obj["classification"]["kind"] == "Hyperbolic"
        assert obj["winding_prediction"] == 1

    def test_ode_route(self, client):
        resp = client.post("/holonomy", json={"path": square_payload(2.0), "ell": 1.0,
                                              "ode": True, "step": 0.005})
        assert resp.json()["trace"] == pytest.approx(2 - 4 * math.sinh(1.0) ** 4,
                                                     rel=1e-8)

    def test_small_region_elliptic(self, client):
        resp = client.post("/holonomy", json={"path": square_payload(0.1), "ell": 1.0})
        obj = resp.json()
        assert obj["classification"]["kind"] == "Elliptic"
        assert obj["winding_prediction"] is None


class TestMenzin:
    def test_parallelogram_report(self, client):
        resp = client.post("/menzin/parallelogram",
                           json={"v": [2, 0], "w": [0, 2], "ell": 1.0})
        obj = resp.json()
        assert obj["attracting"] is True
        assert obj["im_bd"] == pytest.approx(math.sinh(1.0) ** 2, rel=1e-12)
        assert obj["trace"] == pytest.approx(2 - 4 * math.sinh(1.0) ** 4, rel=1e-12)


class TestEstimate:
    def test_averaged_reading_matches_engine(self, client):
        resp = client.post("/estimate", json={"path": square_payload(0.5), "theta0": 0.4,
                                              "ell": 2.0})
        obj = resp.json()
        want = measure_two_directions(square_path(0.5), 0, 0.4, 2.0, 2.0 / 200.0)
        assert obj["averaged_reading"] == pytest.approx(want, rel=1e-12)
        avg = 0.5 * (obj["reading"] + obj["reading_opposite"])
        assert obj["averaged_reading"] == pytest.approx(avg, rel=1e-14)
        assert obj["area"] == pytest.approx(0.25)

    def test_off_boundary_base(self, client):
        resp = client.post("/estimate", json={"path": square_payload(0.5), "theta0": 0.4,
                                              "ell": 2.0, "base": [0.0, 0.0]})
        obj = resp.json()
        # base at the square's center: both predictions coincide (centroid term zero)
        assert obj["prediction"]["ell_sigma_predicted"] == pytest.approx(
            obj["prediction"]["averaged_predicted"], rel=1e-12)

    def test_open_path_rejected(self, client):
        resp = client.post("/estimate", json={
            "path": {"closed": False, "vertices": [[0, 0], [1, 0]]},
            "theta0": 0.0, "ell": 1.0})
        assert resp.status_code == 422
