import numpy as np
import pytest
from fastapi.testclient import TestClient

from cavraman.service import create_app

from test_cli import SMALL_CFG


@pytest.fixture(scope="module")
def client():
    return TestClient(create_app())


@pytest.fixture(scope="module")
def session_id(client):
    r = client.post("/sessions", json={"config_text": SMALL_CFG})
    assert r.status_code == 200
    return r.json()["id"]


def test_create_session_thermal_summary(client):
    r = client.post("/sessions", json={"config_text": SMALL_CFG})
    assert r.status_code == 200
    body = r.json()
    assert body["mean_j"] == pytest.approx(2.44, abs=0.02)
    assert abs(sum(p["p"] for p in body["populations"]) - 1.0) < 1e-9
    labels = {t["label"] for t in body["transitions"]}
    assert "v0-0:J2-0" in labels and "v0-0:J0-2" not in labels
    assert all(t["gamma_cavity"] >= 0 and t["gamma_spont"] >= 0
               for t in body["transitions"])


def test_create_session_zero_temperature(client):
    r = client.post("/sessions", json={
        "config_text": SMALL_CFG, "temperature_k": 0.0})
    assert r.status_code == 200
    pops = {p["label"]: p["p"] for p in r.json()["populations"]}
    assert pops["v0:J0"] == pytest.approx(1.0)


def test_malformed_body_is_400(client):
    r = client.post("/sessions", json={"temperature_k": "not-a-number"})
    assert r.status_code == 400
    assert "temperature_k" in str(r.json()["detail"])


def test_unknown_session_404(client):
    assert client.get("/sessions/snope").status_code == 404
    assert client.post("/sessions/snope/step",
                       json={"transition": "v0-0:J2-0",
                             "duration_ms": 60}).status_code == 404


def test_step_increases_ground_population(client, session_id):
    before = client.get(f"/sessions/{session_id}").json()
    p_before = {p["label"]: p["p"] for p in before["populations"]}
    r = client.post(f"/sessions/{session_id}/step",
                    json={"transition": "v0-0:J2-0", "duration_ms": 60})
    assert r.status_code == 200
    after = r.json()
    p_after = {p["label"]: p["p"] for p in after["populations"]}
    assert p_after["v0:J0"] > p_before["v0:J0"]
    assert after["undo_depth"] == before["undo_depth"] + 1


def test_zero_duration_rejected(client, session_id):
    r = client.post(f"/sessions/{session_id}/step",
                    json={"transition": "v0-0:J2-0", "duration_ms": 0})
    assert r.status_code == 400


def test_forbidden_transition_409(client, session_id):
    r = client.post(f"/sessions/{session_id}/step",
                    json={"transition": "v0-0:J0-2", "duration_ms": 60})
    assert r.status_code == 409
    r = client.post(f"/sessions/{session_id}/step",
                    json={"transition": "v0-0:J3-0", "duration_ms": 60})
    assert r.status_code == 409


def test_undo_restores_exact_state(client):
    sid = client.post("/sessions", json={"config_text": SMALL_CFG}).json()["id"]
    before = client.get(f"/sessions/{sid}").json()
    client.post(f"/sessions/{sid}/step",
                json={"transition": "v0-0:J4-2", "duration_ms": 60})
    r = client.post(f"/sessions/{sid}/undo")
    assert r.status_code == 200
    after = r.json()
    assert [p["p"] for p in after["populations"]] == \
        [p["p"] for p in before["populations"]]
    assert after["time_s"] == before["time_s"]
    assert after["steps"] == before["steps"]


def test_undo_empty_stack_409(client):
    sid = client.post("/sessions", json={"config_text": SMALL_CFG}).json()["id"]
    assert client.post(f"/sessions/{sid}/undo").status_code == 409


def test_spectrum_endpoint_matches_fold(client, session_id):
    r = client.get(f"/sessions/{session_id}/spectrum")
    assert r.status_code == 200
    body = r.json()
    anti = [l for l in body["lines"] if l["kind"] == "anti-stokes"]
    assert len(anti) == 7
    assert body["fsr_hz"] == pytest.approx(15e9)
    assert all(0 <= l["folded_offset_hz"] < body["fsr_hz"] for l in body["lines"])


def test_rates_endpoint_nonnegative(client, session_id):
    r = client.get(f"/sessions/{session_id}/rates")
    assert r.status_code == 200
    body = r.json()
    for key in ("gamma_spont", "gamma_cavity_plus", "gamma_cavity_minus"):
        assert np.min(np.array(body[key])) >= 0.0


def test_export_and_replay_through_cli(client, tmp_path):
    from cavraman.cli import main

    sid = client.post("/sessions", json={"config_text": SMALL_CFG}).json()["id"]
    for label, ms in (("v0-0:J4-2", 60), ("v0-0:J2-0", 60), ("v0-0:J3-1", 45)):
        r = client.post(f"/sessions/{sid}/step",
                        json={"transition": label, "duration_ms": ms})
        assert r.status_code == 200
    final = client.get(f"/sessions/{sid}").json()
    p_api = np.array([p["p"] for p in final["populations"]])

    schedule_text = client.get(f"/sessions/{sid}/schedule").text
    cfg = tmp_path / "replay.cfg"
    cfg.write_text(SMALL_CFG)
    sched = tmp_path / "replay.seq"
    sched.write_text(schedule_text)
    out = tmp_path / "out"
    assert main(["run", "--config", str(cfg), "--out", str(out),
                 "--schedule", str(sched), "--quiet"]) == 0
    rows = [l for l in (out / "trajectory.tsv").read_text().splitlines()
            if not l.startswith("#")]
    p_cli = np.array([float(x) for x in rows[-1].split("\t")[1:-2]])
    assert np.max(np.abs(p_cli - p_api)) < 1e-9

    export_text = client.get(f"/sessions/{sid}/export").text
    assert export_text.startswith("# population trajectory")
    api_rows = [l for l in export_text.splitlines() if not l.startswith("#")]
    assert len(api_rows) == 4     # initial + three steps


def test_undo_stack_depth_capped(client):
    sid = client.post("/sessions", json={"config_text": SMALL_CFG}).json()["id"]
    last = None
    for i in range(70):
        last = client.post(f"/sessions/{sid}/step",
                           json={"transition": "v0-0:J2-0",
                                 "duration_ms": 1}).json()
    assert last["undo_depth"] == 64
