import json
import threading

import pytest
from fastapi.testclient import TestClient

from grieferlens.service import MatchStore, create_app
from grieferlens.simgen import Injection, Scenario, generate_match

from conftest import minimal_doc, dump_doc


@pytest.fixture()
def store(tmp_path):
    return MatchStore(tmp_path / "data")


@pytest.fixture()
def client(store):
    return TestClient(create_app(store))


@pytest.fixture(scope="module")
def baseline_doc():
    doc, _ = generate_match(Scenario(seed=600))
    return doc


@pytest.fixture(scope="module")
def afk_doc():
    doc, _ = generate_match(
        Scenario(seed=601, injections=(Injection("P07", "afk", {"t0": 200.0, "t1": 400.0}),))
    )
    return doc


def _ingest(client, doc):
    response = client.post("/matches", content=doc)
    assert response.status_code in (200, 201)
    return response.json()["match_id"]


# ---------------------------------------------------------------------------
# ingestion


def test_ingest_valid_match(client, baseline_doc):
    response = client.post("/matches", content=baseline_doc)
    assert response.status_code == 201
    assert response.json()["match_id"] == "sim600-baseline"


def test_ingest_is_idempotent(client, baseline_doc):
    first = client.post("/matches", content=baseline_doc)
    second = client.post("/matches", content=baseline_doc)
    assert first.status_code == 201
    assert second.status_code == 200
    assert first.json() == second.json()


def test_ingest_conflicting_content(client, baseline_doc):
    client.post("/matches", content=baseline_doc)
    tampered = json.loads(baseline_doc)
    tampered["players"][0]["report_count"] = 9
    response = client.post("/matches", content=json.dumps(tampered))
    assert response.status_code == 409
    assert response.json()["error"]["code"] == "conflict"


def test_ingest_nine_players_names_invariant(client):
    doc = minimal_doc()
    doc["players"] = doc["players"][:9]
    response = client.post("/matches", content=dump_doc(doc))
    assert response.status_code == 400
    assert "players: expected 10, got 9" in response.json()["error"]["message"]


def test_ingest_malformed_body(client):
    response = client.post("/matches", content=b"{broken")
    assert response.status_code == 400
    assert response.json()["error"]["code"] == "malformed_input"


# ---------------------------------------------------------------------------
# summaries


def test_summary_baseline_clean(client, baseline_doc):
    mid = _ingest(client, baseline_doc)
    doc = client.get(f"/matches/{mid}/summary").json()
    assert len(doc["players"]) == 10
    assert all(
        p["suspicion_paragraph"] == "No suspicious behavior detected."
        for p in doc["players"]
    )


def test_summary_afk_scenario(client, afk_doc):
    mid = _ingest(client, afk_doc)
    doc = client.get(f"/matches/{mid}/summary").json()
    flagged = [p for p in doc["players"] if p["findings"]]
    assert [p["player_id"] for p in flagged] == ["P07"]
    assert flagged[0]["findings"][0]["griefer_type"] == "afk"


def test_summary_unknown_match(client):
    response = client.get("/matches/nope/summary")
    assert response.status_code == 404


# ---------------------------------------------------------------------------
# timeline


def test_timeline_series_and_ranges(client, afk_doc):
    mid = _ingest(client, afk_doc)
    payload = client.get(f"/matches/{mid}/timeline", params={"player": "P07"}).json()
    assert len(payload["series"]["contribution"]["values"]) == 60
    assert len(payload["series"]["gold"]["values"]) == 60
    assert len(payload["series"]["jungle_share"]["values"]) == 60
    assert set(payload["key_events"]) == {f"P{i:02d}" for i in range(1, 11)}
    summary = client.get(f"/matches/{mid}/summary").json()
    expected = {
        p["player_id"]: {f["griefer_type"]: f["time_ranges"] for f in p["findings"]}
        for p in summary["players"]
    }
    assert payload["suspicious_ranges"] == expected
    assert payload["suspicious_ranges"]["P01"] == {}


def test_timeline_unknown_player(client, baseline_doc):
    mid = _ingest(client, baseline_doc)
    assert (
        client.get(f"/matches/{mid}/timeline", params={"player": "P99"}).status_code == 404
    )


# ---------------------------------------------------------------------------
# heatmap / trajectory


def _stationary_doc():
    doc = minimal_doc()
    doc["match_id"] = "t-stationary"
    doc["position_samples"] = [
        {"t": 0, "player_id": p["player_id"], "x": 0.515, "y": 0.515}
        for p in doc["players"]
    ]
    return json.dumps(doc)


def test_heatmap_hot_threshold(client):
    mid = _ingest(client, _stationary_doc())
    payload = client.get(
        f"/matches/{mid}/heatmap",
        params={"player": "P01", "from": 100, "to": 140, "grid": 64},
    ).json()
    cells = payload["cells"]
    hot = payload["hot"]
    hot_cells = [(i, j) for i in range(64) for j in range(64) if hot[i][j]]
    assert len(hot_cells) == 1
    i, j = hot_cells[0]
    assert cells[i][j] >= 31.0
    cold = client.get(
        f"/matches/{mid}/heatmap",
        params={"player": "P01", "from": 100, "to": 125, "grid": 64},
    ).json()
    assert not any(any(row) for row in cold["hot"])


def test_heatmap_bad_window(client, baseline_doc):
    mid = _ingest(client, baseline_doc)
    response = client.get(
        f"/matches/{mid}/heatmap", params={"player": "P01", "from": 50, "to": 10}
    )
    assert response.status_code == 400
    assert response.json()["error"]["code"] == "bad_window"


def test_heatmap_bad_grid(client, baseline_doc):
    mid = _ingest(client, baseline_doc)
    response = client.get(
        f"/matches/{mid}/heatmap",
        params={"player": "P01", "from": 0, "to": 10, "grid": 0},
    )
    assert response.status_code == 400


def test_trajectory_window_and_death_split(client):
    doc = minimal_doc()
    doc["match_id"] = "t-traj"
    doc["position_samples"] = [
        {"t": 0, "player_id": p["player_id"], "x": 0.5, "y": 0.5} for p in doc["players"]
    ]
    doc["events"] = [
        {"t": 100, "kind": "kill", "actor": "P06", "victim": "P01", "assists": [], "x": 0.5, "y": 0.5},
        {"t": 130, "kind": "respawn", "actor": "P01"},
    ]
    client.post("/matches", content=json.dumps(doc))
    whole = client.get(
        "/matches/t-traj/trajectory", params={"player": "P02", "from": 0, "to": 50}
    ).json()
    assert len(whole["polylines"]) == 1
    split = client.get(
        "/matches/t-traj/trajectory", params={"player": "P01", "from": 80, "to": 160}
    ).json()
    assert len(split["polylines"]) == 2
    missing = client.get(
        "/matches/t-traj/trajectory", params={"player": "P99", "from": 0, "to": 10}
    )
    assert missing.status_code == 404


# ---------------------------------------------------------------------------
# annotations


def _label_body(target="P03", types=("jungle_stealing", "non_participation")):
    return {
        "author": "reviewer-1",
        "target_player": target,
        "kind": "label",
        "griefer_types": list(types),
        "text": "",
    }


def test_annotation_round_trip(client, baseline_doc):
    mid = _ingest(client, baseline_doc)
    created = client.post(f"/matches/{mid}/annotations", json=_label_body())
    assert created.status_code == 201
    record = created.json()
    assert record["annotation_id"]
    assert record["griefer_types"] == ["jungle_stealing", "non_participation"]
    listed = client.get(f"/matches/{mid}/annotations").json()["annotations"]
    assert [r["annotation_id"] for r in listed] == [record["annotation_id"]]


def test_annotation_note_with_time_range(client, baseline_doc):
    mid = _ingest(client, baseline_doc)
    body = {
        "author": "reviewer-1",
        "target_player": "P03",
        "kind": "note",
        "time_range": [780, 840],
        "tags": ["aimless", "fountain"],
        "text": "kept moving between the towers and the crystal",
    }
    created = client.post(f"/matches/{mid}/annotations", json=body)
    assert created.status_code == 201
    assert created.json()["time_range"] == [780.0, 840.0]


def test_annotation_range_outside_duration(client, baseline_doc):
    mid = _ingest(client, baseline_doc)
    body = _label_body()
    body["time_range"] = [100, 4000]
    response = client.post(f"/matches/{mid}/annotations", json=body)
    assert response.status_code == 400


def test_annotation_validation_errors(client, baseline_doc):
    mid = _ingest(client, baseline_doc)
    bad_target = _label_body(target="P99")
    assert client.post(f"/matches/{mid}/annotations", json=bad_target).status_code == 400
    empty_label = _label_body(types=())
    assert client.post(f"/matches/{mid}/annotations", json=empty_label).status_code == 400
    bad_type = _label_body(types=("spawn_camping",))
    assert client.post(f"/matches/{mid}/annotations", json=bad_type).status_code == 400


def test_annotation_delete_is_tombstone(client, store, baseline_doc):
    mid = _ingest(client, baseline_doc)
    record = client.post(f"/matches/{mid}/annotations", json=_label_body()).json()
    aid = record["annotation_id"]
    assert client.delete(f"/matches/{mid}/annotations/{aid}").status_code == 200
    assert client.get(f"/matches/{mid}/annotations").json()["annotations"] == []
    assert client.delete(f"/matches/{mid}/annotations/{aid}").status_code == 404
    log = (store._annotation_path(mid)).read_text().splitlines()
    assert len(log) == 2  # add + tombstone, nothing physically removed
    assert json.loads(log[0])["op"] == "add"
    assert json.loads(log[1])["op"] == "delete"


def test_annotations_survive_store_restart(tmp_path, baseline_doc):
    data_dir = tmp_path / "data"
    store = MatchStore(data_dir)
    client = TestClient(create_app(store))
    mid = _ingest(client, baseline_doc)
    for k in range(10):
        body = _label_body()
        body["text"] = f"note {k}"
        client.post(f"/matches/{mid}/annotations", json=body)
    reopened = TestClient(create_app(MatchStore(data_dir)))
    listed = reopened.get(f"/matches/{mid}/annotations").json()["annotations"]
    assert len(listed) == 10


def test_concurrent_annotation_posts(store, baseline_doc):
    mid, _ = store.ingest(baseline_doc)
    n = 40
    errors = []

    def post(k):
        try:
            store.add_annotation(mid, _label_body())
        except Exception as exc:  # pragma: no cover
            errors.append(exc)

    threads = [threading.Thread(target=post, args=(k,)) for k in range(n)]
    for t in threads:
        t.start()
    for t in threads:
        t.join()
    assert not errors
    assert len(store.list_annotations(mid)) == n


# ---------------------------------------------------------------------------
# export


def test_export_combines_sources(client, afk_doc):
    mid = _ingest(client, afk_doc)
    client.post(f"/matches/{mid}/annotations", json=_label_body())
    export = client.get(f"/matches/{mid}/labels/export").json()
    sources = [e["source"] for e in export["entries"]]
    assert "algorithm" in sources and "human" in sources
    assert sources == sorted(sources)  # algorithm block precedes human block


def test_export_byte_stable(client, afk_doc):
    mid = _ingest(client, afk_doc)
    client.post(f"/matches/{mid}/annotations", json=_label_body())
    first = client.get(f"/matches/{mid}/labels/export").content
    second = client.get(f"/matches/{mid}/labels/export").content
    assert first == second


def test_export_empty_match(client, baseline_doc):
    mid = _ingest(client, baseline_doc)
    export = client.get(f"/matches/{mid}/labels/export").json()
    assert export["entries"] == []
    assert export["match_id"] == mid


def test_read_endpoints_are_stable_between_writes(client, afk_doc):
    mid = _ingest(client, afk_doc)
    for path, params in [
        (f"/matches/{mid}/summary", None),
        (f"/matches/{mid}/timeline", {"player": "P07"}),
        (f"/matches/{mid}/heatmap", {"player": "P07", "from": 100, "to": 300}),
    ]:
        a = client.get(path, params=params).content
        b = client.get(path, params=params).content
        assert a == b
