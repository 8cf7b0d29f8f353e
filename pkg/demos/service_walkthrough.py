"""Drive the HTTP service end to end: ingest, review, label, export.

Starts the service in a background thread on a spare port, ingests a match
with an injected lane stealer, walks the endpoints a reviewer UI would call,
posts a human label, and reads the combined export.
"""

import json
import socket
import tempfile
import threading
import time

import httpx
import uvicorn

from grieferlens.service import MatchStore, create_app
from grieferlens.simgen import Injection, Scenario, generate_match

with socket.socket() as s:
    s.bind(("127.0.0.1", 0))
    port = s.getsockname()[1]

data_dir = tempfile.mkdtemp(prefix="grieferlens-demo-")
server = uvicorn.Server(
    uvicorn.Config(create_app(MatchStore(data_dir)), host="127.0.0.1", port=port, log_level="error")
)
threading.Thread(target=server.run, daemon=True).start()
base = f"http://127.0.0.1:{port}"
while True:
    try:
        httpx.get(f"{base}/health", timeout=0.5)
        break
    except httpx.HTTPError:
        time.sleep(0.1)

telemetry, truth = generate_match(
    Scenario(seed=404, injections=(Injection("P02", "lane_stealing", {"lane": "bot"}),))
)
match_id = httpx.post(f"{base}/matches", content=telemetry, timeout=30).json()["match_id"]
print(f"ingested {match_id}")

summary = httpx.get(f"{base}/matches/{match_id}/summary", timeout=30).json()
flagged = [p for p in summary["players"] if p["findings"]]
for p in flagged:
    print(f"\nflagged: {p['player_id']} -> {p['suspicion_paragraph']}")

finding = flagged[0]["findings"][0]
t0, t1 = finding["time_ranges"][0][0], finding["time_ranges"][-1][1]
timeline = httpx.get(
    f"{base}/matches/{match_id}/timeline", params={"player": flagged[0]["player_id"]}, timeout=30
).json()
print(f"\ntimeline has {len(timeline['series']['contribution']['values'])} windows"
      f" and {len(timeline['team_fights'])} combat clusters")

heatmap = httpx.get(
    f"{base}/matches/{match_id}/heatmap",
    params={"player": flagged[0]["player_id"], "from": t0, "to": t1},
    timeout=30,
).json()
hot = sum(cell for row in heatmap["hot"] for cell in row)
print(f"heatmap over [{t0:.0f}, {t1:.0f}]: {hot} hot cell(s)")

label = httpx.post(
    f"{base}/matches/{match_id}/annotations",
    json={
        "author": "demo-reviewer",
        "target_player": flagged[0]["player_id"],
        "kind": "label",
        "griefer_types": [finding["griefer_type"]],
        "time_range": [t0, t1],
        "text": "confirmed after replay review",
    },
    timeout=30,
).json()
print(f"labeled via annotation {label['annotation_id'][:8]}")

export = httpx.get(f"{base}/matches/{match_id}/labels/export", timeout=30).json()
print("\nexport entries:")
for entry in export["entries"]:
    owner = entry.get("player_id") or entry.get("target_player")
    kinds = entry.get("griefer_type") or ",".join(entry.get("griefer_types", []))
    print(f"  [{entry['source']:<9}] {owner} {kinds}")

server.should_exit = True
print(f"\ndata kept in {data_dir}")
