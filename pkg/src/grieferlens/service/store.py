"""Durable match store: telemetry files, cached summaries, annotation logs.

Layout on disk, one directory per match:

    <data_dir>/<match_dir>/telemetry.json          canonical telemetry
    <data_dir>/<match_dir>/summaries-<hash>.json   detector output per config
    <data_dir>/<match_dir>/annotations.ndjson      append-only op log

The annotation log is append-only; deletion writes a tombstone op and the
original record is retained for audit. Every acknowledged append is flushed
and fsynced before returning, so an acknowledged write survives a hard kill.
"""

from __future__ import annotations

import json
import os
import re
import threading
import uuid
from datetime import datetime, timezone
from hashlib import sha1
from pathlib import Path

from ..config import DetectorConfig, default_config
from ..detect import (
    GRIEFER_TYPES,
    run_all_detectors,
    summaries_to_json,
)
from ..errors import GrieferLensError, SchemaViolation
from ..metrics import (
    contribution_series,
    detect_team_fights,
    gold_series,
    jungle_economy_share,
    window_count,
)
from ..spatial import ZoneLayout, default_layout, dwell_heatmap, trajectory
from ..telemetry import MatchTelemetry, parse_match, serialize_match

HOT_CELL_THRESHOLD_S = 30.0  # dwell above this renders in the red band


class NotFound(GrieferLensError):
    code = "not_found"


class Conflict(GrieferLensError):
    code = "conflict"


def _utc_now() -> str:
    return datetime.now(timezone.utc).isoformat(timespec="microseconds")


def _safe_dir_name(match_id: str) -> str:
    safe = re.sub(r"[^A-Za-z0-9._-]", "_", match_id)[:80]
    if safe != match_id or not safe:
        safe = f"{safe}-{sha1(match_id.encode('utf-8')).hexdigest()[:10]}"
    return safe


class MatchStore:
    """Thread-safe persistent store for matches and annotations."""

    def __init__(
        self,
        data_dir: str | Path,
        config: DetectorConfig | None = None,
        layout: ZoneLayout | None = None,
    ):
        self.data_dir = Path(data_dir)
        self.data_dir.mkdir(parents=True, exist_ok=True)
        self.config = config or default_config()
        self.layout = layout or default_layout()
        self.config_hash = self.config.config_hash()
        self._matches: dict[str, MatchTelemetry] = {}
        self._locks: dict[str, threading.Lock] = {}
        self._guard = threading.Lock()

    # -- internals ---------------------------------------------------------

    def _lock(self, match_id: str) -> threading.Lock:
        with self._guard:
            lock = self._locks.get(match_id)
            if lock is None:
                lock = self._locks[match_id] = threading.Lock()
            return lock

    def _dir(self, match_id: str) -> Path:
        return self.data_dir / _safe_dir_name(match_id)

    def _telemetry_path(self, match_id: str) -> Path:
        return self._dir(match_id) / "telemetry.json"

    def _summary_path(self, match_id: str) -> Path:
        return self._dir(match_id) / f"summaries-{self.config_hash}.json"

    def _annotation_path(self, match_id: str) -> Path:
        return self._dir(match_id) / "annotations.ndjson"

    # -- matches -----------------------------------------------------------

    def ingest(self, raw: bytes | str) -> tuple[str, bool]:
        """Validate and store one telemetry document.

        Returns (match_id, created). Re-posting identical content is a no-op;
        content that disagrees with the stored document raises Conflict.
        """
        match = parse_match(raw)
        canonical = serialize_match(match)
        with self._lock(match.match_id):
            path = self._telemetry_path(match.match_id)
            if path.exists():
                if path.read_text(encoding="utf-8") == canonical:
                    return match.match_id, False
                raise Conflict(
                    f"match {match.match_id!r} already ingested with different content"
                )
            path.parent.mkdir(parents=True, exist_ok=True)
            path.write_text(canonical, encoding="utf-8")
            (path.parent / "match_id").write_text(match.match_id, encoding="utf-8")
            self._matches[match.match_id] = match
            self._ensure_summaries(match)
        return match.match_id, True

    def match_ids(self) -> list[str]:
        out = []
        for child in sorted(self.data_dir.iterdir()):
            marker = child / "match_id"
            telemetry = child / "telemetry.json"
            if marker.exists():
                out.append(marker.read_text(encoding="utf-8"))
            elif telemetry.exists():
                try:
                    out.append(json.loads(telemetry.read_text(encoding="utf-8"))["match_id"])
                except (json.JSONDecodeError, KeyError):
                    continue
        return out

    def get_match(self, match_id: str) -> MatchTelemetry:
        cached = self._matches.get(match_id)
        if cached is not None:
            return cached
        path = self._telemetry_path(match_id)
        if not path.exists():
            raise NotFound(f"unknown match {match_id!r}")
        match = parse_match(path.read_bytes())
        self._matches[match_id] = match
        return match

    def _ensure_summaries(self, match: MatchTelemetry) -> dict:
        path = self._summary_path(match.match_id)
        if path.exists():
            return json.loads(path.read_text(encoding="utf-8"))
        summaries = run_all_detectors(match, self.layout, self.config)
        doc_text = summaries_to_json(summaries, self.config_hash, match.match_id)
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(doc_text, encoding="utf-8")
        return json.loads(doc_text)

    def summaries_doc(self, match_id: str) -> dict:
        return self._ensure_summaries(self.get_match(match_id))

    # -- replay payloads -----------------------------------------------------

    def timeline(self, match_id: str, player_id: str) -> dict:
        match = self.get_match(match_id)
        if player_id not in match.roster:
            raise NotFound(f"unknown player {player_id!r}")
        summaries = self.summaries_doc(match_id)
        key_events: dict[str, list[dict]] = {p.player_id: [] for p in match.players}
        for e in match.events:
            if e.kind == "kill":
                key_events[e.actor].append({"t": e.t, "kind": "kill", "victim": e.victim})
                key_events[e.victim].append({"t": e.t, "kind": "death", "killer": e.actor})
            elif e.kind in ("objective", "recall", "respawn"):
                entry: dict = {"t": e.t, "kind": e.kind}
                if e.kind == "objective":
                    entry["subtype"] = e.subtype
                    entry["team"] = e.team
                key_events[e.actor].append(entry)
        fights = [f.to_dict() for f in detect_team_fights(match, self.config.team_fight)]
        window_s = self.config.contribution_window_s
        n = window_count(match.duration_s, window_s)
        jungle_values = [
            jungle_economy_share(
                match,
                player_id,
                k * window_s,
                min((k + 1) * window_s, match.duration_s),
            )
            for k in range(n)
        ]
        suspicious: dict[str, dict[str, list]] = {}
        for player_doc in summaries["players"]:
            ranges = {
                f["griefer_type"]: f["time_ranges"] for f in player_doc["findings"]
            }
            suspicious[player_doc["player_id"]] = ranges
        return {
            "match_id": match_id,
            "config_hash": self.config_hash,
            "duration_s": match.duration_s,
            "player_id": player_id,
            "key_events": key_events,
            "team_fights": fights,
            "series": {
                "contribution": contribution_series(
                    match, player_id, self.config.weights, window_s
                ).to_dict(),
                "gold": gold_series(match, player_id, window_s).to_dict(),
                "jungle_share": {
                    "metric_id": "jungle_share",
                    "window_s": window_s,
                    "values": jungle_values,
                },
            },
            "suspicious_ranges": suspicious,
        }

    def heatmap(
        self, match_id: str, player_id: str, t0: float, t1: float, grid_n: int = 64
    ) -> dict:
        if grid_n < 1 or grid_n > 512:
            raise SchemaViolation(f"grid must be in [1, 512], got {grid_n}")
        match = self.get_match(match_id)
        if player_id not in match.roster:
            raise NotFound(f"unknown player {player_id!r}")
        hm = dwell_heatmap(match, self.layout, player_id, t0, t1, grid_n)
        cells = hm.cells.tolist()
        hot = (hm.cells > HOT_CELL_THRESHOLD_S).tolist()
        return {
            "match_id": match_id,
            "player_id": player_id,
            "from": t0,
            "to": t1,
            "grid_n": grid_n,
            "hot_threshold_s": HOT_CELL_THRESHOLD_S,
            "cells": cells,
            "hot": hot,
        }

    def player_trajectory(
        self, match_id: str, player_id: str, t0: float, t1: float, hz: float = 1.0
    ) -> dict:
        match = self.get_match(match_id)
        if player_id not in match.roster:
            raise NotFound(f"unknown player {player_id!r}")
        lines = trajectory(match, player_id, t0, t1, hz)
        return {
            "match_id": match_id,
            "player_id": player_id,
            "from": t0,
            "to": t1,
            "polylines": [[[t, x, y] for t, x, y in line] for line in lines],
        }

    # -- annotations ---------------------------------------------------------

    def _validate_annotation(self, match: MatchTelemetry, body: dict) -> dict:
        if not isinstance(body, dict):
            raise SchemaViolation("annotation must be an object", "$")
        author = body.get("author")
        if not isinstance(author, str) or not author:
            raise SchemaViolation("author must be a non-empty string", "$.author")
        target = body.get("target_player")
        if target not in match.roster:
            raise SchemaViolation(f"unknown target_player {target!r}", "$.target_player")
        kind = body.get("kind")
        if kind not in ("label", "note"):
            raise SchemaViolation("kind must be 'label' or 'note'", "$.kind")
        types = body.get("griefer_types", [])
        if not isinstance(types, list) or any(t not in GRIEFER_TYPES for t in types):
            raise SchemaViolation(
                f"griefer_types must be a list drawn from {GRIEFER_TYPES}",
                "$.griefer_types",
            )
        if kind == "label" and not types:
            raise SchemaViolation("a label needs at least one griefer type", "$.griefer_types")
        time_range = body.get("time_range")
        if time_range is not None:
            try:
                t0, t1 = float(time_range[0]), float(time_range[1])
            except (TypeError, ValueError, IndexError) as exc:
                raise SchemaViolation("time_range must be [t0, t1]", "$.time_range") from exc
            if not (0 <= t0 <= t1 <= match.duration_s):
                raise SchemaViolation(
                    f"time_range [{t0}, {t1}] outside [0, {match.duration_s}]",
                    "$.time_range",
                )
            time_range = [t0, t1]
        tags = body.get("tags", [])
        if not isinstance(tags, list) or any(not isinstance(t, str) for t in tags):
            raise SchemaViolation("tags must be a list of strings", "$.tags")
        text = body.get("text", "")
        if not isinstance(text, str):
            raise SchemaViolation("text must be a string", "$.text")
        if kind == "note" and not text:
            raise SchemaViolation("a note needs non-empty text", "$.text")
        return {
            "annotation_id": uuid.uuid4().hex,
            "match_id": match.match_id,
            "author": author,
            "created_at": _utc_now(),
            "target_player": target,
            "kind": kind,
            "griefer_types": sorted(types),
            "time_range": time_range,
            "tags": list(tags),
            "text": text,
        }

    def _append_op(self, match_id: str, op: dict) -> None:
        path = self._annotation_path(match_id)
        line = json.dumps(op, separators=(",", ":"))
        with open(path, "a", encoding="utf-8") as fh:
            fh.write(line + "\n")
            fh.flush()
            os.fsync(fh.fileno())

    def _read_ops(self, match_id: str) -> list[dict]:
        path = self._annotation_path(match_id)
        if not path.exists():
            return []
        ops = []
        with open(path, "r", encoding="utf-8") as fh:
            for line in fh:
                line = line.strip()
                if line:
                    ops.append(json.loads(line))
        return ops

    def add_annotation(self, match_id: str, body: dict) -> dict:
        match = self.get_match(match_id)
        record = self._validate_annotation(match, body)
        with self._lock(match_id):
            self._append_op(match_id, {"op": "add", "record": record})
        return record

    def list_annotations(self, match_id: str) -> list[dict]:
        self.get_match(match_id)
        live: dict[str, dict] = {}
        for op in self._read_ops(match_id):
            if op["op"] == "add":
                live[op["record"]["annotation_id"]] = op["record"]
            elif op["op"] == "delete":
                live.pop(op["annotation_id"], None)
        return sorted(live.values(), key=lambda r: (r["created_at"], r["annotation_id"]))

    def delete_annotation(self, match_id: str, annotation_id: str) -> None:
        self.get_match(match_id)
        with self._lock(match_id):
            live = {r["annotation_id"] for r in self.list_annotations(match_id)}
            if annotation_id not in live:
                raise NotFound(f"unknown annotation {annotation_id!r}")
            self._append_op(
                match_id,
                {"op": "delete", "annotation_id": annotation_id, "deleted_at": _utc_now()},
            )

    # -- export ---------------------------------------------------------------

    def export_labels(self, match_id: str) -> dict:
        summaries = self.summaries_doc(match_id)
        entries: list[dict] = []
        for player_doc in summaries["players"]:
            for finding in player_doc["findings"]:
                entries.append(
                    {
                        "source": "algorithm",
                        "player_id": finding["player_id"],
                        "griefer_type": finding["griefer_type"],
                        "severity": finding["severity"],
                        "time_ranges": finding["time_ranges"],
                        "explanation": finding["explanation"],
                    }
                )
        for record in self.list_annotations(match_id):
            entries.append(
                {
                    "source": "human",
                    "annotation_id": record["annotation_id"],
                    "author": record["author"],
                    "created_at": record["created_at"],
                    "target_player": record["target_player"],
                    "kind": record["kind"],
                    "griefer_types": record["griefer_types"],
                    "time_range": record["time_range"],
                    "tags": record["tags"],
                    "text": record["text"],
                }
            )
        return {
            "match_id": match_id,
            "config_hash": self.config_hash,
            "entries": entries,
        }
