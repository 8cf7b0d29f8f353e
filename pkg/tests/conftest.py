from __future__ import annotations

import json

import pytest

from grieferlens.telemetry import MatchTelemetry, match_from_dict

STANDARD_PLAYERS = [
    {"player_id": "P01", "team": "blue", "hero_type": "Fighter", "assigned_position": "top", "report_count": 0},
    {"player_id": "P02", "team": "blue", "hero_type": "Mage", "assigned_position": "mid", "report_count": 0},
    {"player_id": "P03", "team": "blue", "hero_type": "Support", "assigned_position": "bot_support", "report_count": 2},
    {"player_id": "P04", "team": "blue", "hero_type": "Marksman", "assigned_position": "bot_carry", "report_count": 0},
    {"player_id": "P05", "team": "blue", "hero_type": "Assassin", "assigned_position": "jungle", "report_count": 1},
    {"player_id": "P06", "team": "red", "hero_type": "Tank", "assigned_position": "top", "report_count": 0},
    {"player_id": "P07", "team": "red", "hero_type": "Mage", "assigned_position": "mid", "report_count": 0},
    {"player_id": "P08", "team": "red", "hero_type": "Marksman", "assigned_position": "bot_carry", "report_count": 0},
    {"player_id": "P09", "team": "red", "hero_type": "Support", "assigned_position": "bot_support", "report_count": 0},
    {"player_id": "P10", "team": "red", "hero_type": "Fighter", "assigned_position": "jungle", "report_count": 3},
]

SPAWN = {"blue": (0.03, 0.03), "red": (0.97, 0.97)}


def spawn_samples():
    out = []
    for p in STANDARD_PLAYERS:
        x, y = SPAWN[p["team"]]
        out.append({"t": 0, "player_id": p["player_id"], "x": x, "y": y})
    return out


def minimal_doc(duration=600.0):
    return {
        "match_id": "t-min",
        "duration_s": duration,
        "players": [dict(p) for p in STANDARD_PLAYERS],
        "position_samples": spawn_samples(),
        "events": [],
    }


class MatchBuilder:
    """Compact builder for hand-crafted test matches.

    Players without explicit samples sit at their spawn; positions between
    explicit samples interpolate linearly, so a handful of breakpoints is
    enough to script movement.
    """

    def __init__(self, duration=1200.0, match_id="t-built"):
        self.duration = duration
        self.match_id = match_id
        self._samples: list[dict] = []
        self._events: list[dict] = []
        self._scripted: set[str] = set()

    def track(self, pid, points):
        """points: iterable of (t, x, y) breakpoints."""
        self._scripted.add(pid)
        for t, x, y in points:
            self._samples.append({"t": t, "player_id": pid, "x": x, "y": y})
        return self

    def hold(self, pid, x, y):
        return self.track(pid, [(0.0, x, y)])

    def ev(self, t, kind, actor, **payload):
        self._events.append({"t": t, "kind": kind, "actor": actor, **payload})
        return self

    def kill(self, t, killer, victim, x=0.5, y=0.5, assists=()):
        return self.ev(t, "kill", killer, victim=victim, assists=list(assists), x=x, y=y)

    def build(self) -> MatchTelemetry:
        samples = list(self._samples)
        for p in STANDARD_PLAYERS:
            if p["player_id"] not in self._scripted:
                x, y = SPAWN[p["team"]]
                samples.append({"t": 0, "player_id": p["player_id"], "x": x, "y": y})
        samples.sort(key=lambda s: s["t"])
        events = sorted(self._events, key=lambda e: e["t"])
        doc = {
            "match_id": self.match_id,
            "duration_s": self.duration,
            "players": [dict(p) for p in STANDARD_PLAYERS],
            "position_samples": samples,
            "events": events,
        }
        return match_from_dict(doc)


@pytest.fixture
def builder():
    return MatchBuilder


@pytest.fixture
def minimal_match():
    return match_from_dict(minimal_doc())


def dump_doc(doc) -> bytes:
    return json.dumps(doc).encode("utf-8")
