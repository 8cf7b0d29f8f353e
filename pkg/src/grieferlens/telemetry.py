"""Match telemetry data model, file format, and time-indexed access.

A match is a fixed ten-player roster plus two time-sorted streams: position
samples and game events. Everything is validated up front; after parsing the
record is immutable and safe to share across threads. Positions between
samples are linearly interpolated, with constant extrapolation before the
first and after the last sample.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import (
    InvariantViolation,
    MalformedInput,
    NoSamples,
    SchemaViolation,
    UnknownPlayer,
)

TEAMS = ("blue", "red")
HERO_TYPES = ("Tank", "Fighter", "Assassin", "Mage", "Marksman", "Support")
POSITIONS = ("top", "jungle", "mid", "bot_carry", "bot_support")
EVENT_KINDS = ("kill", "damage", "heal", "cs", "gold", "objective", "recall", "respawn")
CS_SOURCES = ("top", "mid", "bot", "jungle_blue", "jungle_red")
OBJECTIVE_SUBTYPES = ("tower", "crystal", "dragon")

ROSTER_SIZE = 10
TEAM_SIZE = 5


@dataclass(frozen=True)
class PlayerInfo:
    player_id: str
    team: str
    hero_type: str
    assigned_position: str
    report_count: int


@dataclass(frozen=True)
class PositionSample:
    t: float
    player_id: str
    x: float
    y: float


@dataclass(frozen=True)
class GameEvent:
    """One tagged game event; fields beyond (t, kind, actor) are kind-specific.

    kill      -> victim, assists, x, y
    damage    -> target, amount, x, y   (target may be a non-roster objective id)
    heal      -> target, amount
    cs        -> source (lane/jungle), gold
    gold      -> amount, source (free-form string)
    objective -> subtype, team, x, y
    recall / respawn -> no payload
    """

    t: float
    kind: str
    actor: str
    victim: str | None = None
    assists: tuple[str, ...] = ()
    target: str | None = None
    amount: float | None = None
    gold: float | None = None
    source: str | None = None
    subtype: str | None = None
    team: str | None = None
    x: float | None = None
    y: float | None = None


@dataclass
class MatchTelemetry:
    """Immutable record of one match. Do not mutate after construction."""

    match_id: str
    duration_s: float
    players: tuple[PlayerInfo, ...]
    position_samples: tuple[PositionSample, ...]
    events: tuple[GameEvent, ...]
    map_size: float = 1.0

    roster: dict[str, PlayerInfo] = field(init=False, repr=False, compare=False)
    _tracks: dict[str, tuple[np.ndarray, np.ndarray, np.ndarray]] = field(
        init=False, repr=False, compare=False
    )
    _events_by_kind: dict[str, tuple[GameEvent, ...]] = field(
        init=False, repr=False, compare=False
    )

    def __post_init__(self):
        self.roster = {p.player_id: p for p in self.players}
        tracks: dict[str, list[list[float]]] = {p.player_id: [[], [], []] for p in self.players}
        for s in self.position_samples:
            track = tracks.get(s.player_id)
            if track is not None:
                track[0].append(s.t)
                track[1].append(s.x)
                track[2].append(s.y)
        self._tracks = {
            pid: (np.asarray(ts), np.asarray(xs), np.asarray(ys))
            for pid, (ts, xs, ys) in tracks.items()
        }
        by_kind: dict[str, list[GameEvent]] = {k: [] for k in EVENT_KINDS}
        for e in self.events:
            by_kind[e.kind].append(e)
        self._events_by_kind = {k: tuple(v) for k, v in by_kind.items()}

    def events_of_kind(self, kind: str) -> tuple[GameEvent, ...]:
        return self._events_by_kind[kind]

    def team_of(self, player_id: str) -> str:
        info = self.roster.get(player_id)
        if info is None:
            raise UnknownPlayer(f"unknown player {player_id!r}")
        return info.team

    def players_of_team(self, team: str) -> list[PlayerInfo]:
        return [p for p in self.players if p.team == team]


# ---------------------------------------------------------------------------
# Schema helpers

def _require(obj: dict, key: str, path: str):
    if not isinstance(obj, dict):
        raise SchemaViolation("expected an object", path)
    if key not in obj:
        raise SchemaViolation(f"missing field {key!r}", path)
    return obj[key]


def _number(value, path: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise SchemaViolation("expected a number", path)
    value = float(value)
    if not math.isfinite(value):
        raise SchemaViolation("expected a finite number", path)
    return value


def _string(value, path: str) -> str:
    if not isinstance(value, str):
        raise SchemaViolation("expected a string", path)
    return value


def _enum(value, allowed, path: str) -> str:
    value = _string(value, path)
    if value not in allowed:
        raise SchemaViolation(f"expected one of {sorted(allowed)}, got {value!r}", path)
    return value


def _coordinate(value, path: str) -> float:
    v = _number(value, path)
    if not 0.0 <= v <= 1.0:
        raise InvariantViolation(f"coordinate {v} outside [0, 1]", path)
    return v


def _amount(value, path: str) -> float:
    v = _number(value, path)
    if v < 0:
        raise InvariantViolation(f"amount {v} is negative", path)
    return v


# ---------------------------------------------------------------------------
# Parsing and validation

def _parse_player(obj, path: str) -> PlayerInfo:
    pid = _string(_require(obj, "player_id", path), f"{path}.player_id")
    team = _enum(_require(obj, "team", path), TEAMS, f"{path}.team")
    hero = _enum(_require(obj, "hero_type", path), HERO_TYPES, f"{path}.hero_type")
    pos = _enum(
        _require(obj, "assigned_position", path), POSITIONS, f"{path}.assigned_position"
    )
    rc = _require(obj, "report_count", path)
    if isinstance(rc, bool) or not isinstance(rc, int):
        raise SchemaViolation("expected an integer", f"{path}.report_count")
    if rc < 0:
        raise InvariantViolation(f"report_count {rc} is negative", f"{path}.report_count")
    return PlayerInfo(pid, team, hero, pos, rc)


def _parse_sample(obj, path: str, duration_s: float) -> PositionSample:
    t = _number(_require(obj, "t", path), f"{path}.t")
    if not 0.0 <= t <= duration_s:
        raise InvariantViolation(f"timestamp {t} outside [0, {duration_s}]", f"{path}.t")
    pid = _string(_require(obj, "player_id", path), f"{path}.player_id")
    x = _coordinate(_require(obj, "x", path), f"{path}.x")
    y = _coordinate(_require(obj, "y", path), f"{path}.y")
    return PositionSample(t, pid, x, y)


def _parse_event(obj, path: str, duration_s: float) -> GameEvent:
    t = _number(_require(obj, "t", path), f"{path}.t")
    if not 0.0 <= t <= duration_s:
        raise InvariantViolation(f"timestamp {t} outside [0, {duration_s}]", f"{path}.t")
    kind = _enum(_require(obj, "kind", path), EVENT_KINDS, f"{path}.kind")
    actor = _string(_require(obj, "actor", path), f"{path}.actor")

    if kind == "kill":
        victim = _string(_require(obj, "victim", path), f"{path}.victim")
        raw_assists = obj.get("assists", [])
        if not isinstance(raw_assists, list):
            raise SchemaViolation("expected a list", f"{path}.assists")
        assists = tuple(
            _string(a, f"{path}.assists[{i}]") for i, a in enumerate(raw_assists)
        )
        x = _coordinate(_require(obj, "x", path), f"{path}.x")
        y = _coordinate(_require(obj, "y", path), f"{path}.y")
        return GameEvent(t, kind, actor, victim=victim, assists=assists, x=x, y=y)
    if kind == "damage":
        target = _string(_require(obj, "target", path), f"{path}.target")
        amount = _amount(_require(obj, "amount", path), f"{path}.amount")
        x = _coordinate(_require(obj, "x", path), f"{path}.x")
        y = _coordinate(_require(obj, "y", path), f"{path}.y")
        return GameEvent(t, kind, actor, target=target, amount=amount, x=x, y=y)
    if kind == "heal":
        target = _string(_require(obj, "target", path), f"{path}.target")
        amount = _amount(_require(obj, "amount", path), f"{path}.amount")
        return GameEvent(t, kind, actor, target=target, amount=amount)
    if kind == "cs":
        source = _enum(_require(obj, "source", path), CS_SOURCES, f"{path}.source")
        gold = _amount(_require(obj, "gold", path), f"{path}.gold")
        return GameEvent(t, kind, actor, source=source, gold=gold)
    if kind == "gold":
        amount = _amount(_require(obj, "amount", path), f"{path}.amount")
        source = _string(_require(obj, "source", path), f"{path}.source")
        return GameEvent(t, kind, actor, amount=amount, source=source)
    if kind == "objective":
        subtype = _enum(_require(obj, "subtype", path), OBJECTIVE_SUBTYPES, f"{path}.subtype")
        team = _enum(_require(obj, "team", path), TEAMS, f"{path}.team")
        x = _coordinate(_require(obj, "x", path), f"{path}.x")
        y = _coordinate(_require(obj, "y", path), f"{path}.y")
        return GameEvent(t, kind, actor, subtype=subtype, team=team, x=x, y=y)
    # recall / respawn carry no payload
    return GameEvent(t, kind, actor)


def match_from_dict(doc: dict, path: str = "$") -> MatchTelemetry:
    """Build and fully validate a MatchTelemetry from a decoded JSON object."""
    match_id = _string(_require(doc, "match_id", path), f"{path}.match_id")
    if not match_id:
        raise InvariantViolation("match_id must be non-empty", f"{path}.match_id")
    duration_s = _number(_require(doc, "duration_s", path), f"{path}.duration_s")
    if duration_s <= 0:
        raise InvariantViolation(
            f"duration_s must be > 0, got {duration_s}", f"{path}.duration_s"
        )

    raw_players = _require(doc, "players", path)
    if not isinstance(raw_players, list):
        raise SchemaViolation("expected a list", f"{path}.players")
    if len(raw_players) != ROSTER_SIZE:
        raise InvariantViolation(
            f"players: expected {ROSTER_SIZE}, got {len(raw_players)}", f"{path}.players"
        )
    players = tuple(
        _parse_player(p, f"{path}.players[{i}]") for i, p in enumerate(raw_players)
    )

    seen_ids: set[str] = set()
    for i, p in enumerate(players):
        if p.player_id in seen_ids:
            raise InvariantViolation(
                f"duplicate player_id {p.player_id!r}", f"{path}.players[{i}]"
            )
        seen_ids.add(p.player_id)
    for team in TEAMS:
        members = [p for p in players if p.team == team]
        if len(members) != TEAM_SIZE:
            raise InvariantViolation(
                f"team {team!r}: expected {TEAM_SIZE} players, got {len(members)}",
                f"{path}.players",
            )
        positions = sorted(p.assigned_position for p in members)
        if positions != sorted(POSITIONS):
            raise InvariantViolation(
                f"team {team!r} must field one of each assigned_position, got {positions}",
                f"{path}.players",
            )

    raw_samples = _require(doc, "position_samples", path)
    if not isinstance(raw_samples, list):
        raise SchemaViolation("expected a list", f"{path}.position_samples")
    samples = []
    prev_t = -math.inf
    for i, s in enumerate(raw_samples):
        spath = f"{path}.position_samples[{i}]"
        sample = _parse_sample(s, spath, duration_s)
        if sample.player_id not in seen_ids:
            raise UnknownPlayer(f"unknown player {sample.player_id!r}", f"{spath}.player_id")
        if sample.t < prev_t:
            raise InvariantViolation(
                f"timestamps must be nondecreasing ({sample.t} after {prev_t})", f"{spath}.t"
            )
        prev_t = sample.t
        samples.append(sample)

    raw_events = _require(doc, "events", path)
    if not isinstance(raw_events, list):
        raise SchemaViolation("expected a list", f"{path}.events")
    events = []
    prev_t = -math.inf
    dead: dict[str, int] = {}
    for i, e in enumerate(raw_events):
        epath = f"{path}.events[{i}]"
        event = _parse_event(e, epath, duration_s)
        if event.t < prev_t:
            raise InvariantViolation(
                f"timestamps must be nondecreasing ({event.t} after {prev_t})", f"{epath}.t"
            )
        prev_t = event.t
        if event.actor not in seen_ids:
            raise UnknownPlayer(f"unknown player {event.actor!r}", f"{epath}.actor")
        if event.kind == "kill":
            if event.victim not in seen_ids:
                raise UnknownPlayer(f"unknown player {event.victim!r}", f"{epath}.victim")
            for j, a in enumerate(event.assists):
                if a not in seen_ids:
                    raise UnknownPlayer(f"unknown player {a!r}", f"{epath}.assists[{j}]")
            dead[event.victim] = dead.get(event.victim, 0) + 1
        elif event.kind == "heal":
            if event.target not in seen_ids:
                raise UnknownPlayer(f"unknown player {event.target!r}", f"{epath}.target")
        elif event.kind == "respawn":
            if dead.get(event.actor, 0) <= 0:
                raise InvariantViolation(
                    f"respawn for {event.actor!r} without a preceding kill", epath
                )
            dead[event.actor] -= 1
        # damage targets may name non-roster objectives (towers, monsters)
        events.append(event)

    return MatchTelemetry(
        match_id=match_id,
        duration_s=duration_s,
        players=players,
        position_samples=tuple(samples),
        events=tuple(events),
    )


def parse_match(raw: bytes | str) -> MatchTelemetry:
    """Parse and validate one UTF-8 JSON telemetry document."""
    if isinstance(raw, bytes):
        try:
            raw = raw.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise MalformedInput(f"not valid UTF-8: {exc}") from exc
    try:
        doc = json.loads(raw)
    except json.JSONDecodeError as exc:
        raise MalformedInput(f"invalid JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise SchemaViolation("top level must be an object", "$")
    return match_from_dict(doc)


# ---------------------------------------------------------------------------
# Serialization

def event_to_dict(e: GameEvent) -> dict:
    out: dict = {"t": e.t, "kind": e.kind, "actor": e.actor}
    if e.kind == "kill":
        out.update(victim=e.victim, assists=list(e.assists), x=e.x, y=e.y)
    elif e.kind == "damage":
        out.update(target=e.target, amount=e.amount, x=e.x, y=e.y)
    elif e.kind == "heal":
        out.update(target=e.target, amount=e.amount)
    elif e.kind == "cs":
        out.update(source=e.source, gold=e.gold)
    elif e.kind == "gold":
        out.update(amount=e.amount, source=e.source)
    elif e.kind == "objective":
        out.update(subtype=e.subtype, team=e.team, x=e.x, y=e.y)
    return out


def match_to_dict(match: MatchTelemetry) -> dict:
    return {
        "match_id": match.match_id,
        "duration_s": match.duration_s,
        "players": [
            {
                "player_id": p.player_id,
                "team": p.team,
                "hero_type": p.hero_type,
                "assigned_position": p.assigned_position,
                "report_count": p.report_count,
            }
            for p in match.players
        ],
        "position_samples": [
            {"t": s.t, "player_id": s.player_id, "x": s.x, "y": s.y}
            for s in match.position_samples
        ],
        "events": [event_to_dict(e) for e in match.events],
    }


def serialize_match(match: MatchTelemetry) -> str:
    """Canonical JSON form; parse_match(serialize_match(m)) == structurally m."""
    return json.dumps(match_to_dict(match), separators=(",", ":"))


# ---------------------------------------------------------------------------
# Time-indexed access

def alive_intervals(match: MatchTelemetry, player_id: str) -> list[tuple[float, float]]:
    """Disjoint, sorted [start, end] intervals during which the player is alive.

    Alive from t=0 until the first kill naming them as victim, alive again at
    each of their respawn events, and through duration_s when not terminated
    by a death.
    """
    if player_id not in match.roster:
        raise UnknownPlayer(f"unknown player {player_id!r}")
    intervals: list[tuple[float, float]] = []
    alive_since: float | None = 0.0
    for e in match.events:
        if e.kind == "kill" and e.victim == player_id and alive_since is not None:
            intervals.append((alive_since, e.t))
            alive_since = None
        elif e.kind == "respawn" and e.actor == player_id and alive_since is None:
            alive_since = e.t
    if alive_since is not None:
        intervals.append((alive_since, match.duration_s))
    return intervals


def _track(match: MatchTelemetry, player_id: str):
    if player_id not in match.roster:
        raise UnknownPlayer(f"unknown player {player_id!r}")
    ts, xs, ys = match._tracks[player_id]
    if ts.size == 0:
        raise NoSamples(f"player {player_id!r} has no position samples")
    return ts, xs, ys


def position_at(match: MatchTelemetry, player_id: str, t: float) -> tuple[float, float]:
    """Interpolated position at time t; clamped to first/last sample outside."""
    ts, xs, ys = _track(match, player_id)
    return float(np.interp(t, ts, xs)), float(np.interp(t, ts, ys))


def positions_at(match: MatchTelemetry, player_id: str, times: np.ndarray) -> np.ndarray:
    """Vectorized position_at: returns an (n, 2) array for an array of times."""
    ts, xs, ys = _track(match, player_id)
    return np.stack([np.interp(times, ts, xs), np.interp(times, ts, ys)], axis=1)


def resample_positions(match: MatchTelemetry, player_id: str, hz: float) -> np.ndarray:
    """Positions on the fixed grid t = 0, 1/hz, ... <= duration_s as (t, x, y) rows."""
    if hz <= 0:
        raise ValueError("hz must be > 0")
    n = int(math.floor(match.duration_s * hz + 1e-9)) + 1
    times = np.arange(n) / hz
    pos = positions_at(match, player_id, times)
    return np.column_stack([times, pos])
