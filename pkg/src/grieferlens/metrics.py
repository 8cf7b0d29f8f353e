"""Windowed per-player metrics and team-fight detection.

Series windows partition [0, duration] into half-open buckets
[k*w, (k+1)*w); the final bucket absorbs events at exactly t = duration so
bucketing is an exact partition of every event stream. Ad-hoc [t0, t1)
windows follow the same convention: the end is exclusive unless it equals the
match duration.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .errors import BadTime, BadWindow, UnknownPlayer
from .telemetry import MatchTelemetry

JUNGLE_SOURCES = ("jungle_blue", "jungle_red")
LANES = ("top", "mid", "bot")

STAGE_EARLY = "early"
STAGE_MID = "mid"
STAGE_LATE = "late"


@dataclass(frozen=True)
class ContributionWeights:
    """Composition of the per-window contribution score."""

    damage: float = 1.0
    objective_damage: float = 1.0
    heal: float = 1.0
    gold: float = 0.5
    cs: float = 0.5

    def __post_init__(self):
        values = (self.damage, self.objective_damage, self.heal, self.gold, self.cs)
        if any(v < 0 for v in values):
            raise ValueError("contribution weights must be nonnegative")
        if not any(v > 0 for v in values):
            raise ValueError("at least one contribution weight must be positive")


@dataclass
class MetricSeries:
    metric_id: str
    window_s: float
    values: list[float]

    def to_dict(self) -> dict:
        return {
            "metric_id": self.metric_id,
            "window_s": self.window_s,
            "values": list(self.values),
        }


@dataclass(frozen=True)
class TeamFightParams:
    cluster_radius: float = 0.12
    time_gap: float = 10.0
    min_duration: float = 5.0
    min_per_team: int = 2


@dataclass(frozen=True)
class TeamFight:
    t_start: float
    t_end: float
    centroid: tuple[float, float]
    participants: frozenset[str] = field(default_factory=frozenset)

    def to_dict(self) -> dict:
        return {
            "t_start": self.t_start,
            "t_end": self.t_end,
            "centroid": [self.centroid[0], self.centroid[1]],
            "participants": sorted(self.participants),
        }


# ---------------------------------------------------------------------------
# Window helpers

def window_count(duration_s: float, window_s: float) -> int:
    return max(1, math.ceil(duration_s / window_s - 1e-9))


def window_index(t: float, window_s: float, n_windows: int) -> int:
    return min(int(t // window_s), n_windows - 1)


def _check_player(match: MatchTelemetry, player_id: str) -> None:
    if player_id not in match.roster:
        raise UnknownPlayer(f"unknown player {player_id!r}")


def _check_window(match: MatchTelemetry, t0: float, t1: float) -> None:
    if t0 > t1:
        raise BadWindow(f"window start {t0} after end {t1}")
    if t0 < 0 or t1 > match.duration_s:
        raise BadWindow(f"window [{t0}, {t1}] outside [0, {match.duration_s}]")


def _in_window(t: float, t0: float, t1: float, duration_s: float) -> bool:
    # Half-open [t0, t1); a window ending at match end also takes t == t1.
    return (t0 <= t < t1) or (t == t1 and t1 >= duration_s)


# ---------------------------------------------------------------------------
# Series

def _raw_contribution(
    match: MatchTelemetry, weights: ContributionWeights, window_s: float
) -> dict[str, list[float]]:
    n = window_count(match.duration_s, window_s)
    raw = {p.player_id: [0.0] * n for p in match.players}
    for e in match.events:
        row = raw.get(e.actor)
        if row is None:
            continue
        k = window_index(e.t, window_s, n)
        if e.kind == "damage":
            if e.target in match.roster:
                row[k] += weights.damage * e.amount
            else:
                row[k] += weights.objective_damage * e.amount
        elif e.kind == "heal":
            row[k] += weights.heal * e.amount
        elif e.kind == "gold":
            row[k] += weights.gold * e.amount
        elif e.kind == "cs":
            row[k] += weights.cs * e.gold
    return raw


def contribution_series(
    match: MatchTelemetry,
    player_id: str,
    weights: ContributionWeights | None = None,
    window_s: float = 20.0,
) -> MetricSeries:
    """Team-max-normalized contribution per window, in [0, 1].

    The raw score is a weighted sum of the player's damage (champion and
    objective), healing, gold and creep gold inside each window; it is then
    divided by the window maximum across the player's own team (0 when the
    whole team is silent). Low values are what the timeline renders as
    inactivity.
    """
    _check_player(match, player_id)
    if window_s <= 0:
        raise BadWindow(f"window_s must be > 0, got {window_s}")
    weights = weights or ContributionWeights()
    raw = _raw_contribution(match, weights, window_s)
    team = match.team_of(player_id)
    teammates = [p.player_id for p in match.players_of_team(team)]
    values = []
    for k, mine in enumerate(raw[player_id]):
        team_max = max(raw[q][k] for q in teammates)
        values.append(mine / team_max if team_max > 0 else 0.0)
    return MetricSeries("contribution", window_s, values)


def gold_series(
    match: MatchTelemetry, player_id: str, window_s: float = 20.0
) -> MetricSeries:
    """Gold earned per window (gold events plus creep gold); exact partition."""
    _check_player(match, player_id)
    if window_s <= 0:
        raise BadWindow(f"window_s must be > 0, got {window_s}")
    n = window_count(match.duration_s, window_s)
    values = [0.0] * n
    for e in match.events:
        if e.actor != player_id:
            continue
        if e.kind == "gold":
            values[window_index(e.t, window_s, n)] += e.amount
        elif e.kind == "cs":
            values[window_index(e.t, window_s, n)] += e.gold
    return MetricSeries("gold", window_s, values)


def jungle_gold(match: MatchTelemetry, player_id: str, t0: float, t1: float) -> float:
    """Creep gold from jungle sources earned by the player inside [t0, t1)."""
    _check_player(match, player_id)
    _check_window(match, t0, t1)
    total = 0.0
    for e in match.events_of_kind("cs"):
        if (
            e.actor == player_id
            and e.source in JUNGLE_SOURCES
            and _in_window(e.t, t0, t1, match.duration_s)
        ):
            total += e.gold
    return total


def jungle_economy_share(
    match: MatchTelemetry, player_id: str, t0: float, t1: float
) -> float:
    """Player's fraction of their team's jungle creep gold in the window."""
    _check_player(match, player_id)
    _check_window(match, t0, t1)
    team = match.team_of(player_id)
    mine = 0.0
    team_total = 0.0
    for e in match.events_of_kind("cs"):
        if e.source not in JUNGLE_SOURCES:
            continue
        if not _in_window(e.t, t0, t1, match.duration_s):
            continue
        info = match.roster.get(e.actor)
        if info is None or info.team != team:
            continue
        team_total += e.gold
        if e.actor == player_id:
            mine += e.gold
    return mine / team_total if team_total > 0 else 0.0


def lane_cs_stats(
    match: MatchTelemetry, lane: str, t0: float, t1: float
) -> dict[str, tuple[int, float]]:
    """(cs_count, cs_gold) per roster player for one lane inside [t0, t1)."""
    if lane not in LANES:
        raise ValueError(f"lane must be one of {LANES}, got {lane!r}")
    _check_window(match, t0, t1)
    out = {p.player_id: (0, 0.0) for p in match.players}
    for e in match.events_of_kind("cs"):
        if e.source != lane or not _in_window(e.t, t0, t1, match.duration_s):
            continue
        count, gold = out[e.actor]
        out[e.actor] = (count + 1, gold + e.gold)
    return out


# ---------------------------------------------------------------------------
# Team fights

def _fight_events(match: MatchTelemetry):
    for e in match.events:
        if e.kind == "kill":
            yield e
        elif e.kind == "damage" and e.target in match.roster:
            yield e


def _event_participants(e) -> list[str]:
    out = [e.actor]
    if e.victim is not None:
        out.append(e.victim)
    elif e.target is not None:
        out.append(e.target)
    out.extend(e.assists)
    return out


class _Cluster:
    __slots__ = ("times", "xs", "ys", "events")

    def __init__(self):
        self.times: list[float] = []
        self.xs: list[float] = []
        self.ys: list[float] = []
        self.events: list = []

    def add(self, e):
        self.times.append(e.t)
        self.xs.append(e.x)
        self.ys.append(e.y)
        self.events.append(e)

    def centroid(self) -> tuple[float, float]:
        n = len(self.xs)
        return sum(self.xs) / n, sum(self.ys) / n


def detect_team_fights(
    match: MatchTelemetry, params: TeamFightParams | None = None
) -> list[TeamFight]:
    """Greedy single-pass clustering of champion combat into team fights.

    Events are scanned in time order; each kill or champion-target damage
    event joins the earliest-opened live cluster whose last event is within
    ``time_gap`` and whose running centroid is within ``cluster_radius``,
    otherwise it opens a new cluster. Clusters shorter than ``min_duration``
    or lacking ``min_per_team`` distinct players per team are discarded.
    """
    params = params or TeamFightParams()
    open_clusters: list[_Cluster] = []
    closed: list[_Cluster] = []
    for e in _fight_events(match):
        still_open = []
        for c in open_clusters:
            if e.t - c.times[-1] > params.time_gap:
                closed.append(c)
            else:
                still_open.append(c)
        open_clusters = still_open
        placed = False
        for c in open_clusters:
            cx, cy = c.centroid()
            if (e.x - cx) ** 2 + (e.y - cy) ** 2 <= params.cluster_radius**2:
                c.add(e)
                placed = True
                break
        if not placed:
            fresh = _Cluster()
            fresh.add(e)
            open_clusters.append(fresh)
    closed.extend(open_clusters)

    fights = []
    for c in closed:
        duration = c.times[-1] - c.times[0]
        if duration < params.min_duration:
            continue
        participants: set[str] = set()
        for e in c.events:
            participants.update(p for p in _event_participants(e) if p in match.roster)
        per_team = {team: 0 for team in ("blue", "red")}
        for pid in participants:
            per_team[match.roster[pid].team] += 1
        if any(count < params.min_per_team for count in per_team.values()):
            continue
        fights.append(
            TeamFight(
                t_start=c.times[0],
                t_end=c.times[-1],
                centroid=c.centroid(),
                participants=frozenset(participants),
            )
        )
    fights.sort(key=lambda f: f.t_start)
    return fights


# ---------------------------------------------------------------------------
# Game stage

def stage_of(t: float, duration_s: float) -> str:
    """early / mid / late thirds of the match; the end time counts as late."""
    if not 0 <= t <= duration_s:
        raise BadTime(f"time {t} outside [0, {duration_s}]")
    if t < duration_s / 3:
        return STAGE_EARLY
    if t < 2 * duration_s / 3:
        return STAGE_MID
    return STAGE_LATE
