"""Deterministic scripted-match generator with injectable griefer behaviors.

Agents are waypoint walkers on a fixed roster: laners patrol thin racetrack
loops inside their lane, junglers loop their camp ring with short farming
pauses, everyone recalls periodically and converges on four scheduled river
fights. Injections override the scripted player for the labeled span. All
sampling flows through labeled SplitMix64 streams derived from the scenario
seed, so equal scenarios produce byte-identical documents on any machine.

Movement is built as per-player piecewise-linear breakpoints and sampled at
1 Hz; loop geometry keeps any 60 s displacement of a live, non-frozen agent
well above the AFK idle epsilon so baseline matches stay clean under the
default detector config.
"""

from __future__ import annotations

import json
import math
import os
from dataclasses import dataclass, field

import numpy as np

from ..detect import GRIEFER_TYPES
from ..errors import InvalidScenario, IoFailure
from .rng import SplitMix64, stream_for

SPEED = 0.013  # map units per second

ROSTER_SPEC = (
    ("P01", "blue", "Fighter", "top"),
    ("P02", "blue", "Mage", "mid"),
    ("P03", "blue", "Support", "bot_support"),
    ("P04", "blue", "Marksman", "bot_carry"),
    ("P05", "blue", "Assassin", "jungle"),
    ("P06", "red", "Tank", "top"),
    ("P07", "red", "Mage", "mid"),
    ("P08", "red", "Marksman", "bot_carry"),
    ("P09", "red", "Support", "bot_support"),
    ("P10", "red", "Fighter", "jungle"),
)
PLAYER_IDS = tuple(r[0] for r in ROSTER_SPEC)

FOUNTAIN = {"blue": (0.03, 0.03), "red": (0.97, 0.97)}
FEED_TARGET = {"blue": (0.90, 0.90), "red": (0.10, 0.10)}  # inside the enemy base
TOWER_POS = {"blue": (0.20, 0.05), "red": (0.80, 0.95)}

CAMPS = {
    "blue": ((0.35, 0.15), (0.55, 0.22), (0.58, 0.30), (0.32, 0.45), (0.16, 0.35)),
    "red": ((0.65, 0.85), (0.45, 0.78), (0.42, 0.70), (0.68, 0.55), (0.84, 0.65)),
}
# Camp circuits restricted to one jungle pocket (never clipping a lane
# corridor); used by zone-squatting behaviors where occupancy purity matters.
POCKET_CAMPS = {
    "blue": ((0.24, 0.14), (0.35, 0.15), (0.55, 0.22), (0.58, 0.30)),
    "red": ((0.76, 0.86), (0.65, 0.85), (0.45, 0.78), (0.42, 0.70)),
}

# Laning phase, stage bounds, and the idle-rule constants mirror the default
# analysis config; baseline cleanliness under that config is part of this
# generator's contract.
LANING_START = 90.0
LANING_END = 600.0
IDLE_WINDOW_S = 60
IDLE_EPS_MARGIN = 0.016  # detector epsilon 0.01 plus safety headroom
FOUNTAIN_RADIUS = 0.04

FIGHT_FRACTIONS = ((3, 10), (1, 2), (7, 10), (19, 20))
FIGHT_EVENTS = 14
FIGHT_EVENT_SPACING = 0.65
KILL_OFFSET = 9.2
KILL_SPACING = 0.35
LEAVE_OFFSET = 12.0
# Gatherings start well before the fight so that no 60 s idle window can pair
# an approach tick with a return tick (a near-symmetric out-and-back would
# otherwise dip below the idle-displacement epsilon at path crossings).
DEPART_LEAD = 70.0
RESPAWN_DELAY = 20.0
ORBIT_RADIUS = 0.0346  # equilateral orbit, side 0.06; period != divisor of 60

LANE_OF_POSITION = {"top": "top", "mid": "mid", "bot_carry": "bot", "bot_support": "bot"}


def _dist(a: tuple[float, float], b: tuple[float, float]) -> float:
    return math.hypot(a[0] - b[0], a[1] - b[1])


def _clamp_point(p: tuple[float, float]) -> tuple[float, float]:
    return min(max(p[0], 0.015), 0.985), min(max(p[1], 0.015), 0.985)


def _runs(indexes: np.ndarray) -> list[tuple[int, int]]:
    if indexes.size == 0:
        return []
    breaks = np.where(np.diff(indexes) > 1)[0]
    starts = np.concatenate(([0], breaks + 1))
    ends = np.concatenate((breaks, [indexes.size - 1]))
    return [(int(indexes[s]), int(indexes[e])) for s, e in zip(starts, ends)]


def _racetrack(
    a: tuple[float, float], b: tuple[float, float], half_width: float = 0.01
) -> tuple[tuple[float, float], ...]:
    """Thin loop around segment a-b; the return lane is offset so out-and-back
    paths never coincide (keeps 60 s net displacement above the idle epsilon)."""
    dx, dy = b[0] - a[0], b[1] - a[1]
    norm = math.hypot(dx, dy)
    nx, ny = -dy / norm * half_width, dx / norm * half_width
    return (
        (a[0] - nx, a[1] - ny),
        (b[0] - nx, b[1] - ny),
        (b[0] + nx, b[1] + ny),
        (a[0] + nx, a[1] + ny),
    )


LANE_TRACKS = {
    ("blue", "top"): _racetrack((0.05, 0.30), (0.05, 0.72)),
    ("blue", "mid"): _racetrack((0.26, 0.26), (0.44, 0.44)),
    ("blue", "bot_carry"): _racetrack((0.34, 0.05), (0.62, 0.05)),
    ("blue", "bot_support"): _racetrack((0.22, 0.05), (0.50, 0.05)),
    ("red", "top"): _racetrack((0.30, 0.95), (0.72, 0.95)),
    ("red", "mid"): _racetrack((0.56, 0.56), (0.74, 0.74)),
    ("red", "bot_carry"): _racetrack((0.95, 0.38), (0.95, 0.66)),
    ("red", "bot_support"): _racetrack((0.95, 0.50), (0.95, 0.78)),
}

STAND_OFFSETS = (
    (0.03, 0.02),
    (-0.03, 0.02),
    (0.03, -0.02),
    (-0.03, -0.02),
    (0.0, 0.035),
    (0.0, -0.035),
    (0.035, 0.0),
    (-0.035, 0.0),
    (0.02, 0.03),
    (-0.02, -0.03),
)

STAGES = ("early", "mid", "late")


def stage_bounds(stage: str, duration_s: float) -> tuple[float, float]:
    third = duration_s / 3
    if stage == "early":
        return 0.0, third
    if stage == "mid":
        return third, 2 * third
    return 2 * third, duration_s


# ---------------------------------------------------------------------------
# Scenario model

@dataclass(frozen=True)
class Injection:
    player_id: str
    griefer_type: str
    params: dict = field(default_factory=dict)


@dataclass(frozen=True)
class Scenario:
    seed: int
    duration_s: float = 1200.0
    injections: tuple[Injection, ...] = ()


@dataclass
class GroundTruth:
    match_id: str
    labels: list[dict]  # {player_id, type, t0, t1}

    def to_json(self) -> str:
        return json.dumps(
            {"match_id": self.match_id, "labels": self.labels}, separators=(",", ":")
        )


def _roster_entry(player_id: str):
    for entry in ROSTER_SPEC:
        if entry[0] == player_id:
            return entry
    return None


def validate_scenario(scenario: Scenario) -> None:
    if scenario.duration_s < 240:
        raise InvalidScenario("duration_s must be at least 240 seconds")
    seen: set[tuple[str, str]] = set()
    for inj in scenario.injections:
        entry = _roster_entry(inj.player_id)
        if entry is None:
            raise InvalidScenario(f"unknown player {inj.player_id!r}")
        if inj.griefer_type not in GRIEFER_TYPES:
            raise InvalidScenario(f"unknown griefer type {inj.griefer_type!r}")
        key = (inj.player_id, inj.griefer_type)
        if key in seen:
            raise InvalidScenario(f"duplicate injection {key}")
        seen.add(key)
        _, _team, _hero, position = entry
        params = inj.params
        if inj.griefer_type == "afk":
            t0 = params.get("t0")
            t1 = params.get("t1")
            if t0 is None or t1 is None:
                raise InvalidScenario("afk injection needs t0 and t1")
            if not (0 <= t0 < t1 <= scenario.duration_s):
                raise InvalidScenario(f"bad afk span [{t0}, {t1}]")
        elif inj.griefer_type == "lane_stealing":
            lane = params.get("lane")
            if lane not in ("top", "mid", "bot"):
                raise InvalidScenario(f"bad lane {lane!r}")
            if LANE_OF_POSITION.get(position) == lane:
                raise InvalidScenario(
                    f"{inj.player_id} is assigned to lane {lane!r}; nothing to steal"
                )
        elif inj.griefer_type == "jungle_stealing":
            if params.get("stage") not in STAGES:
                raise InvalidScenario(f"bad stage {params.get('stage')!r}")
            if position == "jungle":
                raise InvalidScenario("assigned junglers cannot steal their own jungle")
        elif inj.griefer_type == "position_stealing":
            target = params.get("target")
            if target not in ("top", "mid", "bot", "jungle"):
                raise InvalidScenario(f"bad squat target {target!r}")
            own_zone = LANE_OF_POSITION.get(position, "jungle")
            if target == own_zone:
                raise InvalidScenario("squat target shares the player's home zone")
        elif inj.griefer_type in ("feeding", "non_participation"):
            if params:
                raise InvalidScenario(f"{inj.griefer_type} takes no parameters")


def _label_span(inj: Injection, duration_s: float) -> tuple[float, float]:
    if inj.griefer_type == "afk":
        return float(inj.params["t0"]), float(inj.params["t1"])
    if inj.griefer_type == "jungle_stealing":
        return stage_bounds(inj.params["stage"], duration_s)
    if inj.griefer_type in ("lane_stealing", "position_stealing"):
        return LANING_START, min(LANING_END, duration_s)
    return 0.0, duration_s


# ---------------------------------------------------------------------------
# Movement primitives

class _Path:
    """Piecewise-linear movement track for one player."""

    __slots__ = ("ts", "xs", "ys")

    def __init__(self, start: tuple[float, float]):
        self.ts = [0.0]
        self.xs = [start[0]]
        self.ys = [start[1]]

    @property
    def t(self) -> float:
        return self.ts[-1]

    @property
    def pos(self) -> tuple[float, float]:
        return self.xs[-1], self.ys[-1]

    def _append(self, t: float, x: float, y: float) -> None:
        if t <= self.ts[-1]:
            t = self.ts[-1] + 1e-6
        self.ts.append(t)
        self.xs.append(x)
        self.ys.append(y)

    def stand_until(self, t: float) -> None:
        if t > self.t:
            self._append(t, *self.pos)

    def walk_to(self, target: tuple[float, float]) -> float:
        d = _dist(self.pos, target)
        arrival = self.t + d / SPEED
        if d > 0:
            self._append(arrival, target[0], target[1])
        return self.t

    def walk_until(self, target: tuple[float, float], t_end: float) -> bool:
        """Walk toward target; stop at t_end. True when the target was reached."""
        d = _dist(self.pos, target)
        if d == 0:
            return True
        arrival = self.t + d / SPEED
        if arrival <= t_end:
            self._append(arrival, target[0], target[1])
            return True
        frac = (t_end - self.t) / (arrival - self.t)
        x = self.xs[-1] + frac * (target[0] - self.xs[-1])
        y = self.ys[-1] + frac * (target[1] - self.ys[-1])
        self._append(t_end, x, y)
        return False

    def teleport(self, target: tuple[float, float]) -> None:
        self._append(self.t + 1e-6, target[0], target[1])

    def sample(self, ticks: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        ts = np.asarray(self.ts)
        return np.interp(ticks, ts, np.asarray(self.xs)), np.interp(
            ticks, ts, np.asarray(self.ys)
        )

    def pos_at(self, t: float) -> tuple[float, float]:
        ts = np.asarray(self.ts)
        return float(np.interp(t, ts, np.asarray(self.xs))), float(
            np.interp(t, ts, np.asarray(self.ys))
        )

    def jink(self, t_m: float, offset: tuple[float, float], half_span: float = 2.0) -> bool:
        """Replace [t_m - half_span, t_m + half_span] with a sideways spike.

        Used to break accidental 60 s displacement coincidences. Refuses to
        touch spans containing a teleport jump. Returns True when applied.
        """
        t_lo, t_hi = t_m - half_span, t_m + half_span
        if t_lo <= self.ts[0] or t_hi >= self.ts[-1]:
            return False
        p_lo = self.pos_at(t_lo)
        p_hi = self.pos_at(t_hi)
        p_m = self.pos_at(t_m)
        span = math.hypot(p_hi[0] - p_lo[0], p_hi[1] - p_lo[1])
        if span > 4.0 * SPEED * half_span:  # teleport inside the span
            return False
        spiked = _clamp_point((p_m[0] + offset[0], p_m[1] + offset[1]))
        lo = 0
        while lo < len(self.ts) and self.ts[lo] <= t_lo:
            lo += 1
        hi = lo
        while hi < len(self.ts) and self.ts[hi] < t_hi:
            hi += 1
        self.ts[lo:hi] = [t_lo, t_m, t_hi]
        self.xs[lo:hi] = [p_lo[0], spiked[0], p_hi[0]]
        self.ys[lo:hi] = [p_lo[1], spiked[1], p_hi[1]]
        return True


def _detour_point(
    src: tuple[float, float], dst: tuple[float, float], side: float
) -> tuple[float, float] | None:
    """Midpoint pushed sideways off the straight line from src to dst.

    Long trips are routed through this waypoint so that outbound and return
    corridors (opposite ``side``) never overlap; a straight out-and-back with
    near-60 s timing would otherwise produce a sub-epsilon 60 s displacement
    and a false idle flag.
    """
    dx, dy = dst[0] - src[0], dst[1] - src[1]
    norm = math.hypot(dx, dy)
    if norm < 0.12:
        return None
    off = min(0.05, 0.4 * norm) * side
    return _clamp_point(
        (
            (src[0] + dst[0]) / 2 - dy / norm * off,
            (src[1] + dst[1]) / 2 + dx / norm * off,
        )
    )


class _LoopPatrol:
    """Cyclic waypoint loop with optional farming pauses at given corners."""

    def __init__(
        self,
        corners: tuple[tuple[float, float], ...],
        pause_corners: dict[int, float] | None = None,
        record_pauses: bool = False,
        entry_side: float = -1.0,
    ):
        self.corners = corners
        self.pauses = pause_corners or {}
        self.record = record_pauses
        self.entry_side = entry_side
        self.pause_log: list[tuple[float, float]] = []
        self.idx: int | None = None
        self._pending: list[tuple[float, float]] = []

    def reset(self) -> None:
        """Force re-entry at the nearest corner on the next advance.

        Called after any relocation (fight, recall, freeze); resuming toward a
        stale corner would cut diagonally across the loop, leaving a segment
        nearly parallel to a straight within the idle-displacement epsilon.
        """
        self.idx = None
        self._pending = []

    def anchor(self) -> tuple[float, float]:
        xs = [c[0] for c in self.corners]
        ys = [c[1] for c in self.corners]
        return sum(xs) / len(xs), sum(ys) / len(ys)

    def advance(self, path: _Path, t_end: float) -> None:
        if self.idx is None:
            self.idx = min(
                range(len(self.corners)), key=lambda i: _dist(path.pos, self.corners[i])
            )
            detour = _detour_point(path.pos, self.corners[self.idx], self.entry_side)
            self._pending = [detour] if detour is not None else []
        while self._pending and path.t < t_end:
            if not path.walk_until(self._pending[0], t_end):
                return
            self._pending.pop(0)
        while path.t < t_end:
            target = self.corners[self.idx]
            if not path.walk_until(target, t_end):
                return
            pause = self.pauses.get(self.idx, 0.0)
            if pause > 0 and path.t < t_end:
                start = path.t
                path.stand_until(min(start + pause, t_end))
                if self.record:
                    self.pause_log.append((start, path.t))
            self.idx = (self.idx + 1) % len(self.corners)


# ---------------------------------------------------------------------------
# Builder

@dataclass
class _Fight:
    t: float
    center: tuple[float, float]
    stand: dict[str, tuple[float, float]]
    present: list[str]
    depart: dict[str, float]
    leave: dict[str, float]
    kills: list[tuple[str, str, tuple[str, ...], float, float]]
    # kills rows: (victim, killer, assists, death_t, respawn_t)


class _MatchBuilder:
    def __init__(self, scenario: Scenario):
        validate_scenario(scenario)
        self.scenario = scenario
        self.duration = float(scenario.duration_s)
        tag = (
            "baseline"
            if not scenario.injections
            else "-".join(f"{i.player_id}.{i.griefer_type}" for i in scenario.injections)
        )
        self.match_id = f"sim{scenario.seed}-{tag}"
        self.team = {pid: team for pid, team, _, _ in ROSTER_SPEC}
        self.position = {pid: pos for pid, _, _, pos in ROSTER_SPEC}
        self.injections: dict[str, list[Injection]] = {}
        for inj in scenario.injections:
            self.injections.setdefault(inj.player_id, []).append(inj)
        self.paths: dict[str, _Path] = {}
        self.modes: dict[str, list[tuple[float, float, str]]] = {pid: [] for pid in PLAYER_IDS}
        self.structures: dict[tuple[str, str], _LoopPatrol] = {}
        self.deaths: dict[str, list[tuple[float, float]]] = {pid: [] for pid in PLAYER_IDS}
        self.recalls: dict[str, list[tuple[float, float]]] = {pid: [] for pid in PLAYER_IDS}
        self.feed_plans: dict[str, list[dict]] = {}
        self.events: list[dict] = []

    # -- injection helpers ---------------------------------------------------

    def _inj(self, pid: str, gtype: str) -> Injection | None:
        for inj in self.injections.get(pid, []):
            if inj.griefer_type == gtype:
                return inj
        return None

    def _afk_span(self, pid: str) -> tuple[float, float] | None:
        inj = self._inj(pid, "afk")
        if inj is None:
            return None
        return float(inj.params["t0"]), float(inj.params["t1"])

    # -- fixed structures ------------------------------------------------------

    def _structure(self, pid: str, key: str) -> _LoopPatrol:
        cached = self.structures.get((pid, key))
        if cached is not None:
            return cached
        team = self.team[pid]
        if key == "role":
            if self.position[pid] == "jungle":
                patrol = _LoopPatrol(
                    CAMPS[team], {i: 10.0 for i in range(5)}, record_pauses=True
                )
            else:
                patrol = _LoopPatrol(LANE_TRACKS[(team, self.position[pid])])
        elif key.startswith("steal_lane:"):
            lane = key.split(":", 1)[1]
            role = "bot_carry" if lane == "bot" else lane
            patrol = _LoopPatrol(LANE_TRACKS[(team, role)])
        elif key == "steal_jungle":
            patrol = _LoopPatrol(CAMPS[team], {i: 13.0 for i in range(5)})
        elif key.startswith("squat:"):
            target = key.split(":", 1)[1]
            if target == "jungle":
                patrol = _LoopPatrol(POCKET_CAMPS[team], {i: 10.0 for i in range(4)})
            else:
                role = "bot_carry" if target == "bot" else target
                patrol = _LoopPatrol(LANE_TRACKS[(team, role)])
        elif key == "away":
            enemy = "red" if team == "blue" else "blue"
            camps = CAMPS[enemy]
            # Three-camp loop; the long stay at the entry camp gives reviewers
            # a clear dwell hotspot. Pause lengths and the ~92 s lap keep every
            # 60 s window endpoint pair at distinct camps.
            patrol = _LoopPatrol(
                (camps[2], camps[1], camps[0]),
                {0: 28.0, 1: 10.0, 2: 10.0},
                entry_side=1.0,
            )
        else:
            raise KeyError(key)
        self.structures[(pid, key)] = patrol
        return patrol

    def _anchor(self, pid: str) -> tuple[float, float]:
        return self._structure(pid, "role").anchor()

    # -- ambient behavior spans -----------------------------------------------

    def _ambient_spans(self, pid: str) -> list[tuple[float, float, str, str]]:
        """Active steal/squat overrides as (t0, t1, mode, structure key)."""
        spans = []
        inj = self._inj(pid, "lane_stealing")
        if inj is not None:
            a, b = LANING_START, min(LANING_END, self.duration)
            spans.append((a, b, "steal_lane", f"steal_lane:{inj.params['lane']}"))
        inj = self._inj(pid, "jungle_stealing")
        if inj is not None:
            a, b = stage_bounds(inj.params["stage"], self.duration)
            spans.append((a, b, "steal_jungle", "steal_jungle"))
        inj = self._inj(pid, "position_stealing")
        if inj is not None:
            a, b = LANING_START, min(LANING_END, self.duration)
            spans.append((a, b, "squat", f"squat:{inj.params['target']}"))
        return sorted(spans)

    def _ambient(self, pid: str, t_from: float, t_to: float) -> None:
        path = self.paths[pid]
        path.stand_until(t_from)
        spans = self._ambient_spans(pid)
        role_mode = "jungle" if self.position[pid] == "jungle" else "lane"
        t = t_from
        while t < t_to - 1e-9:
            active = None
            next_edge = t_to
            for a, b, mode, key in spans:
                if a <= t < b:
                    active = (mode, key)
                    next_edge = min(next_edge, b)
                    break
                if a > t:
                    next_edge = min(next_edge, a)
            if active is None:
                mode, key = role_mode, "role"
            else:
                mode, key = active
            seg_end = min(next_edge, t_to)
            self._structure(pid, key).advance(path, seg_end)
            self.modes[pid].append((t, seg_end, mode))
            t = seg_end

    # -- schedule (phase A) -----------------------------------------------------

    def _plan_fights(self) -> list[_Fight]:
        rng = stream_for(self.scenario.seed, "fights")
        fights = []
        for num, den in FIGHT_FRACTIONS:
            t = self.duration * num / den
            delta = rng.uniform(-0.06, 0.06)
            fights.append(
                _Fight(
                    t=t,
                    center=(0.5 + delta, 0.5 - delta),
                    stand={},
                    present=[],
                    depart={},
                    leave={},
                    kills=[],
                )
            )
        for fight in fights:
            for i, pid in enumerate(PLAYER_IDS):
                ox, oy = STAND_OFFSETS[i]
                fight.stand[pid] = (fight.center[0] + ox, fight.center[1] + oy)
        # attendance
        for i, pid in enumerate(PLAYER_IDS):
            drng = stream_for(self.scenario.seed, f"depart.{pid}")
            afk = self._afk_span(pid)
            feeding = self._inj(pid, "feeding") is not None
            away = self._inj(pid, "non_participation") is not None
            squatting = self._inj(pid, "position_stealing") is not None
            travel_est = _dist(self._anchor(pid), (0.5, 0.5)) / SPEED
            for fight in fights:
                jitter = drng.uniform(0.0, 6.0)
                depart = fight.t - DEPART_LEAD - travel_est - jitter
                leave = fight.t + LEAVE_OFFSET + 0.3 * i
                if feeding or away:
                    continue
                if afk is not None and depart - 10 <= afk[1] and fight.t + 15 >= afk[0]:
                    continue
                if squatting and LANING_START <= fight.t <= min(LANING_END, self.duration) - 60:
                    continue
                if depart <= 5:
                    continue
                fight.present.append(pid)
                fight.depart[pid] = depart
                fight.leave[pid] = leave
        # kills
        krng = stream_for(self.scenario.seed, "kills")
        for fight in fights:
            n_kills = krng.randint(0, 2)
            victims: list[str] = []
            candidates = list(fight.present)
            for j in range(n_kills):
                if not candidates:
                    break
                victim = krng.choice(candidates)
                candidates = [c for c in candidates if c != victim]
                enemy = [
                    p for p in fight.present if self.team[p] != self.team[victim]
                ]
                if not enemy:
                    continue
                killer = krng.choice(enemy)
                helpers = [
                    p
                    for p in fight.present
                    if self.team[p] == self.team[killer] and p != killer
                ]
                assists = []
                for _ in range(min(2, len(helpers))):
                    a = krng.choice(helpers)
                    helpers = [h for h in helpers if h != a]
                    assists.append(a)
                death_t = fight.t + KILL_OFFSET + KILL_SPACING * j
                respawn_t = death_t + RESPAWN_DELAY
                victims.append(victim)
                fight.kills.append((victim, killer, tuple(assists), death_t, respawn_t))
                self.deaths[victim].append((death_t, respawn_t))
        return fights

    def _plan_feeders(self, fights: list[_Fight]) -> None:
        for pid in PLAYER_IDS:
            if self._inj(pid, "feeding") is None:
                continue
            team = self.team[pid]
            enemy_ids = [p for p in PLAYER_IDS if self.team[p] != team]
            rng = stream_for(self.scenario.seed, f"feed.{pid}")
            plan = []
            t = 0.0
            pos = FOUNTAIN[team]
            while True:
                target = FEED_TARGET[team]
                target = (
                    target[0] + rng.uniform(-0.015, 0.015),
                    target[1] + rng.uniform(-0.015, 0.015),
                )
                arrival = t + _dist(pos, target) / SPEED
                if arrival >= self.duration - 2:
                    break
                killer = rng.choice(enemy_ids)
                respawn_t = arrival + RESPAWN_DELAY
                plan.append(
                    {"die_at": arrival, "pos": target, "killer": killer, "respawn": respawn_t}
                )
                self.deaths[pid].append((arrival, respawn_t))
                if respawn_t >= self.duration - 2:
                    break
                t = respawn_t + 4.0
                pos = FOUNTAIN[team]
            self.feed_plans[pid] = plan

    def _plan_recalls(self, fights: list[_Fight]) -> None:
        for pid in PLAYER_IDS:
            if self._inj(pid, "feeding") is not None:
                continue
            rng = stream_for(self.scenario.seed, f"recall.{pid}")
            blocked: list[tuple[float, float]] = []
            for fight in fights:
                blocked.append((fight.t - 160, fight.t + 60))
            for inj in self.injections.get(pid, []):
                a, b = _label_span(inj, self.duration)
                blocked.append((a - 40, b + 40))
            for death_t, respawn_t in self.deaths[pid]:
                blocked.append((death_t - 5, respawn_t + 60))
            out = []
            t = 210.0 + rng.uniform(-30, 30)
            while t < self.duration - 80:
                pause = rng.uniform(4.0, 7.5)
                good = not any(a <= t <= b for a, b in blocked)
                if good and (not out or t - out[-1][0] >= 150):
                    out.append((t, pause))
                t += 230.0 + rng.uniform(-30, 30)
            self.recalls[pid] = out

    # -- realization (phase B) ---------------------------------------------------

    def _realize_player(self, pid: str, fights: list[_Fight]) -> None:
        team = self.team[pid]
        path = _Path(FOUNTAIN[team])
        self.paths[pid] = path
        if pid in self.feed_plans:
            self._realize_feeder(pid, path)
            return

        directives: list[tuple[float, str, object]] = []
        for k, fight in enumerate(fights):
            if pid in fight.present:
                directives.append((fight.depart[pid], "fight", fight))
            elif self._inj(pid, "non_participation") is not None:
                away = self._structure(pid, "away")
                est = _dist(self._anchor(pid), away.corners[0]) / SPEED
                directives.append((fight.t - DEPART_LEAD - est, "away", fight))
        for t, pause in self.recalls[pid]:
            directives.append((t, "recall", pause))
        afk = self._afk_span(pid)
        if afk is not None:
            directives.append((afk[0], "freeze", afk[1]))
        directives.sort(key=lambda d: d[0])

        cursor = 0.0
        for start, kind, payload in directives:
            start = max(start, path.t + 0.5)
            if start >= self.duration:
                break
            self._ambient(pid, cursor, start)
            if kind == "fight":
                self._do_fight(pid, path, payload)
            elif kind == "away":
                self._do_away(pid, path, payload)
            elif kind == "recall":
                self._do_recall(pid, path, start, payload)
            elif kind == "freeze":
                # step a little off the patrol path before freezing; frozen on
                # the loop itself, earlier laps would pass within the idle
                # epsilon and stretch the detected interval
                camps = CAMPS[self.team[pid]]
                cx = sum(c[0] for c in camps) / len(camps)
                cy = sum(c[1] for c in camps) / len(camps)
                dx, dy = cx - path.pos[0], cy - path.pos[1]
                norm = math.hypot(dx, dy)
                if norm < 1e-6:
                    dx, dy, norm = 1.0, 1.0, math.sqrt(2)
                freeze_at = _clamp_point(
                    (path.pos[0] + 0.06 * dx / norm, path.pos[1] + 0.06 * dy / norm)
                )
                self.modes[pid].append((path.t, payload, "frozen"))
                path.walk_to(freeze_at)
                path.stand_until(payload)
                self._reset_loops(pid)
            cursor = path.t
        self._ambient(pid, cursor, self.duration)

    def _do_fight(self, pid: str, path: _Path, fight: _Fight) -> None:
        mode_start = path.t
        stand = fight.stand[pid]
        # Equilateral orbit with one vertex facing the approach: the two sides
        # at the entry vertex sit 30 degrees off the approach axis, so approach
        # ticks can never shadow an orbit side.
        ux, uy = stand[0] - path.pos[0], stand[1] - path.pos[1]
        norm = math.hypot(ux, uy) or 1.0
        ux, uy = ux / norm, uy / norm
        r = ORBIT_RADIUS
        verts = (
            _clamp_point((stand[0] - r * ux, stand[1] - r * uy)),
            _clamp_point(
                (
                    stand[0] - r * (-0.5 * ux - 0.8660254 * uy),
                    stand[1] - r * (0.8660254 * ux - 0.5 * uy),
                )
            ),
            _clamp_point(
                (
                    stand[0] - r * (-0.5 * ux + 0.8660254 * uy),
                    stand[1] - r * (-0.8660254 * ux - 0.5 * uy),
                )
            ),
        )
        leave_t = fight.leave[pid]
        my_kill = next((k for k in fight.kills if k[0] == pid), None)
        stop_t = my_kill[3] if my_kill is not None else leave_t
        detour = _detour_point(path.pos, verts[0], 1.0)
        reached = detour is None or path.walk_until(detour, stop_t)
        j = 0
        if reached and path.walk_until(verts[0], stop_t):
            while path.t < stop_t:
                j = (j + 1) % 3
                if not path.walk_until(verts[j], stop_t):
                    break
        self.modes[pid].append((mode_start, path.t, "fight"))
        if my_kill is not None:
            death_t, respawn_t = my_kill[3], my_kill[4]
            if respawn_t >= self.duration:
                path.stand_until(self.duration)
                self.modes[pid].append((death_t, self.duration, "dead"))
                return
            path.stand_until(respawn_t)
            path.teleport(FOUNTAIN[self.team[pid]])
            path.stand_until(respawn_t + 5.0)
            self.modes[pid].append((death_t, path.t, "dead"))
        else:
            # leave through a waypoint beyond the orbit toward home; stepping
            # straight off the loop could retrace a side in reverse
            anchor = self._anchor(pid)
            dx, dy = anchor[0] - stand[0], anchor[1] - stand[1]
            norm = math.hypot(dx, dy) or 1.0
            exit_wp = _clamp_point(
                (stand[0] + dx / norm * 0.1, stand[1] + dy / norm * 0.1)
            )
            path.walk_to(exit_wp)
        self._reset_loops(pid)

    def _reset_loops(self, pid: str) -> None:
        for (owner, _key), patrol in self.structures.items():
            if owner == pid:
                patrol.reset()

    def _do_away(self, pid: str, path: _Path, fight: _Fight) -> None:
        mode_start = path.t
        away = self._structure(pid, "away")
        away.advance(path, fight.t + LEAVE_OFFSET)
        self.modes[pid].append((mode_start, path.t, "away"))
        self._reset_loops(pid)

    def _do_recall(self, pid: str, path: _Path, t: float, pause: float) -> None:
        path.stand_until(t)
        path.teleport(FOUNTAIN[self.team[pid]])
        path.stand_until(t + pause)
        self.modes[pid].append((t, path.t, "recall"))
        self._reset_loops(pid)

    def _realize_feeder(self, pid: str, path: _Path) -> None:
        team = self.team[pid]
        for leg in self.feed_plans[pid]:
            path.walk_to(leg["pos"])
            respawn_t = leg["respawn"]
            if respawn_t >= self.duration:
                path.stand_until(self.duration)
                break
            path.stand_until(respawn_t)
            path.teleport(FOUNTAIN[team])
            path.stand_until(respawn_t + 4.0)
        path.stand_until(self.duration)
        self.modes[pid].append((0.0, self.duration, "feed"))

    # -- idle-coincidence repair ------------------------------------------------

    def _idle_offenders(self, pid: str) -> list[int]:
        """Integer window starts where a live, unfrozen agent's 60 s net
        displacement falls inside the detector's idle epsilon (plus margin)."""
        path = self.paths[pid]
        n = int(math.floor(self.duration)) + 1
        ticks = np.arange(n, dtype=float)
        xs, ys = path.sample(ticks)
        eligible = np.ones(n, dtype=bool)
        for death_t, respawn_t in self.deaths[pid]:
            eligible &= ~((ticks > death_t) & (ticks < respawn_t))
        fx, fy = FOUNTAIN[self.team[pid]]
        eligible &= (xs - fx) ** 2 + (ys - fy) ** 2 > FOUNTAIN_RADIUS**2
        afk = self._afk_span(pid)
        if afk is not None:
            eligible &= ~((ticks >= afk[0] - 1) & (ticks <= afk[1] + 1))
        offenders: list[int] = []
        w = IDLE_WINDOW_S
        for first, last in _runs(np.where(eligible)[0]):
            if last - first < w:
                continue
            seg_x = xs[first : last + 1]
            seg_y = ys[first : last + 1]
            net = np.hypot(seg_x[w:] - seg_x[:-w], seg_y[w:] - seg_y[:-w])
            for k in np.where(net < IDLE_EPS_MARGIN)[0]:
                offenders.append(first + int(k))
        return offenders

    def _repair_idle_coincidences(self, pid: str) -> None:
        """Break accidental near-zero 60 s displacements with small jinks.

        Loop geometry and trip timing avoid these by design, but residual path
        crossings can still line up with the 60 s window on odd seeds; a 4 s
        sideways spike at one window endpoint removes the coincidence without
        disturbing farming cadences or zone dwell in any meaningful way.
        """
        path = self.paths[pid]
        for _ in range(16):
            offenders = self._idle_offenders(pid)
            if not offenders:
                return
            batch: list[int] = []
            for s in offenders:
                if not batch or s - batch[-1] >= 10:
                    batch.append(s)
            for s in batch:
                for t_m in (float(s + IDLE_WINDOW_S), float(s)):
                    other = float(s) if t_m == float(s + IDLE_WINDOW_S) else float(s + IDLE_WINDOW_S)
                    p_m = path.pos_at(t_m)
                    p_o = path.pos_at(other)
                    d_before = path.pos_at(t_m - 0.5)
                    d_after = path.pos_at(t_m + 0.5)
                    dx, dy = d_after[0] - d_before[0], d_after[1] - d_before[1]
                    norm = math.hypot(dx, dy)
                    if norm > 1e-9:
                        px, py = -dy / norm, dx / norm
                    else:
                        px, py = 0.0, 1.0
                    away_x, away_y = p_m[0] - p_o[0], p_m[1] - p_o[1]
                    if px * away_x + py * away_y < 0:
                        px, py = -px, -py
                    if path.jink(t_m, (0.04 * px, 0.04 * py)):
                        break
        if self._idle_offenders(pid):
            raise RuntimeError(
                f"idle-coincidence repair did not converge for {pid} "
                f"(seed {self.scenario.seed})"
            )

    # -- events (phase C) ----------------------------------------------------------

    def _mode_at(self, pid: str, t: float) -> str:
        for a, b, mode in self.modes[pid]:
            if a <= t < b:
                return mode
        return "other"

    def _mode_intervals(self, pid: str, wanted: str) -> list[tuple[float, float]]:
        return [(a, b) for a, b, mode in self.modes[pid] if mode == wanted and b > a]

    def _alive_at(self, pid: str, t: float) -> bool:
        return not any(d <= t < r for d, r in self.deaths[pid])

    def _emit(self, t: float, kind: str, actor: str, **payload) -> None:
        if t < 0 or t > self.duration:
            return
        event = {"t": round(t, 2), "kind": kind, "actor": actor}
        event.update(payload)
        self.events.append(event)

    def _cadence(self, rng: SplitMix64, intervals, lo: float, hi: float):
        for a, b in intervals:
            t = a + rng.uniform(lo, hi)
            while t < b:
                yield t
                t += rng.uniform(lo, hi)

    def _emit_events(self, fights: list[_Fight]) -> None:
        seed = self.scenario.seed
        # recalls / respawns
        for pid in PLAYER_IDS:
            for t, _pause in self.recalls[pid]:
                self._emit(t, "recall", pid)
            for death_t, respawn_t in self.deaths[pid]:
                if respawn_t < self.duration:
                    self._emit(respawn_t, "respawn", pid)
        # fights
        for fight in fights:
            blue = sorted(p for p in fight.present if self.team[p] == "blue")
            red = sorted(p for p in fight.present if self.team[p] == "red")
            if not blue or not red:
                continue
            frng = stream_for(seed, f"fightdmg.{round(fight.t)}")
            for i in range(FIGHT_EVENTS):
                t = fight.t + FIGHT_EVENT_SPACING * i
                side, other = (blue, red) if i % 2 == 0 else (red, blue)
                actor = side[(i // 2) % len(side)]
                target = frng.choice(other)
                pos = fight.stand[actor]
                self._emit(
                    t,
                    "damage",
                    actor,
                    target=target,
                    amount=frng.randint(40, 180),
                    x=round(pos[0], 4),
                    y=round(pos[1], 4),
                )
            for victim, killer, assists, death_t, _respawn in fight.kills:
                pos = fight.stand[victim]
                self._emit(
                    death_t,
                    "kill",
                    killer,
                    victim=victim,
                    assists=list(assists),
                    x=round(pos[0], 4),
                    y=round(pos[1], 4),
                )
                self._emit(death_t, "gold", killer, amount=300, source="kill_bounty")
        # feeder deaths
        for pid, plan in self.feed_plans.items():
            grng = stream_for(seed, f"feeddmg.{pid}")
            for leg in plan:
                x, y = round(leg["pos"][0], 4), round(leg["pos"][1], 4)
                self._emit(
                    leg["die_at"] - 2.0,
                    "damage",
                    leg["killer"],
                    target=pid,
                    amount=grng.randint(150, 250),
                    x=x,
                    y=y,
                )
                self._emit(
                    leg["die_at"], "kill", leg["killer"], victim=pid, assists=[], x=x, y=y
                )
                self._emit(leg["die_at"], "gold", leg["killer"], amount=300, source="kill_bounty")
        # lane farming
        for pid in PLAYER_IDS:
            position = self.position[pid]
            if position in ("top", "mid", "bot_carry"):
                rng = stream_for(seed, f"cs.{pid}")
                lane = LANE_OF_POSITION[position]
                for t in self._cadence(rng, self._mode_intervals(pid, "lane"), 4.5, 7.5):
                    self._emit(t, "cs", pid, source=lane, gold=rng.randint(18, 22))
            inj = self._inj(pid, "lane_stealing")
            if inj is not None:
                rng = stream_for(seed, f"stealcs.{pid}")
                for t in self._cadence(
                    rng, self._mode_intervals(pid, "steal_lane"), 7.6, 8.8
                ):
                    self._emit(t, "cs", pid, source=inj.params["lane"], gold=rng.randint(18, 22))
            if self._inj(pid, "jungle_stealing") is not None:
                rng = stream_for(seed, f"stealjg.{pid}")
                for t in self._cadence(
                    rng, self._mode_intervals(pid, "steal_jungle"), 4.8, 5.8
                ):
                    x, y = self.paths[pid].pos_at(t)
                    source = "jungle_blue" if x + y < 1 else "jungle_red"
                    self._emit(t, "cs", pid, source=source, gold=rng.randint(18, 22))
        # jungler camp farming
        for pid in PLAYER_IDS:
            if self.position[pid] != "jungle":
                continue
            patrol = self.structures.get((pid, "role"))
            if patrol is None:
                continue
            rng = stream_for(seed, f"jgcs.{pid}")
            source = "jungle_blue" if self.team[pid] == "blue" else "jungle_red"
            for start, end in patrol.pause_log:
                for offset in (2.0, 4.5, 7.0):
                    if start + offset < end - 0.5:
                        self._emit(start + offset, "cs", pid, source=source, gold=rng.randint(18, 22))
        # support heals
        for pid in PLAYER_IDS:
            if self.position[pid] != "bot_support":
                continue
            carry = next(
                p
                for p in PLAYER_IDS
                if self.team[p] == self.team[pid] and self.position[p] == "bot_carry"
            )
            rng = stream_for(seed, f"heal.{pid}")
            for t in self._cadence(rng, self._mode_intervals(pid, "lane"), 24.0, 40.0):
                if self._alive_at(carry, t):
                    self._emit(t, "heal", pid, target=carry, amount=rng.randint(20, 50))
        # lane trades
        trng = stream_for(seed, "trades")
        pairs = []
        for role in ("top", "mid", "bot_carry", "bot_support"):
            a = next(p for p in PLAYER_IDS if self.team[p] == "blue" and self.position[p] == role)
            b = next(p for p in PLAYER_IDS if self.team[p] == "red" and self.position[p] == role)
            pairs.append((a, b))
        for a, b in pairs:
            t = 95.0 + trng.uniform(0, 20)
            while t < self.duration - 5:
                if (
                    self._mode_at(a, t) == "lane"
                    and self._mode_at(b, t) == "lane"
                    and self._alive_at(a, t)
                    and self._alive_at(b, t + 0.8)
                ):
                    pa = self.paths[a].pos_at(t)
                    pb = self.paths[b].pos_at(t + 0.8)
                    self._emit(
                        t, "damage", a, target=b,
                        amount=trng.randint(25, 70), x=round(pa[0], 4), y=round(pa[1], 4),
                    )
                    self._emit(
                        t + 0.8, "damage", b, target=a,
                        amount=trng.randint(25, 70), x=round(pb[0], 4), y=round(pb[1], 4),
                    )
                else:
                    trng.randint(25, 70)
                    trng.randint(25, 70)
                t += trng.uniform(14.0, 26.0)
        # objectives after the second and third fights
        orng = stream_for(seed, "objectives")
        for k in (1, 2):
            if k >= len(fights):
                break
            fight = fights[k]
            winner = orng.choice(("blue", "red"))
            loser = "red" if winner == "blue" else "blue"
            attackers = sorted(p for p in fight.present if self.team[p] == winner)
            if not attackers:
                continue
            attacker = orng.choice(attackers)
            tx, ty = TOWER_POS[loser]
            base_t = fight.t + 25.0
            for i in range(3):
                self._emit(
                    base_t + 2.0 * i,
                    "damage",
                    attacker,
                    target=f"tower_{loser}",
                    amount=orng.randint(120, 200),
                    x=tx,
                    y=ty,
                )
            self._emit(base_t + 8.0, "objective", attacker, subtype="tower", team=loser, x=tx, y=ty)

        self.events.sort(key=lambda e: e["t"])

    # -- document assembly ------------------------------------------------------

    def build(self) -> tuple[str, GroundTruth]:
        fights = self._plan_fights()
        self._plan_feeders(fights)
        self._plan_recalls(fights)
        for pid in PLAYER_IDS:
            self._realize_player(pid, fights)
            self._repair_idle_coincidences(pid)
        self._emit_events(fights)

        rng = stream_for(self.scenario.seed, "reports")
        players = [
            {
                "player_id": pid,
                "team": team,
                "hero_type": hero,
                "assigned_position": pos,
                "report_count": rng.randint(0, 3),
            }
            for pid, team, hero, pos in ROSTER_SPEC
        ]
        ticks = np.arange(int(math.floor(self.duration)) + 1, dtype=float)
        sampled = {pid: self.paths[pid].sample(ticks) for pid in PLAYER_IDS}
        samples = []
        for i, t in enumerate(ticks):
            ti = int(t)
            for pid in PLAYER_IDS:
                xs, ys = sampled[pid]
                samples.append(
                    {
                        "t": ti,
                        "player_id": pid,
                        "x": round(float(xs[i]), 4),
                        "y": round(float(ys[i]), 4),
                    }
                )
        doc = {
            "match_id": self.match_id,
            "duration_s": self.duration,
            "players": players,
            "position_samples": samples,
            "events": self.events,
        }
        labels = [
            {
                "player_id": inj.player_id,
                "type": inj.griefer_type,
                "t0": round(_label_span(inj, self.duration)[0], 2),
                "t1": round(_label_span(inj, self.duration)[1], 2),
            }
            for inj in self.scenario.injections
        ]
        truth = GroundTruth(match_id=self.match_id, labels=labels)
        return json.dumps(doc, separators=(",", ":")), truth


def generate_match(scenario: Scenario) -> tuple[str, GroundTruth]:
    """Deterministically build one telemetry document plus its ground truth."""
    return _MatchBuilder(scenario).build()


# ---------------------------------------------------------------------------
# Corpus

def scenario_for_archetype(seed: int, archetype: str, duration_s: float = 1200.0) -> Scenario:
    """Standard single-injection scenario with seeded target and parameters."""
    rng = stream_for(seed, "corpus-scenario")
    if archetype == "baseline":
        return Scenario(seed=seed, duration_s=duration_s)
    if archetype not in GRIEFER_TYPES:
        raise InvalidScenario(f"unknown archetype {archetype!r}")
    if archetype == "afk":
        pid = rng.choice(PLAYER_IDS)
        t0 = 120.0 + rng.uniform(0, 40)
        params = {"t0": round(t0, 2), "t1": round(t0 + 200.0, 2)}
    elif archetype == "feeding":
        pid = rng.choice(PLAYER_IDS)
        params = {}
    elif archetype == "lane_stealing":
        pid = rng.choice(PLAYER_IDS)
        own = LANE_OF_POSITION.get(next(p[3] for p in ROSTER_SPEC if p[0] == pid))
        lane = rng.choice([ln for ln in ("top", "mid", "bot") if ln != own])
        params = {"lane": lane}
    elif archetype == "jungle_stealing":
        pid = rng.choice([p[0] for p in ROSTER_SPEC if p[3] != "jungle"])
        params = {"stage": rng.choice(STAGES)}
    elif archetype == "non_participation":
        pid = rng.choice(PLAYER_IDS)
        params = {}
    else:  # position_stealing
        pid = rng.choice(PLAYER_IDS)
        own = LANE_OF_POSITION.get(next(p[3] for p in ROSTER_SPEC if p[0] == pid), "jungle")
        target = rng.choice([z for z in ("top", "mid", "bot", "jungle") if z != own])
        params = {"target": target}
    return Scenario(
        seed=seed,
        duration_s=duration_s,
        injections=(Injection(player_id=pid, griefer_type=archetype, params=params),),
    )


def generate_corpus(
    base_seed: int, n_per_archetype: int, n_baseline: int, out_dir: str
) -> dict:
    """Write the labeled corpus plus a manifest; returns the manifest dict."""
    if n_per_archetype < 1 or n_baseline < 0:
        raise InvalidScenario("corpus sizes must be positive")
    jobs: list[tuple[int, str]] = []
    seed = base_seed
    for archetype in GRIEFER_TYPES:
        for _ in range(n_per_archetype):
            jobs.append((seed, archetype))
            seed += 1
    for _ in range(n_baseline):
        jobs.append((seed, "baseline"))
        seed += 1

    entries = []
    try:
        os.makedirs(out_dir, exist_ok=True)
        for job_seed, archetype in jobs:
            scenario = scenario_for_archetype(job_seed, archetype)
            telemetry, truth = generate_match(scenario)
            telemetry_file = f"{truth.match_id}.telemetry.json"
            truth_file = f"{truth.match_id}.truth.json"
            with open(os.path.join(out_dir, telemetry_file), "w", encoding="utf-8") as fh:
                fh.write(telemetry)
            with open(os.path.join(out_dir, truth_file), "w", encoding="utf-8") as fh:
                fh.write(truth.to_json())
            entries.append(
                {
                    "seed": job_seed,
                    "archetype": archetype,
                    "match_id": truth.match_id,
                    "telemetry_file": telemetry_file,
                    "truth_file": truth_file,
                }
            )
        manifest = {
            "base_seed": base_seed,
            "n_per_archetype": n_per_archetype,
            "n_baseline": n_baseline,
            "entries": entries,
        }
        with open(os.path.join(out_dir, "manifest.json"), "w", encoding="utf-8") as fh:
            json.dump(manifest, fh, indent=2)
    except OSError as exc:
        raise IoFailure(f"failed writing corpus: {exc}") from exc
    return manifest
