"""Rule-based griefer detectors, severity scoring, and explanations.

Six independent detectors scan one match each and emit at most one finding
per (player, archetype): away-from-keyboard idling, feeding, lane stealing,
jungle stealing, team-fight non-participation, and position stealing. Every
finding carries the suspicious time ranges, the metric facts that triggered
it, and a deterministic template-rendered explanation. Detectors never read
report counts; those are surfaced for human reviewers only.
"""

from __future__ import annotations

import json
import string
from dataclasses import dataclass, field

import numpy as np

from .config import DetectorConfig, default_config
from .errors import MissingEvidenceKey
from .metrics import (
    detect_team_fights,
    jungle_economy_share,
    jungle_gold,
    lane_cs_stats,
    stage_of,
    window_count,
    window_index,
    LANES,
)
from .spatial import (
    ZoneLayout,
    alive_tick_mask,
    default_layout,
    own_fountain,
    own_jungle,
    window_ticks,
    zone_occupancy,
)
from .telemetry import MatchTelemetry, alive_intervals, positions_at

GRIEFER_TYPES = (
    "afk",
    "feeding",
    "lane_stealing",
    "jungle_stealing",
    "non_participation",
    "position_stealing",
)

NO_SUSPICION_TEXT = "No suspicious behavior detected."

# Severity denominators: linear margins clamped into [0, 1].
AFK_SEVERITY_SCALE_S = 300.0
FEED_SEVERITY_SCALE = 6.0
LANE_SEVERITY_SCALE = 0.6
JUNGLE_SEVERITY_SCALE = 0.8

HOME_ZONE_BY_POSITION = {
    "top": "top_lane",
    "mid": "mid_lane",
    "bot_carry": "bot_lane",
    "bot_support": "bot_lane",
}


@dataclass
class SuspicionFinding:
    player_id: str
    griefer_type: str
    severity: float
    time_ranges: list[tuple[float, float]]
    evidence: list[tuple[str, object]]
    explanation: str = ""


@dataclass
class PlayerSummary:
    player_id: str
    hero_type: str
    assigned_position: str
    report_count: int
    findings: list[SuspicionFinding] = field(default_factory=list)
    suspicion_paragraph: str = NO_SUSPICION_TEXT


# ---------------------------------------------------------------------------
# Small helpers

def _clamp01(v: float) -> float:
    return max(0.0, min(1.0, v))


def merge_ranges(
    ranges: list[tuple[float, float]], gap: float = 0.0
) -> list[tuple[float, float]]:
    """Merge overlapping (or within ``gap``) ranges into sorted disjoint ones."""
    if not ranges:
        return []
    ordered = sorted(ranges)
    merged = [ordered[0]]
    for start, end in ordered[1:]:
        last_start, last_end = merged[-1]
        if start <= last_end + gap:
            merged[-1] = (last_start, max(last_end, end))
        else:
            merged.append((start, end))
    return merged


def _interval_overlap(intervals, a: float, b: float) -> float:
    return sum(max(0.0, min(end, b) - max(start, a)) for start, end in intervals)


def _alive_fraction(match: MatchTelemetry, player_id: str, a: float, b: float) -> float:
    if b <= a:
        return 0.0
    return _interval_overlap(alive_intervals(match, player_id), a, b) / (b - a)


def _alive_through(match: MatchTelemetry, player_id: str, a: float, b: float) -> bool:
    return any(start <= a and b <= end for start, end in alive_intervals(match, player_id))


def _runs(indexes: np.ndarray) -> list[tuple[int, int]]:
    """Maximal runs of consecutive integers as (first, last) pairs."""
    if indexes.size == 0:
        return []
    breaks = np.where(np.diff(indexes) > 1)[0]
    starts = np.concatenate(([0], breaks + 1))
    ends = np.concatenate((breaks, [indexes.size - 1]))
    return [(int(indexes[s]), int(indexes[e])) for s, e in zip(starts, ends)]


# ---------------------------------------------------------------------------
# Explanations

_formatter = string.Formatter()


def render_explanation(
    finding: SuspicionFinding, match: MatchTelemetry, cfg: DetectorConfig | None = None
) -> str:
    """Fill the archetype's template with player facts and rounded evidence."""
    cfg = cfg or default_config()
    template = cfg.templates[finding.griefer_type]
    info = match.roster.get(finding.player_id)
    values: dict[str, object] = dict(finding.evidence)
    values["player"] = finding.player_id
    if info is not None:
        values["hero_type"] = info.hero_type
    rendered: dict[str, str] = {}
    for key, value in values.items():
        if isinstance(value, bool):
            rendered[key] = str(value)
        elif isinstance(value, float):
            rendered[key] = f"{round(value, 1):.1f}"
        else:
            rendered[key] = str(value)
    out = []
    for literal, field_name, _spec, _conv in _formatter.parse(template):
        out.append(literal)
        if field_name is None:
            continue
        if field_name not in rendered:
            raise MissingEvidenceKey(
                f"template for {finding.griefer_type!r} needs {field_name!r} "
                "which is not in the finding evidence"
            )
        out.append(rendered[field_name])
    return "".join(out)


# ---------------------------------------------------------------------------
# AFK

def detect_afk(
    match: MatchTelemetry, layout: ZoneLayout, cfg: DetectorConfig | None = None
) -> list[SuspicionFinding]:
    """Flag players who stop moving away from their fountain or camp in it.

    Two interval sources: (i) alive stretches outside the player's own
    fountain where every sliding idle window has net displacement below
    ``afk_idle_eps``; (ii) fountain stays of at least ``afk_fountain_stay_s``
    that are not explained by a recent recall or respawn.
    """
    cfg = cfg or default_config()
    hz = cfg.tick_hz
    ticks = window_ticks(0.0, match.duration_s, hz)
    idle_w = int(round(cfg.afk_idle_min_s * hz))
    findings = []
    for player in match.players:
        pid = player.player_id
        alive = alive_tick_mask(match, pid, ticks)
        pos = positions_at(match, pid, ticks)
        zone_idx = layout.classify_many(pos[:, 0], pos[:, 1])
        fountain_idx = layout.zone_ids.index(own_fountain(player.team))
        in_fountain = zone_idx == fountain_idx

        intervals: list[tuple[float, float]] = []

        # (i) stationary while alive outside own fountain
        eligible = alive & ~in_fountain
        for first, last in _runs(np.where(eligible)[0]):
            if last - first < idle_w:
                continue
            span = pos[first : last + 1]
            net = np.sqrt(((span[idle_w:] - span[:-idle_w]) ** 2).sum(axis=1))
            ok = net < cfg.afk_idle_eps
            for s, e in _runs(np.where(ok)[0]):
                intervals.append((float(ticks[first + s]), float(ticks[first + e + idle_w])))

        # (ii) unexplained fountain camping
        recalls = [e.t for e in match.events_of_kind("recall") if e.actor == pid]
        respawns = [e.t for e in match.events_of_kind("respawn") if e.actor == pid]
        for first, last in _runs(np.where(alive & in_fountain)[0]):
            start_t, end_t = float(ticks[first]), float(ticks[last])
            if end_t - start_t < cfg.afk_fountain_stay_s:
                continue
            if any(0 <= start_t - t <= cfg.afk_post_recall_grace_s for t in recalls):
                continue
            if any(0 <= start_t - t <= cfg.afk_respawn_grace_s for t in respawns):
                continue
            intervals.append((start_t, end_t))

        intervals = merge_ranges(intervals)
        if not intervals:
            continue
        total = sum(end - start for start, end in intervals)
        longest = max(end - start for start, end in intervals)
        if total < cfg.afk_total_min_s and longest < cfg.afk_idle_min_s:
            continue
        finding = SuspicionFinding(
            player_id=pid,
            griefer_type="afk",
            severity=_clamp01(total / AFK_SEVERITY_SCALE_S),
            time_ranges=intervals,
            evidence=[("afk_total_s", float(total)), ("interval_count", len(intervals))],
        )
        finding.explanation = render_explanation(finding, match, cfg)
        findings.append(finding)
    return findings


# ---------------------------------------------------------------------------
# Feeding

def detect_feeding(
    match: MatchTelemetry, cfg: DetectorConfig | None = None
) -> list[SuspicionFinding]:
    """Flag players who die a lot while contributing and resisting nothing."""
    cfg = cfg or default_config()
    pre_w = cfg.feed_pre_death_window_s
    kills: dict[str, int] = {p.player_id: 0 for p in match.players}
    assists: dict[str, int] = {p.player_id: 0 for p in match.players}
    deaths: dict[str, list[float]] = {p.player_id: [] for p in match.players}
    for e in match.events_of_kind("kill"):
        kills[e.actor] += 1
        deaths[e.victim].append(e.t)
        for a in e.assists:
            assists[a] += 1
    damage_events = match.events_of_kind("damage")

    def damage_dealt(pid: str, a: float, b: float) -> float:
        return sum(e.amount for e in damage_events if e.actor == pid and a <= e.t <= b)

    def mean_pre_death_damage(pid: str) -> float:
        times = deaths[pid]
        if not times:
            return 0.0
        return sum(damage_dealt(pid, t - pre_w, t) for t in times) / len(times)

    findings = []
    for player in match.players:
        pid = player.player_id
        d = len(deaths[pid])
        if d < cfg.feed_min_deaths:
            continue
        ratio = d / (kills[pid] + assists[pid] + 1)
        if ratio < cfg.feed_kda_ratio:
            continue
        dpd = mean_pre_death_damage(pid)
        teammates = [
            q.player_id for q in match.players_of_team(player.team) if q.player_id != pid
        ]
        team_death_count = sum(len(deaths[q]) for q in teammates)
        if team_death_count > 0:
            team_dpd = (
                sum(damage_dealt(q, t - pre_w, t) for q in teammates for t in deaths[q])
                / team_death_count
            )
        else:
            team_dpd = 0.0
        if team_dpd > 0 and dpd > cfg.feed_passive_frac * team_dpd:
            continue
        ranges = merge_ranges([(max(0.0, t - pre_w), t) for t in deaths[pid]])
        finding = SuspicionFinding(
            player_id=pid,
            griefer_type="feeding",
            severity=_clamp01(ratio / FEED_SEVERITY_SCALE),
            time_ranges=ranges,
            evidence=[
                ("deaths", d),
                ("kills", kills[pid]),
                ("assists", assists[pid]),
                ("kda_ratio", float(ratio)),
                ("dpd", float(dpd)),
                ("team_dpd", float(team_dpd)),
            ],
        )
        finding.explanation = render_explanation(finding, match, cfg)
        findings.append(finding)
    return findings


# ---------------------------------------------------------------------------
# Lane stealing

def _laning_phase(match: MatchTelemetry, cfg: DetectorConfig) -> tuple[float, float]:
    return cfg.laning_start_s, min(cfg.laning_end_s, match.duration_s)


def detect_lane_stealing(
    match: MatchTelemetry, cfg: DetectorConfig | None = None
) -> list[SuspicionFinding]:
    """Flag players farming a sizeable share of a lane assigned to a teammate."""
    cfg = cfg or default_config()
    t0, t1 = _laning_phase(match, cfg)
    if t1 <= t0:
        return []
    def assigned_to_lane(player, lane: str) -> bool:
        if lane == "bot":
            return player.assigned_position in ("bot_carry", "bot_support")
        return player.assigned_position == lane

    # (player -> lane -> (count, share))
    hits: dict[str, dict[str, tuple[int, float]]] = {}
    for lane in LANES:
        stats = lane_cs_stats(match, lane, t0, t1)
        for team in ("blue", "red"):
            members = match.players_of_team(team)
            assigned = [p for p in members if assigned_to_lane(p, lane)]
            assigned_ids = {p.player_id for p in assigned}
            if not any(
                _alive_fraction(match, q.player_id, t0, t1) >= 0.5 for q in assigned
            ):
                continue
            team_total = sum(stats[p.player_id][0] for p in members)
            if team_total == 0:
                continue
            for p in members:
                if p.player_id in assigned_ids:
                    continue
                count = stats[p.player_id][0]
                share = count / team_total
                if count >= cfg.steal_min_cs and share >= cfg.steal_share:
                    hits.setdefault(p.player_id, {})[lane] = (count, share)

    findings = []
    for pid in sorted(hits):
        lanes = hits[pid]
        best_lane = max(lanes, key=lambda ln: lanes[ln][1])
        best_count, best_share = lanes[best_lane]
        ranges = []
        n = window_count(match.duration_s, 20.0)
        for e in match.events_of_kind("cs"):
            if e.actor == pid and e.source in lanes and t0 <= e.t < t1:
                k = window_index(e.t, 20.0, n)
                ranges.append((k * 20.0, min((k + 1) * 20.0, match.duration_s)))
        finding = SuspicionFinding(
            player_id=pid,
            griefer_type="lane_stealing",
            severity=_clamp01(best_share / LANE_SEVERITY_SCALE),
            time_ranges=merge_ranges(ranges),
            evidence=[
                ("lane", best_lane),
                ("cs_count", best_count),
                ("share_pct", 100.0 * best_share),
            ],
        )
        finding.explanation = render_explanation(finding, match, cfg)
        findings.append(finding)
    return findings


# ---------------------------------------------------------------------------
# Jungle stealing

def detect_jungle_stealing(
    match: MatchTelemetry, cfg: DetectorConfig | None = None
) -> list[SuspicionFinding]:
    """Flag non-junglers taking a large share of their team's jungle economy."""
    cfg = cfg or default_config()
    duration = match.duration_s
    if duration <= cfg.jungle_window_s:
        starts = [0.0]
        width = duration
    else:
        width = cfg.jungle_window_s
        starts = []
        s = 0.0
        while s + width <= duration + 1e-9:
            starts.append(s)
            s += cfg.jungle_step_s
    junglers = {
        p.team: p.player_id for p in match.players if p.assigned_position == "jungle"
    }
    findings = []
    for player in match.players:
        if player.assigned_position == "jungle":
            continue
        pid = player.player_id
        jungler = junglers[player.team]
        flagged: list[tuple[float, tuple[float, float], float]] = []
        for s in starts:
            w0, w1 = s, min(s + width, duration)
            share = jungle_economy_share(match, pid, w0, w1)
            if share < cfg.jungle_share_thresh:
                continue
            gold = jungle_gold(match, pid, w0, w1)
            if gold < cfg.jungle_min_gold:
                continue
            if _alive_fraction(match, jungler, w0, w1) < 0.5:
                continue
            flagged.append((share, (w0, w1), gold))
        if not flagged:
            continue
        max_share, max_window, max_gold = max(flagged, key=lambda f: f[0])
        ranges = merge_ranges([w for _, w, _ in flagged])
        stage_range = next(
            r for r in ranges if r[0] <= max_window[0] and max_window[1] <= r[1]
        )
        stage = stage_of((stage_range[0] + stage_range[1]) / 2, duration)
        finding = SuspicionFinding(
            player_id=pid,
            griefer_type="jungle_stealing",
            severity=_clamp01(max_share / JUNGLE_SEVERITY_SCALE),
            time_ranges=ranges,
            evidence=[
                ("share_pct", 100.0 * max_share),
                ("stage", stage),
                ("window_gold", float(max_gold)),
            ],
        )
        finding.explanation = render_explanation(finding, match, cfg)
        findings.append(finding)
    return findings


# ---------------------------------------------------------------------------
# Non-participation

def detect_non_participation(
    match: MatchTelemetry, layout: ZoneLayout, cfg: DetectorConfig | None = None
) -> list[SuspicionFinding]:
    """Flag players who stay far from the team fights their team shows up for.

    A fight counts for a player when at least three of their teammates are
    among its participants. Players inside it are participants; players alive
    through the fight but beyond ``participate_radius`` of its centroid at
    every tick missed it; dead players are not judged.
    """
    cfg = cfg or default_config()
    fights = detect_team_fights(match, cfg.team_fight)
    if not fights:
        return []
    findings = []
    for player in match.players:
        pid = player.player_id
        eligible = 0
        missed: list[tuple[float, float]] = []
        for fight in fights:
            teammates_in = sum(
                1
                for q in fight.participants
                if q != pid and match.roster[q].team == player.team
            )
            if teammates_in < 3:
                continue
            if pid in fight.participants:
                eligible += 1
                continue
            if not _alive_through(match, pid, fight.t_start, fight.t_end):
                continue
            eligible += 1
            ticks = window_ticks(fight.t_start, fight.t_end, cfg.tick_hz)
            pos = positions_at(match, pid, ticks)
            cx, cy = fight.centroid
            dist2 = (pos[:, 0] - cx) ** 2 + (pos[:, 1] - cy) ** 2
            if (dist2 > cfg.participate_radius**2).all():
                missed.append((fight.t_start, fight.t_end))
        if eligible == 0:
            continue
        frac = len(missed) / eligible
        if len(missed) < cfg.min_missed or frac < cfg.missed_frac:
            continue
        finding = SuspicionFinding(
            player_id=pid,
            griefer_type="non_participation",
            severity=_clamp01(frac),
            time_ranges=merge_ranges(missed),
            evidence=[("missed", len(missed)), ("eligible", eligible)],
        )
        finding.explanation = render_explanation(finding, match, cfg)
        findings.append(finding)
    return findings


# ---------------------------------------------------------------------------
# Position stealing

def _home_zone(player) -> str:
    if player.assigned_position == "jungle":
        return own_jungle(player.team)
    return HOME_ZONE_BY_POSITION[player.assigned_position]


def detect_position_stealing(
    match: MatchTelemetry, layout: ZoneLayout, cfg: DetectorConfig | None = None
) -> list[SuspicionFinding]:
    """Flag players who spend the laning phase squatting a teammate's zone."""
    cfg = cfg or default_config()
    t0, t1 = _laning_phase(match, cfg)
    if t1 <= t0:
        return []
    findings = []
    for player in match.players:
        pid = player.player_id
        occ = zone_occupancy(match, layout, pid, t0, t1, cfg.tick_hz)
        alive_total = sum(occ.values())
        if alive_total <= 0:
            continue
        own = occ[_home_zone(player)] / alive_total
        if own >= cfg.own_frac:
            continue
        candidates = []
        for q in match.players_of_team(player.team):
            if q.player_id == pid:
                continue
            zone = _home_zone(q)
            if zone == _home_zone(player):
                continue
            frac = occ[zone] / alive_total
            if frac >= cfg.squat_frac:
                candidates.append((frac, zone))
        if not candidates:
            continue
        squat_frac, squat_zone = max(candidates)
        ticks = window_ticks(t0, t1, cfg.tick_hz)
        alive = alive_tick_mask(match, pid, ticks)
        pos = positions_at(match, pid, ticks)
        zones = layout.classify_many(pos[:, 0], pos[:, 1])
        squat_idx = layout.zone_ids.index(squat_zone)
        in_zone = alive & (zones == squat_idx)
        ranges = [
            (float(ticks[first]), float(ticks[last]))
            for first, last in _runs(np.where(in_zone)[0])
        ]
        finding = SuspicionFinding(
            player_id=pid,
            griefer_type="position_stealing",
            severity=_clamp01(squat_frac),
            time_ranges=merge_ranges(ranges, gap=cfg.squat_gap_tolerance_s),
            evidence=[
                ("squatted_zone", squat_zone),
                ("squat_pct", 100.0 * squat_frac),
                ("own_pct", 100.0 * own),
            ],
        )
        finding.explanation = render_explanation(finding, match, cfg)
        findings.append(finding)
    return findings


# ---------------------------------------------------------------------------
# Orchestration

def run_all_detectors(
    match: MatchTelemetry,
    layout: ZoneLayout | None = None,
    cfg: DetectorConfig | None = None,
) -> list[PlayerSummary]:
    """Run the six detectors and fold findings into ten per-player summaries."""
    layout = layout or default_layout()
    cfg = cfg or default_config()
    all_findings = [
        *detect_afk(match, layout, cfg),
        *detect_feeding(match, cfg),
        *detect_lane_stealing(match, cfg),
        *detect_jungle_stealing(match, cfg),
        *detect_non_participation(match, layout, cfg),
        *detect_position_stealing(match, layout, cfg),
    ]
    by_player: dict[str, list[SuspicionFinding]] = {}
    for finding in all_findings:
        by_player.setdefault(finding.player_id, []).append(finding)
    summaries = []
    for player in sorted(match.players, key=lambda p: p.player_id):
        findings = sorted(
            by_player.get(player.player_id, []),
            key=lambda f: (-f.severity, f.griefer_type),
        )
        paragraph = (
            " ".join(f.explanation for f in findings) if findings else NO_SUSPICION_TEXT
        )
        summaries.append(
            PlayerSummary(
                player_id=player.player_id,
                hero_type=player.hero_type,
                assigned_position=player.assigned_position,
                report_count=player.report_count,
                findings=findings,
                suspicion_paragraph=paragraph,
            )
        )
    return summaries


# ---------------------------------------------------------------------------
# Stable serialization

def _round4(v: float) -> float:
    return round(v, 4)


def finding_to_dict(f: SuspicionFinding) -> dict:
    evidence = []
    for key, value in f.evidence:
        if isinstance(value, float):
            evidence.append([key, _round4(value)])
        else:
            evidence.append([key, value])
    return {
        "player_id": f.player_id,
        "griefer_type": f.griefer_type,
        "severity": _round4(f.severity),
        "time_ranges": [[_round4(a), _round4(b)] for a, b in f.time_ranges],
        "evidence": evidence,
        "explanation": f.explanation,
    }


def summary_to_dict(s: PlayerSummary) -> dict:
    return {
        "player_id": s.player_id,
        "hero_type": s.hero_type,
        "assigned_position": s.assigned_position,
        "report_count": s.report_count,
        "findings": [finding_to_dict(f) for f in s.findings],
        "suspicion_paragraph": s.suspicion_paragraph,
    }


def summaries_to_json(
    summaries: list[PlayerSummary], config_hash: str | None = None, match_id: str | None = None
) -> str:
    """Canonical findings document: fixed field order, floats at 4 decimals."""
    doc: dict = {}
    if match_id is not None:
        doc["match_id"] = match_id
    if config_hash is not None:
        doc["config_hash"] = config_hash
    doc["players"] = [summary_to_dict(s) for s in summaries]
    return json.dumps(doc, separators=(",", ":"))
