"""Analysis configuration: detector thresholds, weights, and explanation templates.

All knobs referenced by the detectors live here with their pinned defaults so
a single JSON file can re-tune a deployment. Every derived output reports
``config_hash`` for provenance; the hash covers the full canonical config.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field, fields

from .errors import SchemaViolation
from .metrics import ContributionWeights, TeamFightParams

DEFAULT_TEMPLATES: dict[str, str] = {
    "afk": (
        "{player} ({hero_type}) appeared away from keyboard for {afk_total_s} "
        "seconds across {interval_count} idle interval(s)."
    ),
    "feeding": (
        "{player} ({hero_type}) died {deaths} times with a death-to-contribution "
        "ratio of {kda_ratio} while dealing only {dpd} damage in the 15 seconds "
        "before each death."
    ),
    "lane_stealing": (
        "{player} ({hero_type}) took {cs_count} creeps ({share_pct}% of team "
        "creeps) in the {lane} lane assigned to a teammate."
    ),
    "jungle_stealing": (
        "{player} ({hero_type}) had a high jungle economy value ({share_pct}% "
        "of team) during the {stage} stage."
    ),
    "non_participation": (
        "{player} ({hero_type}) stayed away from {missed} of {eligible} "
        "eligible team fights."
    ),
    "position_stealing": (
        "{player} ({hero_type}) spent {squat_pct}% of the laning phase in "
        "{squatted_zone} while holding their own position only {own_pct}% of "
        "the time."
    ),
}


@dataclass(frozen=True)
class DetectorConfig:
    # AFK
    afk_idle_min_s: float = 60.0
    afk_idle_eps: float = 0.01
    afk_fountain_stay_s: float = 20.0
    afk_post_recall_grace_s: float = 10.0
    afk_respawn_grace_s: float = 10.0
    afk_total_min_s: float = 90.0
    # feeding
    feed_min_deaths: int = 8
    feed_kda_ratio: float = 3.0
    feed_passive_frac: float = 0.10
    feed_pre_death_window_s: float = 15.0
    # laning phase (lane and position stealing)
    laning_start_s: float = 90.0
    laning_end_s: float = 600.0
    # lane stealing
    steal_min_cs: int = 25
    steal_share: float = 0.30
    # jungle stealing
    jungle_window_s: float = 300.0
    jungle_step_s: float = 60.0
    jungle_share_thresh: float = 0.40
    jungle_min_gold: float = 150.0
    # non-participation
    participate_radius: float = 0.15
    min_missed: int = 2
    missed_frac: float = 0.5
    # position stealing
    squat_frac: float = 0.6
    own_frac: float = 0.2
    squat_gap_tolerance_s: float = 30.0
    # shared
    tick_hz: float = 1.0
    contribution_window_s: float = 20.0
    weights: ContributionWeights = field(default_factory=ContributionWeights)
    team_fight: TeamFightParams = field(default_factory=TeamFightParams)
    templates: dict[str, str] = field(default_factory=lambda: dict(DEFAULT_TEMPLATES))

    def __post_init__(self):
        for name in (
            "afk_idle_min_s",
            "afk_idle_eps",
            "afk_fountain_stay_s",
            "afk_total_min_s",
            "feed_min_deaths",
            "feed_kda_ratio",
            "feed_pre_death_window_s",
            "steal_min_cs",
            "jungle_window_s",
            "jungle_step_s",
            "jungle_min_gold",
            "participate_radius",
            "min_missed",
            "tick_hz",
            "contribution_window_s",
        ):
            if getattr(self, name) <= 0:
                raise SchemaViolation(f"{name} must be positive")
        for name in (
            "feed_passive_frac",
            "steal_share",
            "jungle_share_thresh",
            "missed_frac",
            "squat_frac",
            "own_frac",
        ):
            value = getattr(self, name)
            if not 0 < value <= 1:
                raise SchemaViolation(f"{name} must be in (0, 1]")

    def to_dict(self) -> dict:
        out = {}
        for f in fields(self):
            value = getattr(self, f.name)
            if f.name == "weights":
                value = {
                    "damage": value.damage,
                    "objective_damage": value.objective_damage,
                    "heal": value.heal,
                    "gold": value.gold,
                    "cs": value.cs,
                }
            elif f.name == "team_fight":
                value = {
                    "cluster_radius": value.cluster_radius,
                    "time_gap": value.time_gap,
                    "min_duration": value.min_duration,
                    "min_per_team": value.min_per_team,
                }
            elif f.name == "templates":
                value = dict(value)
            out[f.name] = value
        return out

    def config_hash(self) -> str:
        canonical = json.dumps(self.to_dict(), sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(canonical.encode("utf-8")).hexdigest()[:12]


def default_config() -> DetectorConfig:
    return DetectorConfig()


def config_from_dict(doc: dict) -> DetectorConfig:
    """Build a config from a (possibly partial) JSON object; unknown keys fail."""
    if not isinstance(doc, dict):
        raise SchemaViolation("config must be an object", "$")
    known = {f.name for f in fields(DetectorConfig)}
    unknown = set(doc) - known
    if unknown:
        raise SchemaViolation(f"unknown config keys: {sorted(unknown)}", "$")
    kwargs: dict = dict(doc)
    if "weights" in kwargs:
        kwargs["weights"] = ContributionWeights(**kwargs["weights"])
    if "team_fight" in kwargs:
        kwargs["team_fight"] = TeamFightParams(**kwargs["team_fight"])
    if "templates" in kwargs:
        merged = dict(DEFAULT_TEMPLATES)
        merged.update(kwargs["templates"])
        kwargs["templates"] = merged
    try:
        return DetectorConfig(**kwargs)
    except TypeError as exc:
        raise SchemaViolation(f"bad config: {exc}", "$") from exc


def load_config(path: str) -> DetectorConfig:
    with open(path, "r", encoding="utf-8") as fh:
        return config_from_dict(json.load(fh))
