"""Griefer detection and match annotation workbench for MOBA telemetry.

The library computes spatiotemporal behavioral metrics over normalized match
telemetry, flags six griefer archetypes with explainable rule-based
detectors, and summarizes replays as timelines and map heatmaps. A deterministic
match simulator provides labeled corpora for evaluating the detectors, and an
HTTP service exposes summaries, replay payloads, and reviewer annotations.
"""

from .config import DetectorConfig, default_config, load_config
from .detect import (
    GRIEFER_TYPES,
    PlayerSummary,
    SuspicionFinding,
    render_explanation,
    run_all_detectors,
    summaries_to_json,
)
from .errors import (
    BadTime,
    BadWindow,
    GrieferLensError,
    InvalidScenario,
    InvariantViolation,
    IoFailure,
    MalformedInput,
    MissingEvidenceKey,
    NoSamples,
    OutOfBounds,
    SchemaViolation,
    UnknownPlayer,
)
from .metrics import (
    ContributionWeights,
    MetricSeries,
    TeamFight,
    TeamFightParams,
    contribution_series,
    detect_team_fights,
    gold_series,
    jungle_economy_share,
    lane_cs_stats,
    stage_of,
)
from .spatial import (
    DwellHeatmap,
    ZoneLayout,
    classify_zone,
    default_layout,
    dwell_heatmap,
    load_layout,
    path_displacement,
    trajectory,
    zone_occupancy,
)
from .telemetry import (
    GameEvent,
    MatchTelemetry,
    PlayerInfo,
    PositionSample,
    alive_intervals,
    parse_match,
    position_at,
    resample_positions,
    serialize_match,
)

__version__ = "0.1.0"
