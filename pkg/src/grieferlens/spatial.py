"""Map zone model and spatiotemporal summaries.

Zones are priority-ordered geometries on the unit square; any point not
covered by an explicit zone falls back to a jungle quadrant split along the
anti-diagonal, so classification is total. Dwell heatmaps and zone occupancy
are computed on a fixed-rate tick grid gated by the player's alive intervals,
which gives exact tick-count conservation between the two views.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np

from .errors import BadWindow, OutOfBounds, SchemaViolation
from .telemetry import MatchTelemetry, alive_intervals, positions_at

ZONE_IDS = (
    "fountain_blue",
    "fountain_red",
    "base_blue",
    "base_red",
    "river",
    "mid_lane",
    "top_lane",
    "bot_lane",
    "jungle_blue",
    "jungle_red",
)


def own_fountain(team: str) -> str:
    return f"fountain_{team}"


def own_base(team: str) -> str:
    return f"base_{team}"


def own_jungle(team: str) -> str:
    return f"jungle_{team}"


def enemy_jungle(team: str) -> str:
    return "jungle_red" if team == "blue" else "jungle_blue"


# ---------------------------------------------------------------------------
# Geometry

@dataclass(frozen=True)
class Disk:
    cx: float
    cy: float
    radius: float

    def contains_many(self, xs: np.ndarray, ys: np.ndarray) -> np.ndarray:
        return (xs - self.cx) ** 2 + (ys - self.cy) ** 2 <= self.radius**2

    def to_dict(self) -> dict:
        return {"type": "disk", "center": [self.cx, self.cy], "radius": self.radius}


@dataclass(frozen=True)
class Rect:
    x0: float
    y0: float
    x1: float
    y1: float

    def contains_many(self, xs: np.ndarray, ys: np.ndarray) -> np.ndarray:
        return (xs >= self.x0) & (xs <= self.x1) & (ys >= self.y0) & (ys <= self.y1)

    def to_dict(self) -> dict:
        return {"type": "rect", "min": [self.x0, self.y0], "max": [self.x1, self.y1]}


@dataclass(frozen=True)
class Corridor:
    points: tuple[tuple[float, float], ...]
    half_width: float

    def contains_many(self, xs: np.ndarray, ys: np.ndarray) -> np.ndarray:
        best = np.full(np.shape(xs), np.inf)
        for (ax, ay), (bx, by) in zip(self.points, self.points[1:]):
            dx, dy = bx - ax, by - ay
            seg_len2 = dx * dx + dy * dy
            if seg_len2 == 0:
                d2 = (xs - ax) ** 2 + (ys - ay) ** 2
            else:
                tp = np.clip(((xs - ax) * dx + (ys - ay) * dy) / seg_len2, 0.0, 1.0)
                d2 = (xs - (ax + tp * dx)) ** 2 + (ys - (ay + tp * dy)) ** 2
            best = np.minimum(best, d2)
        return best <= self.half_width**2

    def to_dict(self) -> dict:
        return {
            "type": "corridor",
            "points": [list(p) for p in self.points],
            "half_width": self.half_width,
        }


Geometry = Disk | Rect | Corridor


def _geometry_from_dict(obj: dict, path: str) -> Geometry:
    kind = obj.get("type")
    try:
        if kind == "disk":
            (cx, cy), r = obj["center"], obj["radius"]
            return Disk(float(cx), float(cy), float(r))
        if kind == "rect":
            (x0, y0), (x1, y1) = obj["min"], obj["max"]
            return Rect(float(x0), float(y0), float(x1), float(y1))
        if kind == "corridor":
            pts = tuple((float(x), float(y)) for x, y in obj["points"])
            return Corridor(pts, float(obj["half_width"]))
    except (KeyError, TypeError, ValueError) as exc:
        raise SchemaViolation(f"bad geometry: {exc}", path) from exc
    raise SchemaViolation(f"unknown geometry type {kind!r}", path)


# ---------------------------------------------------------------------------
# Layout

@dataclass(frozen=True)
class ZoneDef:
    zone_id: str
    geometry: Geometry
    priority: int


class ZoneLayout:
    """Priority-ordered zones plus the implicit jungle fallback."""

    def __init__(self, zones: list[ZoneDef] | tuple[ZoneDef, ...]):
        zones = tuple(sorted(zones, key=lambda z: z.priority))
        ids = [z.zone_id for z in zones]
        if len(set(ids)) != len(ids):
            raise SchemaViolation("duplicate zone_id in layout")
        self.zones = zones
        self.zone_ids: tuple[str, ...] = tuple(ids) + ("jungle_blue", "jungle_red")
        self._index = {zid: i for i, zid in enumerate(self.zone_ids)}

    def priority_levels(self) -> list[int]:
        return sorted({z.priority for z in self.zones})

    def classify_many(self, xs: np.ndarray, ys: np.ndarray) -> np.ndarray:
        """Zone index (into self.zone_ids) for each point; total on the square."""
        xs = np.asarray(xs, dtype=float)
        ys = np.asarray(ys, dtype=float)
        out = np.full(xs.shape, -1, dtype=np.int64)
        undecided = np.ones(xs.shape, dtype=bool)
        for i, zone in enumerate(self.zones):
            if not undecided.any():
                break
            hit = undecided & zone.geometry.contains_many(xs, ys)
            out[hit] = i
            undecided &= ~hit
        blue = undecided & (xs + ys < 1.0)
        out[blue] = self._index["jungle_blue"]
        out[undecided & ~blue] = self._index["jungle_red"]
        return out

    def classify(self, x: float, y: float) -> str:
        idx = self.classify_many(np.array([x]), np.array([y]))[0]
        return self.zone_ids[idx]

    def to_dict(self) -> dict:
        return {
            "zones": [
                {"zone_id": z.zone_id, "priority": z.priority, "geometry": z.geometry.to_dict()}
                for z in self.zones
            ]
        }


def layout_from_dict(doc: dict) -> ZoneLayout:
    raw = doc.get("zones")
    if not isinstance(raw, list) or not raw:
        raise SchemaViolation("layout must have a non-empty zones list", "$.zones")
    zones = []
    for i, z in enumerate(raw):
        path = f"$.zones[{i}]"
        try:
            zid = z["zone_id"]
            priority = int(z["priority"])
            geom = _geometry_from_dict(z["geometry"], f"{path}.geometry")
        except (KeyError, TypeError) as exc:
            raise SchemaViolation(f"bad zone: {exc}", path) from exc
        zones.append(ZoneDef(zid, geom, priority))
    return ZoneLayout(zones)


def load_layout(path: str) -> ZoneLayout:
    with open(path, "r", encoding="utf-8") as fh:
        return layout_from_dict(json.load(fh))


def default_layout() -> ZoneLayout:
    """The bundled map: fountains, bases, river, mid, top, bot, jungle fallback."""
    return ZoneLayout(
        [
            ZoneDef("fountain_blue", Disk(0.03, 0.03, 0.04), 0),
            ZoneDef("fountain_red", Disk(0.97, 0.97, 0.04), 0),
            ZoneDef("base_blue", Rect(0.0, 0.0, 0.12, 0.12), 1),
            ZoneDef("base_red", Rect(0.88, 0.88, 1.0, 1.0), 1),
            ZoneDef("river", Corridor(((0.05, 0.95), (0.95, 0.05)), 0.05), 2),
            ZoneDef("mid_lane", Corridor(((0.05, 0.05), (0.95, 0.95)), 0.06), 3),
            ZoneDef("top_lane", Corridor(((0.05, 0.05), (0.05, 0.95), (0.95, 0.95)), 0.07), 4),
            ZoneDef("bot_lane", Corridor(((0.05, 0.05), (0.95, 0.05), (0.95, 0.95)), 0.07), 5),
        ]
    )


def classify_zone(layout: ZoneLayout, x: float, y: float) -> str:
    if not (0.0 <= x <= 1.0 and 0.0 <= y <= 1.0):
        raise OutOfBounds(f"point ({x}, {y}) outside the unit square")
    return layout.classify(x, y)


# ---------------------------------------------------------------------------
# Tick grid helpers

def _check_window(match: MatchTelemetry, t0: float, t1: float) -> None:
    if t0 > t1:
        raise BadWindow(f"window start {t0} after end {t1}")
    if t0 < 0 or t1 > match.duration_s:
        raise BadWindow(f"window [{t0}, {t1}] outside [0, {match.duration_s}]")


def window_ticks(t0: float, t1: float, hz: float = 1.0) -> np.ndarray:
    """Inclusive tick grid t0, t0 + 1/hz, ... covering [t0, t1]."""
    n = int(math.floor((t1 - t0) * hz + 1e-9)) + 1
    return t0 + np.arange(n) / hz


def alive_tick_mask(match: MatchTelemetry, player_id: str, ticks: np.ndarray) -> np.ndarray:
    mask = np.zeros(ticks.shape, dtype=bool)
    for start, end in alive_intervals(match, player_id):
        mask |= (ticks >= start) & (ticks <= end)
    return mask


# ---------------------------------------------------------------------------
# Spatiotemporal summaries

@dataclass
class DwellHeatmap:
    grid_n: int
    cells: np.ndarray  # (grid_n, grid_n) seconds, indexed [ix, iy]
    window: tuple[float, float]

    def total_seconds(self) -> float:
        return float(self.cells.sum())


def dwell_heatmap(
    match: MatchTelemetry,
    layout: ZoneLayout,
    player_id: str,
    t0: float,
    t1: float,
    grid_n: int = 64,
    hz: float = 1.0,
) -> DwellHeatmap:
    """Seconds spent per grid cell over [t0, t1], alive ticks only."""
    _check_window(match, t0, t1)
    if grid_n < 1:
        raise ValueError("grid_n must be >= 1")
    ticks = window_ticks(t0, t1, hz)
    mask = alive_tick_mask(match, player_id, ticks)
    cells = np.zeros((grid_n, grid_n), dtype=float)
    if mask.any():
        pos = positions_at(match, player_id, ticks[mask])
        ix = np.clip(np.floor(pos[:, 0] * grid_n).astype(int), 0, grid_n - 1)
        iy = np.clip(np.floor(pos[:, 1] * grid_n).astype(int), 0, grid_n - 1)
        np.add.at(cells, (ix, iy), 1.0 / hz)
    return DwellHeatmap(grid_n=grid_n, cells=cells, window=(t0, t1))


def zone_occupancy(
    match: MatchTelemetry,
    layout: ZoneLayout,
    player_id: str,
    t0: float,
    t1: float,
    hz: float = 1.0,
) -> dict[str, float]:
    """Seconds per zone over [t0, t1], alive ticks only; all zones present."""
    _check_window(match, t0, t1)
    ticks = window_ticks(t0, t1, hz)
    mask = alive_tick_mask(match, player_id, ticks)
    out = {zid: 0.0 for zid in ZONE_IDS}
    if mask.any():
        pos = positions_at(match, player_id, ticks[mask])
        idx = layout.classify_many(pos[:, 0], pos[:, 1])
        counts = np.bincount(idx, minlength=len(layout.zone_ids))
        for zid, count in zip(layout.zone_ids, counts):
            out[zid] = out.get(zid, 0.0) + float(count) / hz
    return out


def trajectory(
    match: MatchTelemetry,
    player_id: str,
    t0: float,
    t1: float,
    hz: float = 1.0,
) -> list[list[tuple[float, float, float]]]:
    """Resampled (t, x, y) polylines over [t0, t1], broken at death gaps."""
    _check_window(match, t0, t1)
    ticks = window_ticks(t0, t1, hz)
    mask = alive_tick_mask(match, player_id, ticks)
    pos = positions_at(match, player_id, ticks)
    polylines: list[list[tuple[float, float, float]]] = []
    current: list[tuple[float, float, float]] = []
    for i, alive in enumerate(mask):
        if alive:
            current.append((float(ticks[i]), float(pos[i, 0]), float(pos[i, 1])))
        elif current:
            polylines.append(current)
            current = []
    if current:
        polylines.append(current)
    return polylines


def path_displacement(
    match: MatchTelemetry,
    player_id: str,
    t0: float,
    t1: float,
    hz: float = 1.0,
) -> tuple[float, float]:
    """(net, path_length) over alive ticks in the window; (0, 0) if < 2 ticks."""
    _check_window(match, t0, t1)
    ticks = window_ticks(t0, t1, hz)
    mask = alive_tick_mask(match, player_id, ticks)
    if mask.sum() < 2:
        return 0.0, 0.0
    pos = positions_at(match, player_id, ticks[mask])
    steps = np.sqrt(((pos[1:] - pos[:-1]) ** 2).sum(axis=1))
    net = float(np.sqrt(((pos[-1] - pos[0]) ** 2).sum()))
    return net, float(steps.sum())
