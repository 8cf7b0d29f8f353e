// Map sub-view model: zone outlines, dwell-heatmap cell paints with hot cells
// in the red band, and alive-clipped trajectory polylines.
//
// The zone geometry here is a display-only copy of the service's bundled
// layout, used for outlines and labels; detection and dwell all come from the
// server payloads.

import type { HeatmapPayload, TrajectoryPayload } from "./types.js";

export type ZoneShape =
  | { kind: "disk"; zone: string; cx: number; cy: number; r: number }
  | { kind: "rect"; zone: string; x0: number; y0: number; x1: number; y1: number }
  | { kind: "corridor"; zone: string; points: [number, number][]; halfWidth: number };

export const ZONE_SHAPES: ZoneShape[] = [
  { kind: "disk", zone: "fountain_blue", cx: 0.03, cy: 0.03, r: 0.04 },
  { kind: "disk", zone: "fountain_red", cx: 0.97, cy: 0.97, r: 0.04 },
  { kind: "rect", zone: "base_blue", x0: 0, y0: 0, x1: 0.12, y1: 0.12 },
  { kind: "rect", zone: "base_red", x0: 0.88, y0: 0.88, x1: 1, y1: 1 },
  { kind: "corridor", zone: "river", points: [[0.05, 0.95], [0.95, 0.05]], halfWidth: 0.05 },
  { kind: "corridor", zone: "mid_lane", points: [[0.05, 0.05], [0.95, 0.95]], halfWidth: 0.06 },
  { kind: "corridor", zone: "top_lane", points: [[0.05, 0.05], [0.05, 0.95], [0.95, 0.95]], halfWidth: 0.07 },
  { kind: "corridor", zone: "bot_lane", points: [[0.05, 0.05], [0.95, 0.05], [0.95, 0.95]], halfWidth: 0.07 },
];

function segmentDistance(
  x: number,
  y: number,
  a: [number, number],
  b: [number, number],
): number {
  const dx = b[0] - a[0];
  const dy = b[1] - a[1];
  const len2 = dx * dx + dy * dy;
  const t = len2 === 0 ? 0 : Math.max(0, Math.min(1, ((x - a[0]) * dx + (y - a[1]) * dy) / len2));
  return Math.hypot(x - (a[0] + t * dx), y - (a[1] + t * dy));
}

/** Display label for a point; mirrors the server's priority order. */
export function classifyZone(x: number, y: number): string {
  for (const shape of ZONE_SHAPES) {
    if (shape.kind === "disk") {
      if (Math.hypot(x - shape.cx, y - shape.cy) <= shape.r) return shape.zone;
    } else if (shape.kind === "rect") {
      if (x >= shape.x0 && x <= shape.x1 && y >= shape.y0 && y <= shape.y1) return shape.zone;
    } else {
      for (let i = 0; i + 1 < shape.points.length; i++) {
        if (segmentDistance(x, y, shape.points[i], shape.points[i + 1]) <= shape.halfWidth) {
          return shape.zone;
        }
      }
    }
  }
  return x + y < 1 ? "jungle_blue" : "jungle_red";
}

export interface HeatCellPaint {
  ix: number;
  iy: number;
  dwellS: number;
  hot: boolean;
  color: string;
  zone: string;
}

/**
 * Color ramp: cold dwell fades through amber; cells past the hot threshold
 * (server-flagged, > 30 s) land in the red band.
 */
export function colorForDwell(dwellS: number, hot: boolean, thresholdS: number): string {
  if (hot) {
    const extra = Math.min(1, (dwellS - thresholdS) / (2 * thresholdS));
    const g = Math.round(64 - 64 * extra);
    return `rgb(220, ${g}, ${g})`;
  }
  const warmth = Math.min(1, dwellS / thresholdS);
  const g = Math.round(200 - 90 * warmth);
  return `rgb(${Math.round(120 + 120 * warmth)}, ${g}, 60)`;
}

export function paintHeatmap(payload: HeatmapPayload): HeatCellPaint[] {
  const paints: HeatCellPaint[] = [];
  const n = payload.grid_n;
  for (let ix = 0; ix < n; ix++) {
    for (let iy = 0; iy < n; iy++) {
      const dwellS = payload.cells[ix][iy];
      if (dwellS <= 0) continue;
      const hot = payload.hot[ix][iy];
      paints.push({
        ix,
        iy,
        dwellS,
        hot,
        color: colorForDwell(dwellS, hot, payload.hot_threshold_s),
        zone: classifyZone((ix + 0.5) / n, (iy + 0.5) / n),
      });
    }
  }
  return paints;
}

export function hotCells(payload: HeatmapPayload): HeatCellPaint[] {
  return paintHeatmap(payload).filter((p) => p.hot);
}

/** Trajectory polylines as drawable point lists; gaps mark deaths. */
export function trajectoryPaths(payload: TrajectoryPayload): [number, number][][] {
  return payload.polylines.map((line) => line.map(([, x, y]) => [x, y] as [number, number]));
}
