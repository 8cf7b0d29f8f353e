// Replay timeline view model: per-player event lanes, the selected player's
// 20 s contribution bars, and the highlighted suspicious spans.
//
// Spans come exclusively from the server's suspicious_ranges payload (which
// equals the summary findings' time ranges); the UI never invents one.

import type { GrieferType, TimelinePayload, TimeRange } from "./types.js";

export const INACTIVE_BAR_THRESHOLD = 0.1;

export interface HighlightSpan {
  playerId: string;
  grieferType: GrieferType;
  t0: number;
  t1: number;
}

export interface ContributionBar {
  index: number;
  t0: number;
  t1: number;
  value: number;
  inactive: boolean;
}

export interface EventMark {
  t: number;
  kind: string;
  label: string;
}

export interface EventLane {
  playerId: string;
  events: EventMark[];
}

export function collectHighlightSpans(payload: TimelinePayload): HighlightSpan[] {
  const spans: HighlightSpan[] = [];
  for (const [playerId, byType] of Object.entries(payload.suspicious_ranges)) {
    for (const [grieferType, ranges] of Object.entries(byType)) {
      for (const [t0, t1] of ranges as TimeRange[]) {
        spans.push({ playerId, grieferType: grieferType as GrieferType, t0, t1 });
      }
    }
  }
  spans.sort((a, b) => a.t0 - b.t0 || a.playerId.localeCompare(b.playerId));
  return spans;
}

export function buildContributionBars(payload: TimelinePayload): ContributionBar[] {
  const { window_s: windowS, values } = payload.series.contribution;
  return values.map((value, index) => ({
    index,
    t0: index * windowS,
    t1: Math.min((index + 1) * windowS, payload.duration_s),
    value,
    inactive: value < INACTIVE_BAR_THRESHOLD,
  }));
}

export function buildEventLanes(payload: TimelinePayload): EventLane[] {
  return Object.entries(payload.key_events).map(([playerId, events]) => ({
    playerId,
    events: events.map((e) => ({
      t: e.t,
      kind: e.kind,
      label:
        e.kind === "kill"
          ? `kill ${e.victim ?? ""}`
          : e.kind === "death"
            ? `killed by ${e.killer ?? ""}`
            : e.kind,
    })),
  }));
}

/** Fraction of the timeline width for a timestamp. */
export function timeToFrac(t: number, durationS: number): number {
  return Math.max(0, Math.min(1, t / durationS));
}

/** Inverse of timeToFrac, for brush interactions. */
export function fracToTime(frac: number, durationS: number): number {
  return Math.max(0, Math.min(1, frac)) * durationS;
}
