// Wire types for the service JSON payloads. The UI never recomputes metrics
// or detection; everything rendered comes from these documents.

export const GRIEFER_TYPES = [
  "afk",
  "feeding",
  "lane_stealing",
  "jungle_stealing",
  "non_participation",
  "position_stealing",
] as const;

export type GrieferType = (typeof GRIEFER_TYPES)[number];

export type TimeRange = [number, number];

export interface FindingDoc {
  player_id: string;
  griefer_type: GrieferType;
  severity: number;
  time_ranges: TimeRange[];
  evidence: [string, unknown][];
  explanation: string;
}

export interface PlayerSummaryDoc {
  player_id: string;
  hero_type: string;
  assigned_position: string;
  report_count: number;
  findings: FindingDoc[];
  suspicion_paragraph: string;
}

export interface SummaryDoc {
  match_id?: string;
  config_hash?: string;
  players: PlayerSummaryDoc[];
}

export interface KeyEvent {
  t: number;
  kind: string;
  victim?: string;
  killer?: string;
  subtype?: string;
  team?: string;
}

export interface SeriesDoc {
  metric_id: string;
  window_s: number;
  values: number[];
}

export interface FightDoc {
  t_start: number;
  t_end: number;
  centroid: [number, number];
  participants: string[];
}

export interface TimelinePayload {
  match_id: string;
  config_hash: string;
  duration_s: number;
  player_id: string;
  key_events: Record<string, KeyEvent[]>;
  team_fights: FightDoc[];
  series: {
    contribution: SeriesDoc;
    gold: SeriesDoc;
    jungle_share: SeriesDoc;
  };
  suspicious_ranges: Record<string, Partial<Record<GrieferType, TimeRange[]>>>;
}

export interface HeatmapPayload {
  match_id: string;
  player_id: string;
  from: number;
  to: number;
  grid_n: number;
  hot_threshold_s: number;
  cells: number[][];
  hot: boolean[][];
}

export interface TrajectoryPayload {
  match_id: string;
  player_id: string;
  from: number;
  to: number;
  polylines: [number, number, number][][];
}

export interface AnnotationRecord {
  annotation_id: string;
  match_id: string;
  author: string;
  created_at: string;
  target_player: string;
  kind: "label" | "note";
  griefer_types: GrieferType[];
  time_range: TimeRange | null;
  tags: string[];
  text: string;
}

export interface ExportEntry {
  source: "algorithm" | "human";
  [key: string]: unknown;
}

export interface ExportDoc {
  match_id: string;
  config_hash: string;
  entries: ExportEntry[];
}
