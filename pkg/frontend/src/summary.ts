// Player summary view model: ten rows, one cell per griefer type.

import { GRIEFER_TYPES } from "./types.js";
import type { FindingDoc, GrieferType, SummaryDoc } from "./types.js";

export interface SummaryCell {
  grieferType: GrieferType;
  flagged: boolean;
  severity: number | null;
  finding: FindingDoc | null;
}

export interface SummaryRow {
  playerId: string;
  heroType: string;
  assignedPosition: string;
  reportCount: number;
  cells: SummaryCell[];
  paragraph: string;
}

export function buildSummaryGrid(doc: SummaryDoc): SummaryRow[] {
  return doc.players.map((player) => {
    const byType = new Map(player.findings.map((f) => [f.griefer_type, f]));
    const cells: SummaryCell[] = GRIEFER_TYPES.map((grieferType) => {
      const finding = byType.get(grieferType) ?? null;
      return {
        grieferType,
        flagged: finding !== null,
        severity: finding ? finding.severity : null,
        finding,
      };
    });
    return {
      playerId: player.player_id,
      heroType: player.hero_type,
      assignedPosition: player.assigned_position,
      reportCount: player.report_count,
      cells,
      paragraph: player.suspicion_paragraph,
    };
  });
}

export function flaggedCells(rows: SummaryRow[]): { row: SummaryRow; cell: SummaryCell }[] {
  const out: { row: SummaryRow; cell: SummaryCell }[] = [];
  for (const row of rows) {
    for (const cell of row.cells) {
      if (cell.flagged) {
        out.push({ row, cell });
      }
    }
  }
  return out;
}
