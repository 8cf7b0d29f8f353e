// Reviewer view state and its transitions. The UI is stateless beyond this:
// replaying the same clicks against the same server yields the same data.

import type { GrieferType, TimeRange } from "./types.js";

export interface HighlightedFinding {
  playerId: string;
  grieferType: GrieferType;
}

export interface ViewState {
  selectedMatch: string | null;
  selectedPlayer: string | null;
  activeWindow: TimeRange | null;
  highlightedFinding: HighlightedFinding | null;
}

export function initialState(): ViewState {
  return {
    selectedMatch: null,
    selectedPlayer: null,
    activeWindow: null,
    highlightedFinding: null,
  };
}

export function selectMatch(state: ViewState, matchId: string): ViewState {
  return { ...initialState(), selectedMatch: matchId };
}

export function selectPlayer(state: ViewState, playerId: string): ViewState {
  return { ...state, selectedPlayer: playerId, highlightedFinding: null };
}

/** Clicking a flagged summary cell selects the player and its finding. */
export function selectFlaggedCell(
  state: ViewState,
  playerId: string,
  grieferType: GrieferType,
): ViewState {
  return {
    ...state,
    selectedPlayer: playerId,
    highlightedFinding: { playerId, grieferType },
  };
}

/** Clicking a highlighted span focuses the replay on that period. */
export function clickSpan(
  state: ViewState,
  span: { playerId: string; grieferType: GrieferType; t0: number; t1: number },
): ViewState {
  return {
    ...state,
    activeWindow: [span.t0, span.t1],
    highlightedFinding: { playerId: span.playerId, grieferType: span.grieferType },
  };
}

/** Brushing the timeline sets the active window, clamped to the match. */
export function brushWindow(
  state: ViewState,
  t0: number,
  t1: number,
  durationS: number,
): ViewState {
  const lo = Math.max(0, Math.min(t0, t1));
  const hi = Math.min(durationS, Math.max(t0, t1));
  if (hi <= lo) {
    return state;
  }
  return { ...state, activeWindow: [lo, hi] };
}
