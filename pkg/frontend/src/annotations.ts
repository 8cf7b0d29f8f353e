// Annotation panel model: draft building, client-side validation, submission
// payloads. Optimistic UI is forbidden; the list is re-read after the server
// acknowledges a write.

import type { GrieferType, TimeRange } from "./types.js";
import { GRIEFER_TYPES } from "./types.js";
import type { ViewState } from "./state.js";

export interface DraftAnnotation {
  author: string;
  targetPlayer: string;
  kind: "label" | "note";
  grieferTypes: GrieferType[];
  timeRange: TimeRange | null;
  tags: string[];
  text: string;
}

/** Pre-fill the form from the current selection and active window. */
export function draftFromState(state: ViewState, author = ""): DraftAnnotation {
  return {
    author,
    targetPlayer: state.selectedPlayer ?? "",
    kind: "label",
    grieferTypes: state.highlightedFinding ? [state.highlightedFinding.grieferType] : [],
    timeRange: state.activeWindow,
    tags: [],
    text: "",
  };
}

/** Inline validation: a non-empty error list means no request is sent. */
export function validateDraft(draft: DraftAnnotation, durationS: number): string[] {
  const errors: string[] = [];
  if (!draft.author.trim()) {
    errors.push("author is required");
  }
  if (!draft.targetPlayer) {
    errors.push("select a target player");
  }
  if (draft.kind === "label" && draft.grieferTypes.length === 0) {
    errors.push("a label needs at least one griefer type");
  }
  if (draft.kind === "note" && !draft.text.trim()) {
    errors.push("a note needs text");
  }
  for (const t of draft.grieferTypes) {
    if (!GRIEFER_TYPES.includes(t)) {
      errors.push(`unknown griefer type ${t}`);
    }
  }
  if (draft.timeRange) {
    const [t0, t1] = draft.timeRange;
    if (!(t0 >= 0 && t0 <= t1 && t1 <= durationS)) {
      errors.push("time range must lie inside the match");
    }
  }
  return errors;
}

export function toRequestBody(draft: DraftAnnotation): Record<string, unknown> {
  return {
    author: draft.author,
    target_player: draft.targetPlayer,
    kind: draft.kind,
    griefer_types: draft.grieferTypes,
    time_range: draft.timeRange,
    tags: draft.tags,
    text: draft.text,
  };
}
