// Application wiring: fetch payloads, hold ViewState, re-render on change.

import { ApiClient, ApiError } from "./api.js";
import { draftFromState, toRequestBody, validateDraft } from "./annotations.js";
import type { DraftAnnotation } from "./annotations.js";
import { paintHeatmap, trajectoryPaths } from "./mapview.js";
import {
  renderAnnotationPanel,
  renderErrorBanner,
  renderMapView,
  renderSummaryView,
  renderTimeline,
} from "./render.js";
import {
  brushWindow,
  clickSpan,
  initialState,
  selectFlaggedCell,
  selectMatch,
  selectPlayer,
} from "./state.js";
import type { ViewState } from "./state.js";
import { buildSummaryGrid } from "./summary.js";
import { buildContributionBars, buildEventLanes, collectHighlightSpans } from "./timeline.js";
import type { SummaryDoc, TimelinePayload } from "./types.js";

const api = new ApiClient("");

let state: ViewState = initialState();
let draft: DraftAnnotation = draftFromState(state);
let draftErrors: string[] = [];
let summaryDoc: SummaryDoc | null = null;
let timelinePayload: TimelinePayload | null = null;

const el = (id: string) => document.getElementById(id) as HTMLElement;

function setState(next: ViewState): void {
  const playerChanged = next.selectedPlayer !== state.selectedPlayer;
  const windowChanged =
    JSON.stringify(next.activeWindow) !== JSON.stringify(state.activeWindow);
  state = next;
  draft = { ...draft, ...draftFromState(state, draft.author) };
  void refresh(playerChanged, windowChanged);
}

async function refresh(reloadTimeline: boolean, reloadMap: boolean): Promise<void> {
  try {
    renderErrorBanner(document.body, null);
    if (!state.selectedMatch) return;
    if (!summaryDoc) {
      summaryDoc = await api.summary(state.selectedMatch);
    }
    renderSummaryView(
      el("summary-view"),
      buildSummaryGrid(summaryDoc),
      state.selectedPlayer,
      (playerId, grieferType) => setState(selectFlaggedCell(state, playerId, grieferType)),
      (playerId) => setState(selectPlayer(state, playerId)),
    );
    if (state.selectedPlayer) {
      if (reloadTimeline || !timelinePayload || timelinePayload.player_id !== state.selectedPlayer) {
        timelinePayload = await api.timeline(state.selectedMatch, state.selectedPlayer);
      }
      const payload = timelinePayload;
      renderTimeline(
        el("timeline-view"),
        payload,
        buildEventLanes(payload),
        buildContributionBars(payload),
        collectHighlightSpans(payload),
        state.activeWindow,
        (span) => setState(clickSpan(state, span)),
        (t0, t1) => setState(brushWindow(state, t0, t1, payload.duration_s)),
      );
      if (state.activeWindow) {
        const [t0, t1] = state.activeWindow;
        const [heatmap, trajectory] = await Promise.all([
          api.heatmap(state.selectedMatch, state.selectedPlayer, t0, t1),
          api.trajectory(state.selectedMatch, state.selectedPlayer, t0, t1),
        ]);
        const canvas = el("map-canvas") as HTMLCanvasElement;
        renderMapView(canvas, paintHeatmap(heatmap), heatmap.grid_n, trajectoryPaths(trajectory));
      }
    }
    const records = await api.annotations(state.selectedMatch);
    renderAnnotationPanel(
      el("annotation-panel"),
      draft,
      records,
      draftErrors,
      () => void submitDraft(),
      (annotationId) => void removeAnnotation(annotationId),
      (patch) => {
        draft = { ...draft, ...patch };
        void refresh(false, false);
      },
    );
  } catch (err) {
    const message = err instanceof ApiError ? `${err.code}: ${err.message}` : String(err);
    renderErrorBanner(document.body, message);
  }
}

async function submitDraft(): Promise<void> {
  if (!state.selectedMatch || !timelinePayload) return;
  draftErrors = validateDraft(draft, timelinePayload.duration_s);
  if (draftErrors.length > 0) {
    await refresh(false, false); // inline validation only; no request
    return;
  }
  await api.addAnnotation(state.selectedMatch, toRequestBody(draft));
  draft = draftFromState(state, draft.author);
  await refresh(false, false);
}

async function removeAnnotation(annotationId: string): Promise<void> {
  if (!state.selectedMatch) return;
  await api.deleteAnnotation(state.selectedMatch, annotationId);
  await refresh(false, false);
}

async function boot(): Promise<void> {
  const picker = el("match-picker") as HTMLSelectElement;
  const matches = await api.listMatches();
  picker.innerHTML =
    `<option value="">select a match</option>` +
    matches.map((m) => `<option value="${m}">${m}</option>`).join("");
  picker.addEventListener("change", () => {
    summaryDoc = null;
    timelinePayload = null;
    if (picker.value) {
      setState(selectMatch(state, picker.value));
    }
  });
}

void boot();
