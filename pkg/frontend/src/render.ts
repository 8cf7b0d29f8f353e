// DOM renderers. These take the pure view models and paint them; all
// interaction callbacks are passed in so the wiring lives in main.ts.

import type { DraftAnnotation } from "./annotations.js";
import type { HighlightSpan, ContributionBar, EventLane } from "./timeline.js";
import type { SummaryRow } from "./summary.js";
import type { HeatCellPaint } from "./mapview.js";
import { ZONE_SHAPES } from "./mapview.js";
import { timeToFrac } from "./timeline.js";
import type { AnnotationRecord, GrieferType, TimelinePayload } from "./types.js";
import { GRIEFER_TYPES } from "./types.js";

const TYPE_SHORT: Record<GrieferType, string> = {
  afk: "AFK",
  feeding: "FD",
  lane_stealing: "LS",
  jungle_stealing: "JS",
  non_participation: "NP",
  position_stealing: "PS",
};

export function renderErrorBanner(container: HTMLElement, message: string | null): void {
  let banner = container.querySelector<HTMLElement>(".error-banner");
  if (!message) {
    banner?.remove();
    return;
  }
  if (!banner) {
    banner = document.createElement("div");
    banner.className = "error-banner";
    container.prepend(banner);
  }
  banner.textContent = message;
}

export function renderSummaryView(
  container: HTMLElement,
  rows: SummaryRow[],
  selectedPlayer: string | null,
  onCellClick: (playerId: string, grieferType: GrieferType) => void,
  onRowClick: (playerId: string) => void,
): void {
  const header = `<tr><th>player</th>${GRIEFER_TYPES.map((t) => `<th>${TYPE_SHORT[t]}</th>`).join("")}<th>reports</th><th>hero</th><th>position</th></tr>`;
  const body = rows
    .map((row) => {
      const cells = row.cells
        .map((cell) => {
          if (!cell.flagged) {
            return `<td class="cell clean" data-player="${row.playerId}" data-type="${cell.grieferType}"></td>`;
          }
          const pct = Math.round((cell.severity ?? 0) * 100);
          return `<td class="cell flagged" data-player="${row.playerId}" data-type="${cell.grieferType}" title="${cell.finding?.explanation ?? ""}">${(cell.severity ?? 0).toFixed(2)}<div class="sev" style="width:${pct}%"></div></td>`;
        })
        .join("");
      const selected = row.playerId === selectedPlayer ? " selected" : "";
      return (
        `<tr class="player-row${selected}" data-player="${row.playerId}">` +
        `<td class="pid">${row.playerId}</td>${cells}` +
        `<td>${row.reportCount}</td><td>${row.heroType}</td><td>${row.assignedPosition}</td></tr>` +
        `<tr class="paragraph-row"><td colspan="10" class="paragraph">${row.paragraph}</td></tr>`
      );
    })
    .join("");
  container.innerHTML = `<table class="summary">${header}${body}</table>`;
  container.querySelectorAll<HTMLElement>("td.cell.flagged").forEach((el) => {
    el.addEventListener("click", (event) => {
      event.stopPropagation();
      onCellClick(el.dataset.player as string, el.dataset.type as GrieferType);
    });
  });
  container.querySelectorAll<HTMLElement>("tr.player-row").forEach((el) => {
    el.addEventListener("click", () => onRowClick(el.dataset.player as string));
  });
}

export function renderTimeline(
  container: HTMLElement,
  payload: TimelinePayload,
  lanes: EventLane[],
  bars: ContributionBar[],
  spans: HighlightSpan[],
  activeWindow: [number, number] | null,
  onSpanClick: (span: HighlightSpan) => void,
  onBrush: (t0: number, t1: number) => void,
): void {
  const duration = payload.duration_s;
  const laneHtml = lanes
    .map((lane) => {
      const marks = lane.events
        .map(
          (e) =>
            `<i class="mark ${e.kind}" style="left:${(timeToFrac(e.t, duration) * 100).toFixed(2)}%" title="${e.t.toFixed(0)}s ${e.label}"></i>`,
        )
        .join("");
      const laneSpans = spans
        .filter((s) => s.playerId === lane.playerId)
        .map((s, i) => {
          const left = timeToFrac(s.t0, duration) * 100;
          const width = Math.max(0.4, (timeToFrac(s.t1, duration) - timeToFrac(s.t0, duration)) * 100);
          return `<b class="span" data-index="${spans.indexOf(s)}" style="left:${left.toFixed(2)}%;width:${width.toFixed(2)}%" title="${s.grieferType} [${s.t0.toFixed(0)}, ${s.t1.toFixed(0)}]"></b>`;
        })
        .join("");
      return `<div class="lane"><span class="lane-label">${lane.playerId}</span><div class="lane-track">${laneSpans}${marks}</div></div>`;
    })
    .join("");
  const barHtml = bars
    .map((bar) => {
      const left = timeToFrac(bar.t0, duration) * 100;
      const width = (timeToFrac(bar.t1, duration) - timeToFrac(bar.t0, duration)) * 100;
      const height = Math.max(2, bar.value * 100);
      const cls = bar.inactive ? "bar inactive" : "bar";
      return `<i class="${cls}" style="left:${left.toFixed(2)}%;width:${width.toFixed(2)}%;height:${height.toFixed(0)}%" title="window ${bar.index}: ${bar.value.toFixed(2)}${bar.inactive ? " (Inactive)" : ""}"></i>`;
    })
    .join("");
  const windowHtml = activeWindow
    ? `<b class="active-window" style="left:${(timeToFrac(activeWindow[0], duration) * 100).toFixed(2)}%;width:${((timeToFrac(activeWindow[1], duration) - timeToFrac(activeWindow[0], duration)) * 100).toFixed(2)}%"></b>`
    : "";
  container.innerHTML =
    `<div class="lanes">${laneHtml}</div>` +
    `<div class="bars" title="contribution of ${payload.player_id}, low bars read as Inactive">${barHtml}${windowHtml}</div>` +
    `<div class="brush-hint">drag across the bars to focus a period</div>`;

  container.querySelectorAll<HTMLElement>("b.span").forEach((el) => {
    el.addEventListener("click", () => {
      onSpanClick(spans[Number(el.dataset.index)]);
    });
  });

  const barsEl = container.querySelector<HTMLElement>(".bars");
  if (barsEl) {
    let dragStart: number | null = null;
    const frac = (event: MouseEvent) => {
      const rect = barsEl.getBoundingClientRect();
      return (event.clientX - rect.left) / rect.width;
    };
    barsEl.addEventListener("mousedown", (event) => {
      dragStart = frac(event);
    });
    barsEl.addEventListener("mouseup", (event) => {
      if (dragStart === null) return;
      const a = dragStart * duration;
      const b = frac(event) * duration;
      dragStart = null;
      if (Math.abs(b - a) > 1) {
        onBrush(Math.min(a, b), Math.max(a, b));
      }
    });
  }
}

export function renderMapView(
  canvas: HTMLCanvasElement,
  paints: HeatCellPaint[],
  gridN: number,
  paths: [number, number][][],
): void {
  const ctx = canvas.getContext("2d");
  if (!ctx) return;
  const size = canvas.width;
  const px = (v: number) => v * size;
  const py = (v: number) => size - v * size; // y grows upward on the map
  ctx.clearRect(0, 0, size, size);
  ctx.fillStyle = "#10141a";
  ctx.fillRect(0, 0, size, size);

  ctx.strokeStyle = "rgba(140, 160, 180, 0.5)";
  ctx.lineWidth = 1;
  for (const shape of ZONE_SHAPES) {
    ctx.beginPath();
    if (shape.kind === "disk") {
      ctx.arc(px(shape.cx), py(shape.cy), shape.r * size, 0, Math.PI * 2);
    } else if (shape.kind === "rect") {
      ctx.rect(px(shape.x0), py(shape.y1), (shape.x1 - shape.x0) * size, (shape.y1 - shape.y0) * size);
    } else {
      ctx.moveTo(px(shape.points[0][0]), py(shape.points[0][1]));
      for (const [x, y] of shape.points.slice(1)) {
        ctx.lineTo(px(x), py(y));
      }
    }
    ctx.stroke();
  }

  const cell = size / gridN;
  for (const paint of paints) {
    ctx.fillStyle = paint.color;
    ctx.fillRect(paint.ix * cell, size - (paint.iy + 1) * cell, cell, cell);
  }

  ctx.strokeStyle = "#7fd1ff";
  ctx.lineWidth = 1.5;
  for (const path of paths) {
    if (path.length === 0) continue;
    ctx.beginPath();
    ctx.moveTo(px(path[0][0]), py(path[0][1]));
    for (const [x, y] of path.slice(1)) {
      ctx.lineTo(px(x), py(y));
    }
    ctx.stroke();
  }
}

export function renderAnnotationPanel(
  container: HTMLElement,
  draft: DraftAnnotation,
  records: AnnotationRecord[],
  errors: string[],
  onSubmit: () => void,
  onDelete: (annotationId: string) => void,
  onDraftChange: (patch: Partial<DraftAnnotation>) => void,
): void {
  const typeOptions = GRIEFER_TYPES.map(
    (t) =>
      `<label><input type="checkbox" class="gt" value="${t}" ${draft.grieferTypes.includes(t) ? "checked" : ""}/>${t}</label>`,
  ).join(" ");
  const rangeText = draft.timeRange
    ? `[${draft.timeRange[0].toFixed(0)}, ${draft.timeRange[1].toFixed(0)}] s`
    : "whole match";
  const list = records
    .map(
      (r) =>
        `<li><span class="who">${r.author}</span> ${r.kind} on <b>${r.target_player}</b>` +
        ` ${r.griefer_types.join(", ")}${r.time_range ? ` [${r.time_range[0].toFixed(0)}, ${r.time_range[1].toFixed(0)}]` : ""}` +
        `${r.text ? ` — ${r.text}` : ""} <button class="del" data-id="${r.annotation_id}">x</button></li>`,
    )
    .join("");
  container.innerHTML =
    `<h3>annotations</h3>` +
    `<div class="draft">` +
    `<input class="author" placeholder="author" value="${draft.author}"/>` +
    `<span class="target">target: <b>${draft.targetPlayer || "(select a player)"}</b></span>` +
    `<span class="range">range: ${rangeText}</span>` +
    `<select class="kind"><option value="label" ${draft.kind === "label" ? "selected" : ""}>label</option>` +
    `<option value="note" ${draft.kind === "note" ? "selected" : ""}>note</option></select>` +
    `<div class="types">${typeOptions}</div>` +
    `<input class="tags" placeholder="tags, comma separated" value="${draft.tags.join(", ")}"/>` +
    `<textarea class="text" placeholder="notes">${draft.text}</textarea>` +
    `<div class="form-errors">${errors.map((e) => `<span>${e}</span>`).join(" ")}</div>` +
    `<button class="submit">save annotation</button>` +
    `</div><ul class="annotation-list">${list}</ul>`;

  container.querySelector<HTMLInputElement>(".author")?.addEventListener("change", (e) => {
    onDraftChange({ author: (e.target as HTMLInputElement).value });
  });
  container.querySelector<HTMLSelectElement>(".kind")?.addEventListener("change", (e) => {
    onDraftChange({ kind: (e.target as HTMLSelectElement).value as "label" | "note" });
  });
  container.querySelectorAll<HTMLInputElement>("input.gt").forEach((el) => {
    el.addEventListener("change", () => {
      const checked = Array.from(container.querySelectorAll<HTMLInputElement>("input.gt:checked"));
      onDraftChange({ grieferTypes: checked.map((c) => c.value) as DraftAnnotation["grieferTypes"] });
    });
  });
  container.querySelector<HTMLInputElement>(".tags")?.addEventListener("change", (e) => {
    const raw = (e.target as HTMLInputElement).value;
    onDraftChange({ tags: raw.split(",").map((s) => s.trim()).filter(Boolean) });
  });
  container.querySelector<HTMLTextAreaElement>(".text")?.addEventListener("change", (e) => {
    onDraftChange({ text: (e.target as HTMLTextAreaElement).value });
  });
  container.querySelector<HTMLButtonElement>(".submit")?.addEventListener("click", onSubmit);
  container.querySelectorAll<HTMLButtonElement>("button.del").forEach((el) => {
    el.addEventListener("click", () => onDelete(el.dataset.id as string));
  });
}
