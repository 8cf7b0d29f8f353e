// Thin typed client over the service HTTP API.

import type {
  AnnotationRecord,
  ExportDoc,
  HeatmapPayload,
  SummaryDoc,
  TimelinePayload,
  TrajectoryPayload,
} from "./types.js";

export class ApiError extends Error {
  constructor(
    public status: number,
    public code: string,
    message: string,
  ) {
    super(message);
  }
}

async function parseResponse<T>(response: Response): Promise<T> {
  const body = await response.json().catch(() => null);
  if (!response.ok) {
    const err = (body as { error?: { code?: string; message?: string } } | null)?.error;
    throw new ApiError(response.status, err?.code ?? "error", err?.message ?? response.statusText);
  }
  return body as T;
}

export class ApiClient {
  constructor(private base: string = "") {}

  private url(path: string, params?: Record<string, string | number>): string {
    const query = params
      ? "?" +
        Object.entries(params)
          .map(([k, v]) => `${encodeURIComponent(k)}=${encodeURIComponent(String(v))}`)
          .join("&")
      : "";
    return `${this.base}${path}${query}`;
  }

  async health(): Promise<{ status: string; config_hash: string }> {
    return parseResponse(await fetch(this.url("/health")));
  }

  async listMatches(): Promise<string[]> {
    const doc = await parseResponse<{ match_ids: string[] }>(
      await fetch(this.url("/matches")),
    );
    return doc.match_ids;
  }

  async ingest(telemetry: string): Promise<string> {
    const doc = await parseResponse<{ match_id: string }>(
      await fetch(this.url("/matches"), {
        method: "POST",
        headers: { "content-type": "application/json" },
        body: telemetry,
      }),
    );
    return doc.match_id;
  }

  async summary(matchId: string): Promise<SummaryDoc> {
    return parseResponse(await fetch(this.url(`/matches/${matchId}/summary`)));
  }

  async timeline(matchId: string, player: string): Promise<TimelinePayload> {
    return parseResponse(
      await fetch(this.url(`/matches/${matchId}/timeline`, { player })),
    );
  }

  async heatmap(
    matchId: string,
    player: string,
    from: number,
    to: number,
    grid = 64,
  ): Promise<HeatmapPayload> {
    return parseResponse(
      await fetch(this.url(`/matches/${matchId}/heatmap`, { player, from, to, grid })),
    );
  }

  async trajectory(
    matchId: string,
    player: string,
    from: number,
    to: number,
  ): Promise<TrajectoryPayload> {
    return parseResponse(
      await fetch(this.url(`/matches/${matchId}/trajectory`, { player, from, to })),
    );
  }

  async annotations(matchId: string): Promise<AnnotationRecord[]> {
    const doc = await parseResponse<{ annotations: AnnotationRecord[] }>(
      await fetch(this.url(`/matches/${matchId}/annotations`)),
    );
    return doc.annotations;
  }

  async addAnnotation(
    matchId: string,
    body: Record<string, unknown>,
  ): Promise<AnnotationRecord> {
    return parseResponse(
      await fetch(this.url(`/matches/${matchId}/annotations`), {
        method: "POST",
        headers: { "content-type": "application/json" },
        body: JSON.stringify(body),
      }),
    );
  }

  async deleteAnnotation(matchId: string, annotationId: string): Promise<void> {
    await parseResponse(
      await fetch(this.url(`/matches/${matchId}/annotations/${annotationId}`), {
        method: "DELETE",
      }),
    );
  }

  async exportLabels(matchId: string): Promise<ExportDoc> {
    return parseResponse(await fetch(this.url(`/matches/${matchId}/labels/export`)));
  }
}
