/** Typed client for the report server's HTTP API. */

import type { AnalysisReport, SelectionMetrics } from "./types";

export class ApiError extends Error {
  constructor(message: string, readonly status: number | null = null) {
    super(message);
    this.name = "ApiError";
  }
}

async function asJson<T>(response: Response): Promise<T> {
  if (!response.ok) {
    let detail = response.statusText;
    try {
      const body = (await response.json()) as { error?: string };
      if (body.error) detail = body.error;
    } catch {
      // non-JSON error body; keep the status text
    }
    throw new ApiError(detail, response.status);
  }
  return (await response.json()) as T;
}

export class ApiClient {
  constructor(readonly baseUrl: string = "") {}

  private url(path: string): string {
    return `${this.baseUrl.replace(/\/$/, "")}${path}`;
  }

  async fetchSets(): Promise<string[]> {
    return asJson(await fetch(this.url("/api/sets")));
  }

  async fetchReport(setId: string): Promise<AnalysisReport> {
    return asJson(await fetch(this.url(`/api/sets/${encodeURIComponent(setId)}/report`)));
  }

  async fetchSelectionMetrics(setId: string): Promise<SelectionMetrics> {
    return asJson(
      await fetch(this.url(`/api/sets/${encodeURIComponent(setId)}/selection-metrics`)),
    );
  }

  /** Submit picks; the server answers with the updated plot metrics. */
  async submitSelections(
    setId: string,
    participantId: string,
    ideaIds: string[],
  ): Promise<SelectionMetrics> {
    return asJson(
      await fetch(this.url(`/api/sets/${encodeURIComponent(setId)}/selections`), {
        method: "POST",
        headers: { "Content-Type": "application/json" },
        body: JSON.stringify({ participant_id: participantId, selected_idea_ids: ideaIds }),
      }),
    );
  }
}
