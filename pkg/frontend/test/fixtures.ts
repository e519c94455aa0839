/** Shared test fixtures: a five-cluster report and an in-memory fake of
 * the report server that mirrors its documented selection semantics
 * (last write wins per participant, SI over distinct participants,
 * SS = fully-covered clusters / non-noise clusters). */

import type { AnalysisReport, SelectionMetrics } from "../src/types";

export function fiveClusterReport(): AnalysisReport {
  const ideas = [];
  const projection: [number, number][] = [];
  const labels: number[] = [];
  const centers: [number, number][] = [
    [0, 0],
    [10, 0],
    [0, 10],
    [10, 10],
    [5, 5],
  ];
  let row = 0;
  centers.forEach(([cx, cy], cluster) => {
    for (let i = 0; i < 4; i++) {
      ideas.push({ id: `i${row}`, title: `Idea ${row}` });
      projection.push([cx + (i % 2) * 0.5, cy + Math.floor(i / 2) * 0.5]);
      labels.push(cluster);
      row += 1;
    }
  });
  ideas.push({ id: "noise-0", title: "Stray idea" });
  projection.push([20, 20]);
  labels.push(-1);
  return {
    set_id: "fixture",
    created_at: "2026-01-01T00:00:00+00:00",
    tool_version: "test",
    params: { dbscan: { eps: 1.5, min_pts: 3 } },
    ideas,
    projection,
    labels,
    hulls: centers.map(([cx, cy], cluster) => ({
      cluster_id: cluster,
      n_ideas: 4,
      degenerate: false,
      area: 0.25,
      vertices: [
        [cx, cy],
        [cx + 0.5, cy],
        [cx + 0.5, cy + 0.5],
        [cx, cy + 0.5],
      ] as [number, number][],
    })),
    metrics: {
      total_area: 100,
      per_cluster_sparsity: { "0": 0.2, "1": 0.2, "2": 0.2, "3": 0.2, "4": 0.2 },
      cluster_sparsity: 0.9,
      distribution_score: 1.0,
      ds_flag: null,
      cs_flag: null,
      spider_area: 0.1,
      regular_polygon_area: 0.1,
      eigenvalues: [5, 4, 3, 2, 1],
      eigen_gaps: [1, 1, 1, 1],
      flatness: 1.0,
    },
  };
}

export class FakeServer {
  private selections = new Map<string, Map<string, string[]>>();

  constructor(private reports: Map<string, AnalysisReport>) {}

  metricsFor(setId: string): SelectionMetrics {
    const report = this.reports.get(setId)!;
    const bySetter = this.selections.get(setId) ?? new Map<string, string[]>();
    const clusterOf = new Map(report.ideas.map((idea, row) => [idea.id, report.labels[row]]));
    const nonNoise = [...new Set(report.labels.filter((l) => l !== -1))];
    const si = new Map<number, Set<string>>();
    for (const label of new Set(report.labels)) si.set(label, new Set());
    for (const [participant, ids] of bySetter) {
      for (const id of ids) si.get(clusterOf.get(id)!)!.add(participant);
    }
    const x = bySetter.size;
    const full = nonNoise.filter((c) => si.get(c)!.size === x && x >= 1).length;
    const ss = nonNoise.length > 0 && x >= 1 ? full / nonNoise.length : 0;
    return {
      si: Object.fromEntries([...si.entries()].map(([k, v]) => [String(k), v.size])),
      ss,
      x,
    };
  }

  /** A fetch-compatible handler covering the documented routes. */
  fetch = async (input: RequestInfo | URL, init?: RequestInit): Promise<Response> => {
    const url = new URL(String(input), "http://fake");
    const respond = (status: number, payload: unknown) =>
      new Response(JSON.stringify(payload), {
        status,
        headers: { "Content-Type": "application/json" },
      });

    const match = url.pathname.match(/^\/api\/sets(?:\/([^/]+)(?:\/([^/]+))?)?$/);
    if (!match) return respond(404, { error: "no such resource" });
    const [, setId, leaf] = match;
    if (!setId) return respond(200, [...this.reports.keys()].sort());
    const report = this.reports.get(decodeURIComponent(setId));
    if (!report) return respond(404, { error: `unknown set '${setId}'` });
    if (leaf === "report") return respond(200, report);
    if (leaf === "selection-metrics") return respond(200, this.metricsFor(report.set_id));
    if (leaf === "selections" && init?.method === "POST") {
      let body: { participant_id?: string; selected_idea_ids?: string[] };
      try {
        body = JSON.parse(String(init.body));
      } catch {
        return respond(400, { error: "malformed JSON body" });
      }
      if (!body.participant_id || !Array.isArray(body.selected_idea_ids) || body.selected_idea_ids.length === 0) {
        return respond(400, { error: "participant_id and selected_idea_ids are required" });
      }
      const known = new Set(report.ideas.map((idea) => idea.id));
      const unknown = body.selected_idea_ids.filter((id) => !known.has(id));
      if (unknown.length > 0) {
        return respond(400, { error: `unknown idea id(s): ${unknown.join(", ")}` });
      }
      let bySetter = this.selections.get(report.set_id);
      if (!bySetter) {
        bySetter = new Map();
        this.selections.set(report.set_id, bySetter);
      }
      bySetter.set(body.participant_id, body.selected_idea_ids);
      return respond(200, this.metricsFor(report.set_id));
    }
    return respond(404, { error: "no such resource" });
  };
}
