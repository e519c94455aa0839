/** Application shell: wires the API, session state, and scatter view.
 *
 * URL parameters:
 *   api=...          server base URL (default: same origin)
 *   set=...          preselect an idea set
 *   participant=...  participant id (default: randomly generated)
 *   quota=N          picks per session (default 10)
 *   blind=1          hide idea titles, replicating the study condition
 */

import { ApiClient, ApiError } from "./api";
import { renderScatterSvg } from "./scatter";
import {
  SessionState,
  canSubmit,
  createSession,
  liveMetrics,
  toggleSelection,
} from "./session";
import type { AnalysisReport, SelectionMetrics } from "./types";

const params = new URLSearchParams(window.location.search);
const api = new ApiClient(params.get("api") ?? "");
const blind = params.get("blind") === "1";
const quota = Number(params.get("quota") ?? "10");
const participantId =
  params.get("participant") ?? `anon-${Math.random().toString(36).slice(2, 8)}`;

const app = document.querySelector<HTMLDivElement>("#app")!;

let report: AnalysisReport | null = null;
let session: SessionState | null = null;
let serverMetrics: SelectionMetrics | null = null;
let notice = "";
let submitting = false;

function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  attrs: Record<string, string> = {},
  text = "",
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  for (const [key, value] of Object.entries(attrs)) node.setAttribute(key, value);
  if (text) node.textContent = text;
  return node;
}

function renderError(message: string, retry: () => void): void {
  app.replaceChildren();
  const box = el("div", { class: "error-state" });
  box.appendChild(el("p", {}, `Something went wrong: ${message}`));
  const button = el("button", {}, "Retry");
  button.onclick = retry;
  box.appendChild(button);
  app.appendChild(box);
}

async function loadSets(): Promise<void> {
  try {
    const sets = await api.fetchSets();
    if (sets.length === 0) {
      renderError("the server has no analyzed sets", loadSets);
      return;
    }
    const wanted = params.get("set");
    await loadMap(wanted && sets.includes(wanted) ? wanted : sets[0], sets);
  } catch (err) {
    renderError(err instanceof Error ? err.message : String(err), loadSets);
  }
}

async function loadMap(setId: string, sets: string[]): Promise<void> {
  try {
    report = await api.fetchReport(setId);
    serverMetrics = await api.fetchSelectionMetrics(setId);
    session = createSession(setId, participantId, quota);
    notice = "";
    render(sets);
  } catch (err) {
    renderError(err instanceof Error ? err.message : String(err), () =>
      loadMap(setId, sets),
    );
  }
}

function render(sets: string[]): void {
  if (!report || !session) return;
  const current = report;
  const live = liveMetrics(session, current);

  app.replaceChildren();
  const header = el("header");
  const picker = el("select", { id: "set-picker" });
  for (const id of sets) {
    const option = el("option", { value: id }, id);
    if (id === current.set_id) option.setAttribute("selected", "selected");
    picker.appendChild(option);
  }
  picker.onchange = () => void loadMap(picker.value, sets);
  header.appendChild(picker);
  header.appendChild(
    el("span", { class: "participant" }, `participant: ${participantId}${blind ? " (blind)" : ""}`),
  );
  app.appendChild(header);

  const map = el("div", { id: "map" });
  map.innerHTML = renderScatterSvg(current, { blind, selected: new Set(session.selected) });
  map.addEventListener("click", (event) => {
    const target = (event.target as Element).closest("[data-idea-id]");
    if (!target || !session) return;
    const result = toggleSelection(session, target.getAttribute("data-idea-id")!, current);
    session = result.state;
    notice = result.blocked ?? "";
    render(sets);
  });
  app.appendChild(map);

  const panel = el("aside", { id: "panel" });
  panel.appendChild(
    el("p", { class: "progress" }, `${session.selected.length} / ${session.quota} selected`),
  );
  panel.appendChild(
    el(
      "p",
      { class: "live-metrics" },
      `clusters covered: ${live.clustersCovered} - coverage: ${(live.coverageFraction * 100).toFixed(0)}%`,
    ),
  );
  if (serverMetrics) {
    panel.appendChild(
      el(
        "p",
        { class: "server-metrics" },
        `plot so far: ${serverMetrics.x} participant(s), sampling score ${serverMetrics.ss.toFixed(2)}`,
      ),
    );
  }
  if (notice) panel.appendChild(el("p", { class: "notice" }, notice));

  const submit = el("button", { id: "submit" }, submitting ? "Submitting..." : "Submit selection");
  if (!canSubmit(session) || submitting) submit.setAttribute("disabled", "disabled");
  submit.onclick = () => void doSubmit(sets);
  panel.appendChild(submit);
  app.appendChild(panel);
}

async function doSubmit(sets: string[]): Promise<void> {
  if (!report || !session || !canSubmit(session)) return;
  submitting = true;
  render(sets);
  try {
    serverMetrics = await api.submitSelections(
      session.setId,
      session.participantId,
      session.selected,
    );
    notice = `submitted: server sampling score is now ${serverMetrics.ss.toFixed(2)}`;
  } catch (err) {
    // Keep the local draft so the participant can retry.
    const detail = err instanceof ApiError && err.status ? ` (HTTP ${err.status})` : "";
    notice = `submit failed${detail}: ${err instanceof Error ? err.message : err}; your picks are kept, try again`;
  } finally {
    submitting = false;
    render(sets);
  }
}

void loadSets();
