/** Selection session state machine.
 *
 * Pure functions over immutable state so every rule (quota, coverage,
 * submit gating) is unit-testable without a DOM. The server remains the
 * metric authority; these live metrics only steer the participant's
 * next picks.
 */

import { AnalysisReport, NOISE_LABEL } from "./types";

export interface SessionState {
  setId: string;
  participantId: string;
  quota: number;
  /** Selection order is preserved; ids are unique. */
  selected: string[];
}

export interface LiveMetrics {
  clustersCovered: number;
  coverageFraction: number;
  /** Sampling score the plot would reach if every participant covered
   * the same clusters as this selection. */
  projectedSsContribution: number;
}

export interface ToggleResult {
  state: SessionState;
  /** Set when the toggle was refused, with the reason to show. */
  blocked?: string;
}

export function createSession(
  setId: string,
  participantId: string,
  quota = 10,
): SessionState {
  if (quota < 1) throw new Error("quota must be at least 1");
  return { setId, participantId, quota, selected: [] };
}

export function clusterOf(report: AnalysisReport): Map<string, number> {
  const map = new Map<string, number>();
  report.ideas.forEach((idea, row) => map.set(idea.id, report.labels[row]));
  return map;
}

export function nonNoiseClusterCount(report: AnalysisReport): number {
  return new Set(report.labels.filter((l) => l !== NOISE_LABEL)).size;
}

export function toggleSelection(
  state: SessionState,
  ideaId: string,
  report: AnalysisReport,
): ToggleResult {
  if (!clusterOf(report).has(ideaId)) {
    return { state, blocked: `unknown idea ${ideaId}` };
  }
  if (state.selected.includes(ideaId)) {
    return { state: { ...state, selected: state.selected.filter((i) => i !== ideaId) } };
  }
  if (state.selected.length >= state.quota) {
    return {
      state,
      blocked: `selection is full (${state.quota} ideas); deselect one to swap`,
    };
  }
  return { state: { ...state, selected: [...state.selected, ideaId] } };
}

export function liveMetrics(state: SessionState, report: AnalysisReport): LiveMetrics {
  const labels = clusterOf(report);
  const covered = new Set<number>();
  for (const id of state.selected) {
    const cluster = labels.get(id);
    if (cluster !== undefined && cluster !== NOISE_LABEL) covered.add(cluster);
  }
  const total = nonNoiseClusterCount(report);
  const fraction = total > 0 ? covered.size / total : 0;
  return {
    clustersCovered: covered.size,
    coverageFraction: fraction,
    projectedSsContribution: fraction,
  };
}

export function canSubmit(state: SessionState): boolean {
  return state.selected.length === state.quota;
}
