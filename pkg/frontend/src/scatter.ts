/** SVG markup for the interactive cluster map.
 *
 * Pure string generation: the shell mounts it and wires click
 * delegation via the data-idea-id attributes. Titles become hover
 * tooltips unless the session runs blind (replicating the study
 * condition where textual descriptions were withheld).
 */

import { clusterColor } from "./colors";
import { AnalysisReport, NOISE_LABEL } from "./types";

export interface ScatterOptions {
  size?: number;
  margin?: number;
  blind?: boolean;
  selected?: ReadonlySet<string>;
}

function escapeXml(text: string): string {
  return text
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

export function renderScatterSvg(report: AnalysisReport, options: ScatterOptions = {}): string {
  const size = options.size ?? 640;
  const margin = options.margin ?? 40;
  const selected = options.selected ?? new Set<string>();
  const xs = report.projection.map((p) => p[0]);
  const ys = report.projection.map((p) => p[1]);
  const loX = Math.min(...xs);
  const hiX = Math.max(...xs);
  const loY = Math.min(...ys);
  const hiY = Math.max(...ys);
  const spanX = hiX > loX ? hiX - loX : 1;
  const spanY = hiY > loY ? hiY - loY : 1;
  const inner = size - 2 * margin;
  const sx = (x: number) => margin + ((x - loX) / spanX) * inner;
  const sy = (y: number) => size - margin - ((y - loY) / spanY) * inner;

  const parts: string[] = [];
  for (const hull of report.hulls) {
    if (hull.cluster_id === NOISE_LABEL || hull.degenerate) continue;
    const path = hull.vertices
      .map(([x, y], i) => `${i === 0 ? "M" : "L"} ${sx(x).toFixed(2)} ${sy(y).toFixed(2)}`)
      .join(" ");
    parts.push(
      `<path class="hull" d="${path} Z" fill="none" stroke="${clusterColor(hull.cluster_id)}" ` +
        `stroke-dasharray="5 4" stroke-width="1.5"/>`,
    );
  }
  report.projection.forEach(([x, y], row) => {
    const idea = report.ideas[row];
    const label = report.labels[row];
    const isSelected = selected.has(idea.id);
    const classes = [
      "point",
      label === NOISE_LABEL ? "noise" : `cluster-${label}`,
      isSelected ? "selected" : "",
    ]
      .filter(Boolean)
      .join(" ");
    const tooltip = options.blind ? "" : `<title>${escapeXml(idea.title)}</title>`;
    parts.push(
      `<circle class="${classes}" data-idea-id="${escapeXml(idea.id)}" ` +
        `cx="${sx(x).toFixed(2)}" cy="${sy(y).toFixed(2)}" r="${isSelected ? 7 : 4.5}" ` +
        `fill="${clusterColor(label)}" stroke="${isSelected ? "#111111" : "none"}" ` +
        `stroke-width="${isSelected ? 2.5 : 0}">${tooltip}</circle>`,
    );
  });
  return (
    `<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 ${size} ${size}" ` +
    `width="${size}" height="${size}" role="img">${parts.join("")}</svg>`
  );
}
