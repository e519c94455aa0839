/** Stable cluster coloring, matching the report SVG palette. */

import { NOISE_LABEL } from "./types";

const PALETTE = [
  "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd",
  "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf",
];

export const NOISE_COLOR = "#999999";

export function clusterColor(clusterId: number): string {
  if (clusterId === NOISE_LABEL) return NOISE_COLOR;
  return PALETTE[((clusterId % PALETTE.length) + PALETTE.length) % PALETTE.length];
}
