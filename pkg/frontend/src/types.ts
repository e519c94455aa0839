/** Payload shapes served by the analysis report API. */

export interface IdeaSummary {
  id: string;
  title: string;
}

export interface HullInfo {
  cluster_id: number;
  n_ideas: number;
  degenerate: boolean;
  area: number;
  vertices: [number, number][];
}

export interface ReportMetrics {
  total_area: number;
  per_cluster_sparsity: Record<string, number>;
  cluster_sparsity: number | null;
  distribution_score: number | null;
  ds_flag: string | null;
  cs_flag: string | null;
  spider_area: number | null;
  regular_polygon_area: number | null;
  eigenvalues: number[];
  eigen_gaps: number[];
  flatness: number;
}

export interface AnalysisReport {
  set_id: string;
  created_at: string;
  tool_version: string;
  params: Record<string, unknown>;
  ideas: IdeaSummary[];
  projection: [number, number][];
  labels: number[];
  hulls: HullInfo[];
  metrics: ReportMetrics;
}

export interface SelectionMetrics {
  si: Record<string, number>;
  ss: number;
  x: number;
}

export const NOISE_LABEL = -1;
