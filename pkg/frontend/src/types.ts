// Shapes of the read-only service exports. The explorer never recomputes
// classifier math: every displayed number traces back to one of these fields.

export const MODES = [
  "singular_peace",
  "singular_force",
  "collective_peace",
  "collective_force",
  "collective",
  "singular",
  "force",
  "peace",
  "all",
] as const;

export type Mode = (typeof MODES)[number];

export interface WindowInfo {
  start: string;
  end: string;
  tweet_count: number;
  cluster_count: number;
}

export interface ClusterInfo {
  id: number;
  centroid: { lat: number; lon: number };
  radius_m: number;
  count: number;
  positive_fraction: Record<string, number>;
  member_ids: string[];
}

export interface ClusterWindow {
  start: string;
  end: string;
  tweet_count: number;
  noise_count: number;
  clusters: ClusterInfo[];
}

export interface SeriesBin {
  start: string;
  tweet_count: number;
  presence: Record<string, number>;
}

export interface SeriesExport {
  schema: string;
  bins: SeriesBin[];
}

export interface ShiftEntry {
  phrase: string;
  contribution: number;
  frequency: number;
}

export interface ShiftExport {
  mode: string;
  scope: string;
  doc_count: number;
  entries: ShiftEntry[];
  total: number;
  truncated: boolean;
  window?: { start: string; end: string };
}

export interface CountyStat {
  county_id: string;
  tweet_count: number;
  political_pct: number | null;
  positives: Record<string, number>;
}

export interface CountiesExport {
  schema: string;
  counties: CountyStat[];
  unassigned: CountyStat;
}
