/** Response shapes of the analytics API (prefix /api/v1). */

export interface Ratio {
  numerator: number;
  denominator: number;
  percent: string;
}

export interface FunnelResponse {
  registrants: number;
  active: number;
  completers: number;
  certified: number;
  completers_only: number;
  certified_ratio: Ratio | null;
}

export const DROPOUT_KEYS = [
  "cert_vs_reg",
  "cert_vs_active",
  "compl_vs_reg",
  "compl_vs_active",
  "active_vs_reg",
] as const;

export type DropoutKey = (typeof DROPOUT_KEYS)[number];

export type DropoutResponse = Record<DropoutKey, Ratio | null>;

export interface PhaseShares {
  first_two_weeks: Ratio | null;
  last_two_weeks: Ratio | null;
}

export interface ForumResponse {
  total_posts: number;
  instructor_posts: number;
  instructor_share: Ratio | null;
  total_reads: number;
  phase_shares: PhaseShares;
  posts_by_day: Record<string, number>;
  posts_per_student: Record<string, number>;
}

export interface ReadsSeriesResponse {
  granularity: "day" | "week";
  reads: Record<string, number>;
}

export interface TimelineResponse {
  video: string;
  duration: number;
  pause_skip: number[];
  replay: number[];
}

export interface GroupStats {
  n: number;
  mean: number | null;
  median: number | null;
}

export type DownloadGroups = Record<"all" | "some" | "none", GroupStats>;

export interface QuizSummaryResponse {
  weeks: Record<string, DownloadGroups>;
}

export interface BandPoint {
  x: number;
  y: number;
  se: number | null;
}

export interface Fit {
  n: number;
  slope: number | null;
  intercept: number | null;
  pearson_r: number | null;
  residual_std: number;
  x_mean: number;
  sxx: number;
  band: BandPoint[] | null;
}

export interface Pair {
  learner: string;
  x: number;
  y: number;
}

export interface PageMeta {
  total: number;
  offset: number;
  returned: number;
}

export interface CompareResponse {
  x_key: string;
  y_key: string;
  pairs: Pair[];
  page: PageMeta;
  fit: Fit;
}

export interface CorrelationResponse {
  pairs: Pair[];
  page: PageMeta;
  fit: Fit;
  median_reads_high_performers: number | null;
}

export interface CoursesResponse {
  courses: string[];
}

export interface IngestResponse {
  parsed: number;
  quarantined: number;
  duplicates_dropped: number;
  committed: number;
}

/** Indicator keys accepted by the compare endpoint, shared with the CLI. */
export const COMPARE_KEYS = [
  "posts",
  "reads",
  "downloads",
  "quiz_mean",
  "quiz_attempt_count",
  "videos_played",
  "reads_sqrt",
] as const;

export type CompareKey = (typeof COMPARE_KEYS)[number];

export type ExportFormat = "csv" | "json";
