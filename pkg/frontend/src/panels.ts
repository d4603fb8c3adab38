/** Panel renderers: one API response in, one HTML string out.
 *
 * Every figure on screen is traceable to a single response field;
 * loading, error and empty states are explicit markup. */

import { ApiError } from "./api.js";
import {
  barChart,
  dualLineChart,
  htmlTable,
  lineChart,
  scatterWithBand,
} from "./charts.js";
import type {
  CompareResponse,
  DropoutResponse,
  ForumResponse,
  FunnelResponse,
  QuizSummaryResponse,
  Ratio,
  ReadsSeriesResponse,
  TimelineResponse,
} from "./types.js";
import { DROPOUT_KEYS } from "./types.js";

export type Panel = "funnel" | "dropout" | "videos" | "forum" | "quizzes" | "compare";
export type { CompareKey } from "./types.js";

export const PANELS: Panel[] = ["funnel", "dropout", "videos", "forum", "quizzes", "compare"];

const DROPOUT_LABELS: Record<string, string> = {
  cert_vs_reg: "certified vs registrants",
  cert_vs_active: "certified vs active",
  compl_vs_reg: "completers vs registrants",
  compl_vs_active: "completers vs active",
  active_vs_reg: "active vs registrants",
};

function pct(ratio: Ratio | null): string {
  return ratio ? `${ratio.percent}%` : "n/a";
}

export function renderLoading(panel: string): string {
  return `<div class="state state-loading">Loading ${panel}…</div>`;
}

export function renderError(error: unknown): string {
  if (error instanceof ApiError && error.status === 401) {
    return `<div class="state state-auth">Session token rejected. Enter a valid API token to continue.</div>`;
  }
  if (error instanceof ApiError && error.status === 404) {
    return `<div class="state state-missing">This course is not in the store.</div>`;
  }
  const message = error instanceof Error ? error.message : String(error);
  return `<div class="state state-error">Request failed: ${message}</div>`;
}

export function renderEmpty(message: string): string {
  return `<div class="state state-empty">${message}</div>`;
}

export function renderFunnelPanel(course: string, data: FunnelResponse): string {
  if (data.registrants === 0) {
    return renderEmpty(`No participants recorded for ${course} yet.`);
  }
  const labels = ["registrants", "active", "completers", "certified"];
  const values = [data.registrants, data.active, data.completers, data.certified];
  const ratio = data.certified_ratio
    ? `<p class="fact">Certified ratio: <strong>${pct(data.certified_ratio)}</strong>` +
      ` · completers without certificate: <strong>${data.completers_only}</strong></p>`
    : "";
  return `<section class="panel panel-funnel"><h2>${course}: participants</h2>` +
    barChart(labels, values) + ratio + "</section>";
}

export function renderDropoutPanel(course: string, data: DropoutResponse): string {
  const rows = DROPOUT_KEYS.map((key) => [DROPOUT_LABELS[key] ?? key, pct(data[key])]);
  return `<section class="panel panel-dropout"><h2>${course}: dropout rates</h2>` +
    htmlTable(["definition", "rate"], rows) + "</section>";
}

export function renderTimelinePanel(data: TimelineResponse): string {
  const total = data.pause_skip.reduce((a, b) => a + b, 0) + data.replay.reduce((a, b) => a + b, 0);
  if (total === 0) {
    return renderEmpty(`No pause, skip or replay activity recorded for ${data.video}.`);
  }
  return `<section class="panel panel-videos"><h2>video ${data.video}</h2>` +
    dualLineChart(data.pause_skip, data.replay) +
    `<p class="legend"><span class="key-pause-skip">pause/skip</span>` +
    ` <span class="key-replay">replay</span> over ${data.duration}s</p></section>`;
}

export function renderForumPanel(
  course: string,
  forum: ForumResponse,
  reads: ReadsSeriesResponse,
): string {
  const days = Object.keys(reads.reads).sort();
  const series = days.map((d) => reads.reads[d] ?? 0);
  const facts =
    `<p class="fact">Posts: <strong>${forum.total_posts}</strong>` +
    ` (instructor ${forum.instructor_posts}, share ${pct(forum.instructor_share)})` +
    ` · reads: <strong>${forum.total_reads}</strong>` +
    ` · first two weeks ${pct(forum.phase_shares.first_two_weeks)}` +
    ` · last two weeks ${pct(forum.phase_shares.last_two_weeks)}</p>`;
  const chart = days.length
    ? lineChart(days, series)
    : renderEmpty("No forum reads recorded.");
  return `<section class="panel panel-forum"><h2>${course}: forum activity</h2>` +
    chart + facts + "</section>";
}

export function renderQuizzesPanel(course: string, data: QuizSummaryResponse): string {
  const weeks = Object.keys(data.weeks).sort((a, b) => Number(a) - Number(b));
  if (weeks.length === 0) {
    return renderEmpty(`No quiz weeks with documents configured for ${course}.`);
  }
  const rows: string[][] = [];
  for (const week of weeks) {
    const groups = data.weeks[week];
    if (!groups) continue;
    for (const name of ["all", "some", "none"] as const) {
      const g = groups[name];
      rows.push([
        week,
        `downloaded ${name}`,
        String(g.n),
        g.mean === null ? "n/a" : g.mean.toFixed(2),
        g.median === null ? "n/a" : g.median.toFixed(1),
      ]);
    }
  }
  return `<section class="panel panel-quizzes"><h2>${course}: first-attempt grades by download group</h2>` +
    htmlTable(["week", "group", "n", "mean", "median"], rows) + "</section>";
}

export function renderComparePanel(course: string, data: CompareResponse): string {
  if (data.pairs.length === 0) {
    return renderEmpty("No learners carry both indicators.");
  }
  const fit = data.fit;
  const stats =
    `<p class="fact">n=${fit.n}` +
    ` · slope ${fit.slope === null ? "n/a" : fit.slope.toFixed(4)}` +
    ` · r ${fit.pearson_r === null ? "n/a" : fit.pearson_r.toFixed(4)}</p>`;
  return `<section class="panel panel-compare">` +
    `<h2>${course}: ${data.x_key} vs ${data.y_key}</h2>` +
    scatterWithBand(
      data.pairs.map((p) => ({ x: p.x, y: p.y })),
      fit.band,
    ) + stats + "</section>";
}
