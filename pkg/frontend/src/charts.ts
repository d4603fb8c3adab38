/** SVG string builders. Pure functions: data in, markup out. All
 * values are taken verbatim from API responses; no statistics happen
 * here. */

const WIDTH = 640;
const HEIGHT = 320;
const PAD = 40;

function esc(text: string): string {
  return text
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

function svgOpen(cls: string): string {
  return `<svg class="${cls}" viewBox="0 0 ${WIDTH} ${HEIGHT}" role="img" xmlns="http://www.w3.org/2000/svg">`;
}

export function barChart(labels: string[], values: number[], cls = "chart-bar"): string {
  const max = Math.max(...values, 1);
  const span = WIDTH - 2 * PAD;
  const slot = span / Math.max(labels.length, 1);
  const parts: string[] = [svgOpen(cls)];
  values.forEach((value, i) => {
    const height = ((HEIGHT - 2 * PAD) * value) / max;
    const x = PAD + i * slot + slot * 0.15;
    const y = HEIGHT - PAD - height;
    parts.push(
      `<rect x="${x.toFixed(1)}" y="${y.toFixed(1)}" width="${(slot * 0.7).toFixed(1)}" height="${height.toFixed(1)}" class="bar"></rect>`,
      `<text x="${(PAD + i * slot + slot / 2).toFixed(1)}" y="${(y - 6).toFixed(1)}" text-anchor="middle" class="bar-value">${value}</text>`,
      `<text x="${(PAD + i * slot + slot / 2).toFixed(1)}" y="${HEIGHT - PAD + 16}" text-anchor="middle" class="bar-label">${esc(labels[i] ?? "")}</text>`,
    );
  });
  parts.push("</svg>");
  return parts.join("");
}

function polyline(points: Array<[number, number]>, xMax: number, yMax: number, cls: string): string {
  const coords = points
    .map(([x, y]) => {
      const px = PAD + ((WIDTH - 2 * PAD) * x) / Math.max(xMax, 1);
      const py = HEIGHT - PAD - ((HEIGHT - 2 * PAD) * y) / Math.max(yMax, 1);
      return `${px.toFixed(1)},${py.toFixed(1)}`;
    })
    .join(" ");
  return `<polyline points="${coords}" fill="none" class="${cls}"></polyline>`;
}

/** Forum reads over days: one line, x is the series index. */
export function lineChart(labels: string[], values: number[], cls = "chart-line"): string {
  const yMax = Math.max(...values, 1);
  const points: Array<[number, number]> = values.map((v, i) => [i, v]);
  return [
    svgOpen(cls),
    polyline(points, Math.max(values.length - 1, 1), yMax, "series-main"),
    `<text x="${PAD}" y="${PAD - 12}" class="axis-note">max ${yMax}</text>`,
    "</svg>",
  ].join("");
}

/** Per-second video activity: pause/skip and replay series. */
export function dualLineChart(a: number[], b: number[], cls = "chart-dual"): string {
  const yMax = Math.max(...a, ...b, 1);
  const xMax = Math.max(a.length - 1, 1);
  return [
    svgOpen(cls),
    polyline(a.map((v, i) => [i, v]), xMax, yMax, "series-pause-skip"),
    polyline(b.map((v, i) => [i, v]), xMax, yMax, "series-replay"),
    "</svg>",
  ].join("");
}

export interface ScatterPoint {
  x: number;
  y: number;
}

export interface BandSample {
  x: number;
  y: number;
  se: number | null;
}

/** Scatter with the API-supplied regression line and SE band. The band
 * polygon uses the se values as delivered; nothing is recomputed. */
export function scatterWithBand(
  points: ScatterPoint[],
  band: BandSample[] | null,
  cls = "chart-scatter",
): string {
  const xs = points.map((p) => p.x).concat(band?.map((s) => s.x) ?? []);
  const ys = points.map((p) => p.y).concat(band?.map((s) => s.y + (s.se ?? 0)) ?? []);
  const xMin = Math.min(...xs, 0);
  const xMax = Math.max(...xs, 1);
  const yMin = Math.min(...ys, 0);
  const yMax = Math.max(...ys, 1);

  const toX = (x: number) => PAD + ((WIDTH - 2 * PAD) * (x - xMin)) / Math.max(xMax - xMin, 1e-9);
  const toY = (y: number) => HEIGHT - PAD - ((HEIGHT - 2 * PAD) * (y - yMin)) / Math.max(yMax - yMin, 1e-9);

  const parts: string[] = [svgOpen(cls)];
  if (band && band.length > 1) {
    const upper = band.map((s) => `${toX(s.x).toFixed(1)},${toY(s.y + (s.se ?? 0)).toFixed(1)}`);
    const lower = band
      .slice()
      .reverse()
      .map((s) => `${toX(s.x).toFixed(1)},${toY(s.y - (s.se ?? 0)).toFixed(1)}`);
    parts.push(`<polygon points="${upper.concat(lower).join(" ")}" class="se-band"></polygon>`);
    const line = band.map((s) => `${toX(s.x).toFixed(1)},${toY(s.y).toFixed(1)}`).join(" ");
    parts.push(`<polyline points="${line}" fill="none" class="regression-line"></polyline>`);
  }
  for (const p of points) {
    parts.push(
      `<circle cx="${toX(p.x).toFixed(1)}" cy="${toY(p.y).toFixed(1)}" r="2.5" class="dot"></circle>`,
    );
  }
  parts.push("</svg>");
  return parts.join("");
}

export function htmlTable(headers: string[], rows: string[][], cls = "data-table"): string {
  const head = headers.map((h) => `<th>${esc(h)}</th>`).join("");
  const body = rows
    .map((row) => `<tr>${row.map((cell) => `<td>${esc(cell)}</td>`).join("")}</tr>`)
    .join("");
  return `<table class="${cls}"><thead><tr>${head}</tr></thead><tbody>${body}</tbody></table>`;
}
