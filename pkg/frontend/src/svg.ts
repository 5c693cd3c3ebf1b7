/**
 * Deterministic SVG line charts: fixed styles, fixed geometry, no
 * timestamps or randomness, so identical inputs give identical bytes.
 */

export interface Series {
  label: string;
  points: Array<[number, number]>;
  dashed?: boolean;
}

export interface ChartSpec {
  title: string;
  xLabel: string;
  yLabel: string;
  xScale: "linear" | "log";
  yScale: "linear" | "log";
  series: Series[];
  note?: string;
}

const WIDTH = 720;
const HEIGHT = 480;
const MARGIN = { left: 72, right: 24, top: 40, bottom: 56 };
const PALETTE = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e",
                 "#8c564b", "#17becf", "#7f7f7f"];

export function fmt(x: number): string {
  if (Number.isInteger(x) && Math.abs(x) < 1e7) return String(x);
  const p = x.toPrecision(4);
  return String(Number(p));
}

interface Scale {
  (v: number): number;
  ticks: number[];
}

function makeScale(values: number[], kind: "linear" | "log",
                   lo: number, hi: number): Scale {
  let min = Math.min(...values);
  let max = Math.max(...values);
  if (kind === "log") {
    if (min <= 0) throw new Error("log scale needs positive values");
    min = Math.log2(min);
    max = Math.log2(max);
  }
  if (min === max) {
    min -= 0.5;
    max += 0.5;
  }
  const span = max - min;
  const transform = (v: number) => (kind === "log" ? Math.log2(v) : v);
  const scale = ((v: number) =>
    lo + ((transform(v) - min) / span) * (hi - lo)) as Scale;
  const ticks: number[] = [];
  const count = 6;
  for (let i = 0; i <= count; i++) {
    const t = min + (span * i) / count;
    ticks.push(kind === "log" ? 2 ** t : t);
  }
  scale.ticks = ticks;
  return scale;
}

function esc(s: string): string {
  return s.replace(/&/g, "&amp;").replace(/</g, "&lt;").replace(/>/g, "&gt;");
}

export function renderChart(chart: ChartSpec): string {
  if (chart.series.length === 0 || chart.series.every((s) => s.points.length === 0)) {
    throw new Error("nothing to plot");
  }
  const xs = chart.series.flatMap((s) => s.points.map((p) => p[0]));
  const ys = chart.series.flatMap((s) => s.points.map((p) => p[1]));
  const x = makeScale(xs, chart.xScale, MARGIN.left, WIDTH - MARGIN.right);
  const y = makeScale(ys, chart.yScale, HEIGHT - MARGIN.bottom, MARGIN.top);

  const parts: string[] = [];
  parts.push(`<svg xmlns="http://www.w3.org/2000/svg" width="${WIDTH}" height="${HEIGHT}" viewBox="0 0 ${WIDTH} ${HEIGHT}" font-family="monospace" font-size="12">`);
  parts.push(`<rect width="${WIDTH}" height="${HEIGHT}" fill="white"/>`);
  parts.push(`<text x="${WIDTH / 2}" y="20" text-anchor="middle" font-size="15">${esc(chart.title)}</text>`);

  // frame and ticks
  const x0 = MARGIN.left, x1 = WIDTH - MARGIN.right;
  const y0 = HEIGHT - MARGIN.bottom, y1 = MARGIN.top;
  parts.push(`<rect x="${x0}" y="${y1}" width="${x1 - x0}" height="${y0 - y1}" fill="none" stroke="#333"/>`);
  for (const t of x.ticks) {
    const px = fmt2(x(t));
    parts.push(`<line x1="${px}" y1="${y0}" x2="${px}" y2="${y0 + 4}" stroke="#333"/>`);
    parts.push(`<text x="${px}" y="${y0 + 18}" text-anchor="middle">${fmt(round3(t))}</text>`);
  }
  for (const t of y.ticks) {
    const py = fmt2(y(t));
    parts.push(`<line x1="${x0 - 4}" y1="${py}" x2="${x0}" y2="${py}" stroke="#333"/>`);
    parts.push(`<text x="${x0 - 8}" y="${py}" text-anchor="end" dominant-baseline="middle">${fmt(round3(t))}</text>`);
  }
  parts.push(`<text x="${(x0 + x1) / 2}" y="${HEIGHT - 14}" text-anchor="middle">${esc(chart.xLabel)}</text>`);
  parts.push(`<text x="18" y="${(y0 + y1) / 2}" text-anchor="middle" transform="rotate(-90 18 ${(y0 + y1) / 2})">${esc(chart.yLabel)}</text>`);

  chart.series.forEach((s, i) => {
    const color = PALETTE[i % PALETTE.length];
    const pts = s.points
      .map(([px, py]) => `${fmt2(x(px))},${fmt2(y(py))}`)
      .join(" ");
    const dash = s.dashed ? ` stroke-dasharray="6,4"` : "";
    parts.push(`<polyline class="series" fill="none" stroke="${color}" stroke-width="1.5"${dash} points="${pts}"/>`);
    for (const [px, py] of s.points) {
      parts.push(`<circle cx="${fmt2(x(px))}" cy="${fmt2(y(py))}" r="2.5" fill="${color}"/>`);
    }
    parts.push(`<text x="${x1 - 8}" y="${y1 + 16 + 16 * i}" text-anchor="end" fill="${color}">${esc(s.label)}</text>`);
  });

  if (chart.note) {
    parts.push(`<text x="${x0 + 8}" y="${y1 + 16}" fill="#333">${esc(chart.note)}</text>`);
  }
  parts.push("</svg>");
  return parts.join("\n") + "\n";
}

function round3(v: number): number {
  return Number(v.toPrecision(3));
}

function fmt2(v: number): string {
  return (Math.round(v * 100) / 100).toString();
}
