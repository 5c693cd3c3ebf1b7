/**
 * The five figure kinds, every one a pure function from parsed CSVs to a
 * chart spec. Inputs are grouped into curves by the graph recorded in
 * each file's config echo.
 */

import { ChartSpec, Series } from "./svg.js";
import { CsvFile, SchemaError, checkSchema, column, configValue,
         summaryNumber } from "./csv.js";

export const PLOT_KINDS = [
  "iterations_vs_window",
  "work_ratio",
  "contention_scaling",
  "sum_pt_growth",
  "lb_iterations_fit",
] as const;

export type PlotKind = (typeof PLOT_KINDS)[number];

export interface RenderResult {
  chart: ChartSpec;
  /** extra lines for stdout, e.g. the fitted exponent */
  report: string[];
}

function windowOf(file: CsvFile): number {
  const w = configValue(file, "window");
  const num = Number(w);
  if (Number.isNaN(num)) {
    throw new SchemaError(
      `needs a fixed-window run, config says window=${w}`, file.path);
  }
  return num;
}

function groupByGraph(files: CsvFile[],
                      point: (f: CsvFile) => [number, number]): Series[] {
  const groups = new Map<string, Array<[number, number]>>();
  for (const f of files) {
    const graph = configValue(f, "graph");
    if (!groups.has(graph)) groups.set(graph, []);
    groups.get(graph)!.push(point(f));
  }
  const series: Series[] = [];
  for (const label of [...groups.keys()].sort()) {
    const points = groups.get(label)!.sort((a, b) => a[0] - b[0]);
    series.push({ label, points });
  }
  return series;
}

function iterationsVsWindow(files: CsvFile[]): RenderResult {
  files.forEach((f) => checkSchema(f, "parallel"));
  const series = groupByGraph(files, (f) => [windowOf(f), f.rows.length]);
  return {
    chart: {
      title: "iterations vs window size",
      xLabel: "window size S",
      yLabel: "iterations",
      xScale: "log",
      yScale: "log",
      series,
    },
    report: [],
  };
}

function workRatio(files: CsvFile[]): RenderResult {
  files.forEach((f) => checkSchema(f, "parallel"));
  const series = groupByGraph(files, (f) => {
    const ratio = summaryNumber(f, "work_total") / summaryNumber(f, "seq_work_total");
    return [windowOf(f), ratio];
  });
  return {
    chart: {
      title: "parallel work relative to sequential",
      xLabel: "window size S",
      yLabel: "work ratio",
      xScale: "log",
      yScale: "linear",
      series,
    },
    report: [],
  };
}

function contentionScaling(files: CsvFile[]): RenderResult {
  files.forEach((f) => checkSchema(f, "contention"));
  const series: Series[] = files.map((f) => {
    const ts = column(f, "T");
    const events = column(f, "events");
    const byT = new Map<number, number[]>();
    ts.forEach((t, i) => {
      if (!byT.has(t)) byT.set(t, []);
      byT.get(t)!.push(events[i]);
    });
    const points: Array<[number, number]> = [...byT.keys()].sort((a, b) => a - b)
      .map((t) => {
        const v = byT.get(t)!;
        return [t, v.reduce((s, x) => s + x, 0) / v.length];
      });
    return { label: configValue(f, "graph"), points };
  });
  return {
    chart: {
      title: "mean write contention vs thread count",
      xLabel: "threads T",
      yLabel: "mean contention events",
      xScale: "log",
      yScale: "linear",
      series,
    },
    report: [],
  };
}

function graphVertexCount(file: CsvFile): number {
  const graph = configValue(file, "graph");
  const match = graph.match(/(?:^|:)n=(\d+)/);
  if (!match) {
    throw new SchemaError(
      `cannot read a vertex count from graph='${graph}'`, file.path);
  }
  return Number(match[1]);
}

function sumPtGrowth(files: CsvFile[]): RenderResult {
  files.forEach((f) => checkSchema(f, "process"));
  const groups = new Map<string, Array<[number, number]>>();
  for (const f of files) {
    const family = configValue(f, "graph").split(":")[0];
    const point: [number, number] = [graphVertexCount(f),
                                     summaryNumber(f, "sum_pt")];
    if (!groups.has(family)) groups.set(family, []);
    groups.get(family)!.push(point);
  }
  const series: Series[] = [...groups.keys()].sort().map((label) => ({
    label,
    points: groups.get(label)!.sort((a, b) => a[0] - b[0]),
  }));
  return {
    chart: {
      title: "collision probability mass vs graph size",
      xLabel: "vertices n",
      yLabel: "mean sum of p_t",
      xScale: "log",
      yScale: "linear",
      series,
    },
    report: [],
  };
}

function median(values: number[]): number {
  const sorted = [...values].sort((a, b) => a - b);
  const mid = Math.floor(sorted.length / 2);
  return sorted.length % 2 ? sorted[mid] : (sorted[mid - 1] + sorted[mid]) / 2;
}

function lbIterationsFit(files: CsvFile[]): RenderResult {
  files.forEach((f) => checkSchema(f, "lowerbound_iterations"));
  const byN = new Map<number, number[]>();
  for (const f of files) {
    const ns = column(f, "N");
    const iters = column(f, "iterations");
    ns.forEach((n, i) => {
      if (!byN.has(n)) byN.set(n, []);
      byN.get(n)!.push(iters[i]);
    });
  }
  const sizes = [...byN.keys()].sort((a, b) => a - b);
  if (sizes.length < 2) {
    throw new SchemaError("need at least two distinct N for a fit", files[0].path);
  }
  const points: Array<[number, number]> = sizes.map(
    (n) => [n, median(byN.get(n)!)]);

  // least squares in log-log space
  const lx = points.map(([n]) => Math.log(n));
  const ly = points.map(([, m]) => Math.log(m));
  const k = lx.length;
  const mx = lx.reduce((a, b) => a + b, 0) / k;
  const my = ly.reduce((a, b) => a + b, 0) / k;
  let num = 0, den = 0;
  for (let i = 0; i < k; i++) {
    num += (lx[i] - mx) * (ly[i] - my);
    den += (lx[i] - mx) ** 2;
  }
  const gamma = num / den;
  const c = Math.exp(my - gamma * mx);
  const fitted: Series = {
    label: `fit: ${c.toPrecision(3)} * N^${gamma.toPrecision(3)}`,
    points: sizes.map((n) => [n, c * n ** gamma]),
    dashed: true,
  };
  return {
    chart: {
      title: "iterations of the maximal-window run vs N",
      xLabel: "cycle size N",
      yLabel: "median iterations",
      xScale: "log",
      yScale: "log",
      series: [{ label: "median iterations", points }, fitted],
      note: `gamma = ${gamma.toPrecision(3)}`,
    },
    report: [`gamma=${gamma.toPrecision(6)}`],
  };
}

export function buildPlot(kind: PlotKind, files: CsvFile[]): RenderResult {
  if (files.length === 0) throw new Error("no input files");
  switch (kind) {
    case "iterations_vs_window": return iterationsVsWindow(files);
    case "work_ratio": return workRatio(files);
    case "contention_scaling": return contentionScaling(files);
    case "sum_pt_growth": return sumPtGrowth(files);
    case "lb_iterations_fit": return lbIterationsFit(files);
  }
}
