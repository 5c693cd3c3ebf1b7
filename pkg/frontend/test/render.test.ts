import { mkdtempSync, existsSync, readFileSync, writeFileSync } from "node:fs";
import { tmpdir } from "node:os";
import { join } from "node:path";
import { createHash } from "node:crypto";

import { describe, expect, it } from "vitest";

import { SchemaError, parseCsv, checkSchema } from "../src/csv.js";
import { buildPlot } from "../src/plots.js";
import { renderChart } from "../src/svg.js";
import { run } from "../src/cli.js";

const FIXTURES = join(__dirname, "fixtures");

const parallelFixtures = [8, 32, 128].flatMap((w) => [
  join(FIXTURES, `parallel_cycle_w${w}.csv`),
  join(FIXTURES, `parallel_er_w${w}.csv`),
]);
const processFixtures = [128, 256, 512].map(
  (n) => join(FIXTURES, `process_cycle_n${n}.csv`));

function tmp(): string {
  return mkdtempSync(join(tmpdir(), "detuf-plots-"));
}

function renderArgs(kind: string, inputs: string[], out: string): string[] {
  return ["render", "--kind", kind, "--in", ...inputs, "--out", out];
}

describe("csv parsing", () => {
  it("reads config echo, rows and summary", () => {
    const file = parseCsv(readFileSync(parallelFixtures[0], "utf-8"),
                          parallelFixtures[0]);
    expect(file.columns).toEqual(["iteration", "prefix_len", "failed",
                                  "window_size"]);
    expect(file.rows.length).toBeGreaterThan(0);
    expect(file.config.graph).toBe("cycle:n=512");
    expect(file.summary?.determinism).toBe("ok");
  });

  it("rejects a renamed column, naming it", () => {
    const text = readFileSync(parallelFixtures[0], "utf-8")
      .replace("prefix_len", "prefixlen");
    const file = parseCsv(text, "renamed.csv");
    expect(() => checkSchema(file, "parallel"))
      .toThrowError(/column 1 is 'prefixlen', expected 'prefix_len'/);
  });

  it("rejects a header-only file", () => {
    const file = parseCsv("# config: a=b\nt,C_t,p_exact,phi,colliding_pairs\n",
                          "empty.csv");
    expect(() => checkSchema(file, "process")).toThrowError(/no data rows/);
  });
});

describe("render cli", () => {
  it("writes byte-identical images on repeated invocation", () => {
    const dir = tmp();
    const out1 = join(dir, "a.svg");
    const out2 = join(dir, "b.svg");
    run(renderArgs("iterations_vs_window", parallelFixtures, out1));
    run(renderArgs("iterations_vs_window", parallelFixtures, out2));
    expect(readFileSync(out1)).toEqual(readFileSync(out2));
  });

  it("renders one curve per input graph", () => {
    const dir = tmp();
    const out = join(dir, "c.svg");
    run(renderArgs("iterations_vs_window", parallelFixtures, out));
    const svg = readFileSync(out, "utf-8");
    const curves = svg.match(/class="series"/g) ?? [];
    expect(curves.length).toBe(2); // cycle and erdos_renyi
    expect(svg).toContain("cycle:n=512");
    expect(svg).toContain("erdos_renyi:n=512");
  });

  it("writes no output for a renamed column", () => {
    const dir = tmp();
    const bad = join(dir, "bad.csv");
    writeFileSync(bad, readFileSync(parallelFixtures[0], "utf-8")
      .replace("window_size", "windowsize"));
    const out = join(dir, "d.svg");
    expect(() => run(renderArgs("iterations_vs_window", [bad], out)))
      .toThrowError(SchemaError);
    expect(existsSync(out)).toBe(false);
    expect(existsSync(out + ".manifest.json")).toBe(false);
  });

  it("writes no output for a header-only csv", () => {
    const dir = tmp();
    const empty = join(dir, "empty.csv");
    writeFileSync(empty,
      "# config: graph=cycle:n=8 window=4\niteration,prefix_len,failed,window_size\n");
    const out = join(dir, "e.svg");
    expect(() => run(renderArgs("iterations_vs_window", [empty], out)))
      .toThrowError(/no data rows/);
    expect(existsSync(out)).toBe(false);
  });

  it("writes a manifest with input hashes", () => {
    const dir = tmp();
    const out = join(dir, "f.svg");
    run(renderArgs("contention_scaling",
                   [join(FIXTURES, "contention_er.csv")], out));
    const manifest = JSON.parse(readFileSync(out + ".manifest.json", "utf-8"));
    expect(manifest.kind).toBe("contention_scaling");
    expect(manifest.inputs).toHaveLength(1);
    const want = createHash("sha256")
      .update(readFileSync(join(FIXTURES, "contention_er.csv")))
      .digest("hex");
    expect(manifest.inputs[0].sha256).toBe(want);
  });

  it("rejects unknown kinds and missing flags", () => {
    expect(() => run(["render", "--kind", "pie", "--in", "x", "--out", "y"]))
      .toThrowError(/--kind must be one of/);
    expect(() => run(["render", "--kind", "work_ratio", "--out", "y"]))
      .toThrowError(/--in needs/);
  });
});

describe("plot kinds", () => {
  it("work_ratio needs the sequential baseline in the summary", () => {
    const text = readFileSync(parallelFixtures[0], "utf-8")
      .replace(/seq_work_total=\d+ /, "");
    const file = parseCsv(text, "nobaseline.csv");
    expect(() => buildPlot("work_ratio", [file]))
      .toThrowError(/missing summary key 'seq_work_total'/);
  });

  it("work_ratio produces a finite ratio per window", () => {
    const files = parallelFixtures.map(
      (p) => parseCsv(readFileSync(p, "utf-8"), p));
    const { chart } = buildPlot("work_ratio", files);
    expect(chart.series).toHaveLength(2);
    for (const s of chart.series) {
      expect(s.points).toHaveLength(3);
      for (const [, ratio] of s.points) {
        expect(ratio).toBeGreaterThan(0);
        expect(Number.isFinite(ratio)).toBe(true);
      }
    }
  });

  it("sum_pt_growth uses vertex counts from config echoes", () => {
    const files = processFixtures.map(
      (p) => parseCsv(readFileSync(p, "utf-8"), p));
    const { chart } = buildPlot("sum_pt_growth", files);
    expect(chart.series).toHaveLength(1);
    expect(chart.series[0].points.map(([n]) => n)).toEqual([128, 256, 512]);
  });

  it("contention_scaling averages events per thread count", () => {
    const path = join(FIXTURES, "contention_er.csv");
    const file = parseCsv(readFileSync(path, "utf-8"), path);
    const { chart } = buildPlot("contention_scaling", [file]);
    expect(chart.series[0].points.map(([t]) => t)).toEqual([2, 4, 8]);
  });

  it("lb_iterations_fit reports a plausible exponent", () => {
    const path = join(FIXTURES, "lb_iterations.csv");
    const file = parseCsv(readFileSync(path, "utf-8"), path);
    const { chart, report } = buildPlot("lb_iterations_fit", [file]);
    expect(chart.series).toHaveLength(2);
    expect(report[0]).toMatch(/^gamma=/);
    const gamma = Number(report[0].split("=")[1]);
    expect(gamma).toBeGreaterThan(0.3);
    expect(gamma).toBeLessThan(0.7);
  });

  it("synthetic power law fits exactly", () => {
    const rows = [];
    for (const n of [256, 1024, 4096]) {
      for (let s = 0; s < 3; s++) rows.push(`${n},${s},${Math.round(2 * n ** 0.5)}`);
    }
    const text = "# config: subcommand=lowerbound.iterations\n" +
      "N,seed,iterations\n" + rows.join("\n") + "\n";
    const file = parseCsv(text, "synthetic.csv");
    const { report } = buildPlot("lb_iterations_fit", [file]);
    const gamma = Number(report[0].split("=")[1]);
    expect(Math.abs(gamma - 0.5)).toBeLessThan(0.01);
  });

  it("chart renderer refuses empty series", () => {
    expect(() => renderChart({
      title: "t", xLabel: "x", yLabel: "y",
      xScale: "linear", yScale: "linear", series: [],
    })).toThrowError(/nothing to plot/);
  });
});
