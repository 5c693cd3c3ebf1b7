#!/usr/bin/env node
/**
 * render --kind <kind> --in <csv...> --out <img.svg>
 *
 * Reads detuf experiment CSVs, validates them against the frozen
 * schemas, and writes a deterministic SVG plus a manifest of input
 * hashes. Nothing is written when validation or rendering fails.
 */

import { readFileSync, writeFileSync } from "node:fs";

import { parseCsv } from "./csv.js";
import { PLOT_KINDS, PlotKind, buildPlot } from "./plots.js";
import { renderChart } from "./svg.js";
import { buildManifest, manifestJson, manifestPath } from "./manifest.js";

interface Args {
  kind: PlotKind;
  inputs: string[];
  out: string;
}

export function parseArgs(argv: string[]): Args {
  let kind: string | null = null;
  const inputs: string[] = [];
  let out: string | null = null;
  let i = 0;
  if (argv[0] === "render") i = 1; // optional subcommand word
  for (; i < argv.length; i++) {
    const arg = argv[i];
    if (arg === "--kind") {
      kind = argv[++i];
    } else if (arg === "--in") {
      while (i + 1 < argv.length && !argv[i + 1].startsWith("--")) {
        inputs.push(argv[++i]);
      }
    } else if (arg === "--out") {
      out = argv[++i];
    } else {
      throw new Error(`unknown argument '${arg}'`);
    }
  }
  if (!kind || !(PLOT_KINDS as readonly string[]).includes(kind)) {
    throw new Error(`--kind must be one of: ${PLOT_KINDS.join(", ")}`);
  }
  if (inputs.length === 0) throw new Error("--in needs at least one CSV");
  if (!out) throw new Error("--out is required");
  return { kind: kind as PlotKind, inputs, out };
}

export function run(argv: string[]): string[] {
  const args = parseArgs(argv);
  const texts = args.inputs.map((path) => ({
    path,
    text: readFileSync(path, "utf-8"),
  }));
  const files = texts.map(({ path, text }) => parseCsv(text, path));
  const result = buildPlot(args.kind, files);
  const svg = renderChart(result.chart);
  // both artifacts are produced only after a fully successful render
  writeFileSync(args.out, svg);
  writeFileSync(manifestPath(args.out),
                manifestJson(buildManifest(args.kind, args.out, texts)));
  return result.report;
}

const isMain = process.argv[1] !== undefined &&
  import.meta.url.endsWith(process.argv[1].split("/").pop() as string);

if (isMain) {
  try {
    for (const line of run(process.argv.slice(2))) {
      console.log(line);
    }
  } catch (err) {
    console.error(String(err instanceof Error ? err.message : err));
    process.exit(1);
  }
}
