/**
 * Reader for detuf experiment CSVs.
 *
 * Layout: a `# config:` echo line, the frozen column header, data rows,
 * and optionally a trailing `# summary:` line. Column names are checked
 * against the frozen schemas; any mismatch fails loudly with the column
 * that broke.
 */

export const SCHEMAS = {
  process: ["t", "C_t", "p_exact", "phi", "colliding_pairs"],
  parallel: ["iteration", "prefix_len", "failed", "window_size"],
  contention: ["T", "seed", "events"],
  lowerbound_minima: ["N", "trials", "mean_M", "tail_prob"],
  lowerbound_prefix: ["N", "W", "no_collision_prob"],
  lowerbound_iterations: ["N", "seed", "iterations"],
} as const;

export type SchemaName = keyof typeof SCHEMAS;

export class SchemaError extends Error {
  constructor(message: string, readonly path: string) {
    super(`${path}: ${message}`);
    this.name = "SchemaError";
  }
}

export interface CsvFile {
  path: string;
  config: Record<string, string>;
  columns: string[];
  rows: number[][];
  summary: Record<string, string> | null;
}

function parseKeyValues(rest: string): Record<string, string> {
  const out: Record<string, string> = {};
  for (const token of rest.split(/\s+/)) {
    if (!token) continue;
    const eq = token.indexOf("=");
    if (eq > 0) out[token.slice(0, eq)] = token.slice(eq + 1);
  }
  return out;
}

export function parseCsv(text: string, path: string): CsvFile {
  let config: Record<string, string> = {};
  let summary: Record<string, string> | null = null;
  let columns: string[] | null = null;
  const rows: number[][] = [];
  for (const raw of text.split("\n")) {
    const line = raw.trimEnd();
    if (!line) continue;
    if (line.startsWith("#")) {
      if (line.startsWith("# config:")) {
        config = parseKeyValues(line.slice("# config:".length));
      } else if (line.startsWith("# summary:")) {
        summary = parseKeyValues(line.slice("# summary:".length));
      }
      continue;
    }
    if (columns === null) {
      columns = line.split(",");
      continue;
    }
    const cells = line.split(",");
    if (cells.length !== columns.length) {
      throw new SchemaError(
        `row has ${cells.length} cells, header has ${columns.length}`, path);
    }
    const parsed = cells.map((c) => Number(c));
    const bad = parsed.findIndex((v) => Number.isNaN(v));
    if (bad >= 0) {
      throw new SchemaError(`non-numeric value '${cells[bad]}' in column ${columns[bad]}`, path);
    }
    rows.push(parsed);
  }
  if (columns === null) {
    throw new SchemaError("no column header found", path);
  }
  return { path, config, columns, rows, summary };
}

export function checkSchema(file: CsvFile, schema: SchemaName): void {
  const expected = SCHEMAS[schema];
  if (file.columns.length !== expected.length) {
    throw new SchemaError(
      `expected ${expected.length} columns (${expected.join(",")}), ` +
      `found ${file.columns.length}`, file.path);
  }
  for (let i = 0; i < expected.length; i++) {
    if (file.columns[i] !== expected[i]) {
      throw new SchemaError(
        `column ${i} is '${file.columns[i]}', expected '${expected[i]}'`, file.path);
    }
  }
  if (file.rows.length === 0) {
    throw new SchemaError("no data rows", file.path);
  }
}

export function column(file: CsvFile, name: string): number[] {
  const idx = file.columns.indexOf(name);
  if (idx < 0) throw new SchemaError(`missing column '${name}'`, file.path);
  return file.rows.map((r) => r[idx]);
}

export function summaryNumber(file: CsvFile, key: string): number {
  const value = file.summary?.[key];
  if (value === undefined) {
    throw new SchemaError(`missing summary key '${key}'`, file.path);
  }
  const num = Number(value);
  if (Number.isNaN(num)) {
    throw new SchemaError(`summary key '${key}' is not numeric`, file.path);
  }
  return num;
}

export function configValue(file: CsvFile, key: string): string {
  const value = file.config[key];
  if (value === undefined) {
    throw new SchemaError(`missing config key '${key}'`, file.path);
  }
  return value;
}
