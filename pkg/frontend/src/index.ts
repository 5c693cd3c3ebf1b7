export { SCHEMAS, SchemaError, parseCsv, checkSchema, column,
         summaryNumber, configValue } from "./csv.js";
export type { CsvFile, SchemaName } from "./csv.js";
export { PLOT_KINDS, buildPlot } from "./plots.js";
export type { PlotKind, RenderResult } from "./plots.js";
export { renderChart, fmt } from "./svg.js";
export type { ChartSpec, Series } from "./svg.js";
export { buildManifest, manifestJson, manifestPath, sha256 } from "./manifest.js";
export { parseArgs, run } from "./cli.js";
