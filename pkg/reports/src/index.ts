export { plotConvergence, buildSeries } from "./convergence";
export { plotComparison, histogramBins } from "./comparison";
export { readRows, requireColumns, usableRows, SchemaError } from "./csv";
export { runCli } from "./cli";
