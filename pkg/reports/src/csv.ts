import { readFileSync } from "fs";
import Papa from "papaparse";

export class SchemaError extends Error {}

export type Row = Record<string, string | number | boolean | null>;

export function readRows(path: string): Row[] {
  const text = readFileSync(path, "utf8");
  if (text.trim() === "") {
    throw new SchemaError(`empty CSV file: ${path}`);
  }
  const parsed = Papa.parse<Row>(text.trim(), {
    header: true,
    dynamicTyping: true,
    skipEmptyLines: true,
  });
  if (parsed.errors.length > 0) {
    const first = parsed.errors[0];
    throw new SchemaError(`CSV parse error in ${path}: ${first.message} (row ${first.row})`);
  }
  if (parsed.data.length === 0) {
    throw new SchemaError(`no data rows in ${path}`);
  }
  return parsed.data;
}

export function requireColumns(rows: Row[], columns: string[], path: string): void {
  const present = new Set(Object.keys(rows[0] ?? {}));
  const missing = columns.filter((c) => !present.has(c));
  if (missing.length > 0) {
    throw new SchemaError(`missing column(s) in ${path}: ${missing.join(", ")}`);
  }
}

/** Trial rows only: drop summary rows (trial < 0) and flagged failures. */
export function usableRows(rows: Row[]): Row[] {
  return rows.filter((r) => {
    const trial = typeof r.trial === "number" ? r.trial : 0;
    const flag = r.flag ?? "";
    return trial >= 0 && (flag === "" || flag === null);
  });
}

export function numeric(row: Row, column: string): number {
  const value = row[column];
  if (typeof value === "number" && Number.isFinite(value)) {
    return value;
  }
  throw new SchemaError(`non-numeric value in column ${column}: ${String(value)}`);
}

export function mean(values: number[]): number {
  return values.reduce((a, b) => a + b, 0) / values.length;
}

export function std(values: number[]): number {
  if (values.length < 2) {
    return 0;
  }
  const m = mean(values);
  return Math.sqrt(values.reduce((acc, v) => acc + (v - m) ** 2, 0) / (values.length - 1));
}
