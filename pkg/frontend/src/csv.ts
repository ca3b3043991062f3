/**
 * Readers for the four artifact CSV schemas written by the simulator.
 *
 * Headers are matched exactly: these files are a contract, not loose
 * tabular data, so a renamed or missing column is an error naming the
 * offending columns rather than a silently empty figure.
 */
import Papa from "papaparse";

export class SchemaError extends Error {
  constructor(message: string) {
    super(message);
    this.name = "SchemaError";
  }
}

export const SERIES_COLUMNS = [
  "run_id",
  "t",
  "linf_u",
  "min_theta",
  "mass_u",
  "mass_theta",
  "lp1",
  "lp2",
  "lp4",
  "lpinf",
  "bv_deriv",
  "energy_residual",
  "alpha_margin_lo",
  "alpha_margin_hi",
] as const;

/** Optional numeric columns of a series row (everything after run_id, t). */
export const SERIES_VALUE_COLUMNS: readonly string[] = SERIES_COLUMNS.slice(2);

export const SCALING_COLUMNS = ["eps", "sup_ux", "product"] as const;
export const PROFILE_COLUMNS = ["x", "u", "alpha", "theta"] as const;
export const TRANSFORMED_COLUMNS = ["alpha", "U", "U_alpha"] as const;

export interface SeriesRow {
  runId: string;
  t: number;
  /** Keyed by SERIES_VALUE_COLUMNS; null where the cell was empty. */
  values: Record<string, number | null>;
}

export interface SeriesTable {
  runId: string;
  rows: SeriesRow[];
}

export interface ScalingRow {
  eps: number;
  sup_ux: number;
  product: number;
}

export interface ProfileRow {
  x: number;
  u: number;
  alpha: number;
  theta: number;
}

export interface TransformedRow {
  alpha: number;
  U: number;
  U_alpha: number;
}

function splitRows(text: string, what: string): string[][] {
  const parsed = Papa.parse<string[]>(text, { skipEmptyLines: true });
  if (parsed.errors.length > 0) {
    const first = parsed.errors[0];
    throw new SchemaError(`${what}: malformed CSV (${first.message})`);
  }
  if (parsed.data.length === 0) {
    throw new SchemaError(`${what}: file is empty, expected a header line`);
  }
  return parsed.data;
}

function checkHeader(
  header: string[],
  expected: readonly string[],
  what: string,
): void {
  if (
    header.length === expected.length &&
    expected.every((name, i) => header[i] === name)
  ) {
    return;
  }
  const missing = expected.filter((name) => !header.includes(name));
  const extra = header.filter((name) => !expected.includes(name));
  const parts = [`${what}: header does not match the schema`];
  if (missing.length > 0) parts.push(`missing columns: ${missing.join(", ")}`);
  if (extra.length > 0) parts.push(`unexpected columns: ${extra.join(", ")}`);
  if (missing.length === 0 && extra.length === 0) {
    parts.push(`column order must be: ${expected.join(", ")}`);
  }
  throw new SchemaError(parts.join("; "));
}

function requireNumber(cell: string, where: string): number {
  const value = Number(cell);
  if (cell.trim() === "" || !Number.isFinite(value)) {
    throw new SchemaError(`${where}: expected a finite number, got ${JSON.stringify(cell)}`);
  }
  return value;
}

/** Parse a time-series CSV; a header-only file yields an empty table. */
export function parseSeriesCsv(text: string): SeriesTable {
  const rows = splitRows(text, "series");
  checkHeader(rows[0], SERIES_COLUMNS, "series");
  const out: SeriesRow[] = [];
  let runId = "";
  for (let i = 1; i < rows.length; i++) {
    const cells = rows[i];
    const where = `series row ${i}`;
    if (cells.length !== SERIES_COLUMNS.length) {
      throw new SchemaError(
        `${where}: ${cells.length} cells, expected ${SERIES_COLUMNS.length}`,
      );
    }
    if (runId === "") {
      runId = cells[0];
    } else if (cells[0] !== runId) {
      throw new SchemaError(
        `${where}: run_id ${cells[0]} differs from ${runId}; one series per file`,
      );
    }
    const t = requireNumber(cells[1], `${where}, column t`);
    if (out.length > 0 && t <= out[out.length - 1].t) {
      throw new SchemaError(`${where}: t must be strictly increasing`);
    }
    const values: Record<string, number | null> = {};
    SERIES_VALUE_COLUMNS.forEach((name, j) => {
      const cell = cells[j + 2];
      values[name] =
        cell === "" ? null : requireNumber(cell, `${where}, column ${name}`);
    });
    out.push({ runId, t, values });
  }
  return { runId, rows: out };
}

export function parseScalingCsv(text: string): ScalingRow[] {
  const rows = splitRows(text, "scaling");
  checkHeader(rows[0], SCALING_COLUMNS, "scaling");
  return rows.slice(1).map((cells, i) => {
    const where = `scaling row ${i + 1}`;
    if (cells.length !== SCALING_COLUMNS.length) {
      throw new SchemaError(`${where}: ${cells.length} cells, expected 3`);
    }
    return {
      eps: requireNumber(cells[0], `${where}, column eps`),
      sup_ux: requireNumber(cells[1], `${where}, column sup_ux`),
      product: requireNumber(cells[2], `${where}, column product`),
    };
  });
}

export function parseProfileCsv(text: string): ProfileRow[] {
  const rows = splitRows(text, "profile");
  checkHeader(rows[0], PROFILE_COLUMNS, "profile");
  return rows.slice(1).map((cells, i) => {
    const where = `profile row ${i + 1}`;
    if (cells.length !== PROFILE_COLUMNS.length) {
      throw new SchemaError(`${where}: ${cells.length} cells, expected 4`);
    }
    return {
      x: requireNumber(cells[0], `${where}, column x`),
      u: requireNumber(cells[1], `${where}, column u`),
      alpha: requireNumber(cells[2], `${where}, column alpha`),
      theta: requireNumber(cells[3], `${where}, column theta`),
    };
  });
}

export function parseTransformedCsv(text: string): TransformedRow[] {
  const rows = splitRows(text, "transformed");
  checkHeader(rows[0], TRANSFORMED_COLUMNS, "transformed");
  return rows.slice(1).map((cells, i) => {
    const where = `transformed row ${i + 1}`;
    if (cells.length !== TRANSFORMED_COLUMNS.length) {
      throw new SchemaError(`${where}: ${cells.length} cells, expected 3`);
    }
    return {
      alpha: requireNumber(cells[0], `${where}, column alpha`),
      U: requireNumber(cells[1], `${where}, column U`),
      U_alpha: requireNumber(cells[2], `${where}, column U_alpha`),
    };
  });
}
