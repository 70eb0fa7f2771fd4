/**
 * Readers for the two ringspdc CSV dialects.
 *
 * Both start with `# key: value` metadata lines.  Covariance files then hold
 * the raw 2N x 2N matrix, one row per line; sweep files have a column header
 * row followed by one witness row per (z, parity set, adjacent pair).
 */

import Papa from "papaparse";

export class CsvFormatError extends Error {}

export interface CovarianceData {
  meta: Record<string, string>;
  matrix: number[][]; // 2N x 2N, quadrature ordering x1,y1,...,xN,yN
  nModes: number;
}

export interface VlfRow {
  z: number;
  set: string;
  modeA: number;
  modeB: number;
  value: number;
  valueLossless: number;
  fullyInseparable: boolean;
}

export interface VlfData {
  meta: Record<string, string>;
  rows: VlfRow[];
  source: string;
}

export const VLF_COLUMNS = [
  "z_mm",
  "set",
  "mode_a",
  "mode_b",
  "theta_a_rad",
  "theta_b_rad",
  "value",
  "value_lossless",
  "fully_inseparable",
];

function splitMeta(text: string): { meta: Record<string, string>; body: string } {
  const meta: Record<string, string> = {};
  const rest: string[] = [];
  for (const line of text.split(/\r?\n/)) {
    if (line.startsWith("#")) {
      const stripped = line.slice(1);
      const sep = stripped.indexOf(":");
      if (sep >= 0) meta[stripped.slice(0, sep).trim()] = stripped.slice(sep + 1).trim();
    } else if (line.trim() !== "") {
      rest.push(line);
    }
  }
  return { meta, body: rest.join("\n") };
}

function toNumber(cell: string, context: string): number {
  const v = Number(cell);
  if (!Number.isFinite(v)) {
    throw new CsvFormatError(`${context}: expected a finite number, got ${JSON.stringify(cell)}`);
  }
  return v;
}

export function parseCovarianceCsv(text: string, source = "covariance CSV"): CovarianceData {
  const { meta, body } = splitMeta(text);
  if (body === "") throw new CsvFormatError(`${source}: no data rows`);
  const parsed = Papa.parse<string[]>(body, { skipEmptyLines: true });
  const matrix = parsed.data.map((row, i) =>
    row.map((cell) => toNumber(cell, `${source} row ${i + 1}`))
  );
  const dim = matrix.length;
  if (dim % 2 !== 0 || matrix.some((row) => row.length !== dim)) {
    throw new CsvFormatError(`${source}: matrix is not square 2N x 2N (${dim} rows)`);
  }
  const nModes = dim / 2;
  if (meta.n_modes !== undefined && Number(meta.n_modes) !== nModes) {
    throw new CsvFormatError(
      `${source}: header says n_modes=${meta.n_modes} but the matrix has ${dim} rows`
    );
  }
  return { meta, matrix, nModes };
}

export function parseVlfCsv(text: string, source = "sweep CSV"): VlfData {
  const { meta, body } = splitMeta(text);
  if (body === "") throw new CsvFormatError(`${source}: no data rows`);
  const parsed = Papa.parse<Record<string, string>>(body, {
    header: true,
    skipEmptyLines: true,
  });
  const fields = parsed.meta.fields ?? [];
  const missing = VLF_COLUMNS.filter((c) => !fields.includes(c));
  if (missing.length > 0) {
    throw new CsvFormatError(`${source}: missing columns ${missing.join(", ")}`);
  }
  if (parsed.data.length === 0) throw new CsvFormatError(`${source}: no witness rows`);
  const rows = parsed.data.map((r, i) => {
    const context = `${source} row ${i + 1}`;
    const verdict = r.fully_inseparable;
    if (verdict !== "true" && verdict !== "false") {
      throw new CsvFormatError(`${context}: fully_inseparable must be true/false, got ${verdict}`);
    }
    return {
      z: toNumber(r.z_mm, context),
      set: r.set,
      modeA: toNumber(r.mode_a, context),
      modeB: toNumber(r.mode_b, context),
      value: toNumber(r.value, context),
      valueLossless: toNumber(r.value_lossless, context),
      fullyInseparable: verdict === "true",
    };
  });
  return { meta, rows, source };
}
