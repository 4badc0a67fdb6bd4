/**
 * Strict parsing for the experiment CSV artifacts.
 *
 * The harness writes plain comma-separated text with a header row and no
 * quoting, so a split-based parser is exact. Every reader validates that the
 * columns it needs exist and that the file is non-empty; malformed or empty
 * input is a hard error (no figure should be emitted from it).
 */

import { readFileSync } from "node:fs";

export interface CsvTable {
  header: string[];
  rows: string[][];
}

export function parseCsv(text: string): CsvTable {
  const lines = text.split(/\r?\n/).filter((line) => line.length > 0);
  if (lines.length === 0) {
    throw new Error("CSV input is empty");
  }
  const header = lines[0].split(",");
  const rows = lines.slice(1).map((line, i) => {
    const cells = line.split(",");
    if (cells.length !== header.length) {
      throw new Error(
        `CSV row ${i + 2} has ${cells.length} cells, header has ${header.length}`,
      );
    }
    return cells;
  });
  if (rows.length === 0) {
    throw new Error("CSV has a header but no data rows");
  }
  return { header, rows };
}

function columnIndex(table: CsvTable, name: string): number {
  const idx = table.header.indexOf(name);
  if (idx < 0) {
    throw new Error(`CSV is missing required column '${name}' (header: ${table.header.join(",")})`);
  }
  return idx;
}

function toNumber(cell: string, column: string): number {
  const value = Number(cell);
  if (Number.isNaN(value)) {
    throw new Error(`CSV cell '${cell}' in column '${column}' is not a number`);
  }
  return value;
}

/** One estimate row: a coordinate of the parameter vector at a checkpoint. */
export interface CheckpointRow {
  n: number;
  coordIndex: number;
  ls: number;
  modified: number;
  sparse: number;
  inSupportZero: boolean;
  truth?: number;
}

export function readCheckpointCsv(path: string): CheckpointRow[] {
  const table = parseCsv(readFileSync(path, "utf8"));
  const col = {
    n: columnIndex(table, "N"),
    coord: columnIndex(table, "coord_index"),
    ls: columnIndex(table, "ls"),
    modified: columnIndex(table, "modified"),
    sparse: columnIndex(table, "sparse"),
    zero: columnIndex(table, "in_support_zero"),
  };
  const truthIdx = table.header.indexOf("truth");
  return table.rows.map((cells) => {
    const row: CheckpointRow = {
      n: toNumber(cells[col.n], "N"),
      coordIndex: toNumber(cells[col.coord], "coord_index"),
      ls: toNumber(cells[col.ls], "ls"),
      modified: toNumber(cells[col.modified], "modified"),
      sparse: toNumber(cells[col.sparse], "sparse"),
      inSupportZero: cells[col.zero] === "1",
    };
    if (truthIdx >= 0) {
      row.truth = toNumber(cells[truthIdx], "truth");
    }
    return row;
  });
}

/** One step of a closed-loop run trace. */
export interface RunRow {
  k: number;
  y: number;
  yStar: number;
  u0: number;
  u: number;
  ditherScale: number;
  trackingLoss: number;
}

export function readRunCsv(path: string): RunRow[] {
  const table = parseCsv(readFileSync(path, "utf8"));
  const col = {
    k: columnIndex(table, "k"),
    y: columnIndex(table, "y"),
    yStar: columnIndex(table, "y_star"),
    u0: columnIndex(table, "u0"),
    u: columnIndex(table, "u"),
    dither: columnIndex(table, "dither_scale"),
    loss: columnIndex(table, "tracking_loss"),
  };
  return table.rows.map((cells) => ({
    k: toNumber(cells[col.k], "k"),
    y: toNumber(cells[col.y], "y"),
    yStar: toNumber(cells[col.yStar], "y_star"),
    u0: toNumber(cells[col.u0], "u0"),
    u: toNumber(cells[col.u], "u"),
    ditherScale: toNumber(cells[col.dither], "dither_scale"),
    trackingLoss: toNumber(cells[col.loss], "tracking_loss"),
  }));
}
