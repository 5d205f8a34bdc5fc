/**
 * Reader for the estimator's CSV outputs.
 *
 * The producer writes plain comma-separated numeric fields (no quoting),
 * with `nan`, `inf`, `-inf` for the IEEE specials and an empty field for
 * "not applicable". Schema problems are reported as SchemaError naming the
 * offending column so a mismatched input fails loudly rather than rendering
 * nonsense.
 */

import { readFileSync } from "fs";

export class SchemaError extends Error {
  constructor(message: string) {
    super(message);
    this.name = "SchemaError";
  }
}

export interface Table {
  columns: string[];
  /** column name -> values; empty fields are null */
  data: Map<string, Array<number | null>>;
  rowCount: number;
}

function parseField(raw: string, column: string, line: number): number | null {
  if (raw === "") return null;
  if (raw === "nan") return NaN;
  if (raw === "inf") return Infinity;
  if (raw === "-inf") return -Infinity;
  const value = Number(raw);
  if (Number.isNaN(value)) {
    throw new SchemaError(
      `column "${column}" has a non-numeric value ${JSON.stringify(raw)} on line ${line}`,
    );
  }
  return value;
}

export function parseCsv(text: string, source = "<string>"): Table {
  const lines = text.split(/\r?\n/).filter((line) => line.length > 0);
  if (lines.length === 0) {
    throw new SchemaError(`${source}: empty file`);
  }
  const columns = lines[0].split(",");
  const data = new Map<string, Array<number | null>>(
    columns.map((column) => [column, []]),
  );
  for (let i = 1; i < lines.length; i++) {
    const fields = lines[i].split(",");
    if (fields.length !== columns.length) {
      throw new SchemaError(
        `${source}: line ${i + 1} has ${fields.length} fields, header has ${columns.length}`,
      );
    }
    fields.forEach((field, j) => {
      data.get(columns[j])!.push(parseField(field, columns[j], i + 1));
    });
  }
  const rowCount = lines.length - 1;
  if (rowCount === 0) {
    throw new SchemaError(`${source}: no data rows`);
  }
  return { columns, data, rowCount };
}

export function readCsv(path: string): Table {
  return parseCsv(readFileSync(path, "utf8"), path);
}

/** Column values, requiring presence; nulls allowed. */
export function column(table: Table, name: string): Array<number | null> {
  const values = table.data.get(name);
  if (values === undefined) {
    throw new SchemaError(
      `missing column "${name}" (have: ${table.columns.join(", ")})`,
    );
  }
  return values;
}

/** Column values where every entry must be a finite-or-special number. */
export function numericColumn(table: Table, name: string): number[] {
  return column(table, name).map((value, i) => {
    if (value === null) {
      throw new SchemaError(`column "${name}" has an empty value in row ${i + 1}`);
    }
    return value;
  });
}
