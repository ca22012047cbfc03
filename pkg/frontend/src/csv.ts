// CSV reading for leecodes outputs: '#' comment lines, then a header row.

export interface CsvTable {
  columns: string[];
  rows: Record<string, string>[];
}

export function parseCsv(text: string): CsvTable {
  const lines = text
    .split(/\r?\n/)
    .filter((ln) => ln.trim().length > 0 && !ln.startsWith("#"));
  if (lines.length === 0) {
    throw new Error("empty CSV: no header row");
  }
  const columns = lines[0].split(",").map((c) => c.trim());
  const rows = lines.slice(1).map((ln) => {
    const cells = ln.split(",");
    const row: Record<string, string> = {};
    columns.forEach((c, i) => {
      row[c] = (cells[i] ?? "").trim();
    });
    return row;
  });
  return { columns, rows };
}

export function requireColumns(table: CsvTable, needed: string[], what: string): void {
  const missing = needed.filter((c) => !table.columns.includes(c));
  if (missing.length > 0) {
    throw new Error(`${what}: missing columns ${missing.join(", ")}`);
  }
}

export function num(row: Record<string, string>, col: string): number {
  const v = Number(row[col]);
  if (Number.isNaN(v)) {
    throw new Error(`non-numeric value '${row[col]}' in column ${col}`);
  }
  return v;
}
