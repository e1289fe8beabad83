/** Parse ppkitaev CSV output: '#' comment header, one header row, numeric rows. */

export interface Table {
  /** column name -> values, in file order */
  columns: Map<string, number[]>;
  /** parsed key=value pairs from the "# config:" comment line, if present */
  config: Map<string, string>;
  nRows: number;
  path: string;
}

export class CsvError extends Error {}

function parseNumber(token: string): number {
  const t = token.trim();
  if (t === "inf") return Infinity;
  if (t === "-inf") return -Infinity;
  if (t === "nan") return NaN;
  const v = Number(t);
  if (t === "" || Number.isNaN(v)) {
    throw new CsvError(`cannot parse numeric value ${JSON.stringify(token)}`);
  }
  return v;
}

export function parseCsv(text: string, path = "<string>"): Table {
  const lines = text.split(/\r?\n/);
  const config = new Map<string, string>();
  let header: string[] | null = null;
  const rows: number[][] = [];
  for (const raw of lines) {
    const line = raw.trim();
    if (line === "") continue;
    if (line.startsWith("#")) {
      const m = line.match(/^#\s*config:\s*(.*)$/);
      if (m) {
        for (const item of m[1].split(/\s+/)) {
          const eq = item.indexOf("=");
          if (eq > 0) config.set(item.slice(0, eq), item.slice(eq + 1));
        }
      }
      continue;
    }
    if (header === null) {
      header = line.split(",").map((s) => s.trim());
      continue;
    }
    const parts = line.split(",");
    if (parts.length !== header.length) {
      throw new CsvError(
        `${path}: row has ${parts.length} fields, header has ${header.length}`,
      );
    }
    rows.push(parts.map(parseNumber));
  }
  if (header === null) {
    throw new CsvError(`${path}: empty CSV (no header row)`);
  }
  const columns = new Map<string, number[]>();
  header.forEach((name, i) => columns.set(name, rows.map((r) => r[i])));
  return { columns, config, nRows: rows.length, path };
}

/** Fetch required columns, raising a named error for any that is absent. */
export function requireColumns(table: Table, names: string[]): number[][] {
  return names.map((name) => {
    const col = table.columns.get(name);
    if (col === undefined) {
      throw new CsvError(`${table.path}: missing column "${name}"`);
    }
    return col;
  });
}
