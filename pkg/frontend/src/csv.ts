/** Harness result CSV: fixed nine-column schema. */

export interface ResultRow {
  experiment: string;
  channel: string;
  sweepValue: number;
  l1: number;
  l2: number;
  nInitial: number;
  nFinal: number;
  validFraction: number;
  wallTimeS: number;
}

export const CSV_HEADER =
  "experiment,channel,sweep_value,l1,l2,n_initial,n_final,valid_fraction,wall_time_s";

export class CsvError extends Error {
  constructor(message: string, public readonly line: number) {
    super(`line ${line}: ${message}`);
    this.name = "CsvError";
  }
}

function num(raw: string, line: number, column: string): number {
  if (raw === "nan") return NaN;
  const v = Number(raw);
  if (raw === "" || Number.isNaN(v)) {
    throw new CsvError(`bad numeric value ${JSON.stringify(raw)} in ${column}`, line);
  }
  return v;
}

export function parseResultCsv(text: string): ResultRow[] {
  const lines = text.split(/\r?\n/).filter((l, idx) => l.length > 0 || idx === 0);
  if (lines.length === 0 || lines[0].trim() === "") {
    throw new CsvError("empty file", 1);
  }
  if (lines[0] !== CSV_HEADER) {
    throw new CsvError(`unexpected header ${JSON.stringify(lines[0])}`, 1);
  }
  const rows: ResultRow[] = [];
  for (let k = 1; k < lines.length; k++) {
    const parts = lines[k].split(",");
    if (parts.length !== 9) {
      throw new CsvError(`expected 9 columns, found ${parts.length}`, k + 1);
    }
    rows.push({
      experiment: parts[0],
      channel: parts[1],
      sweepValue: num(parts[2], k + 1, "sweep_value"),
      l1: num(parts[3], k + 1, "l1"),
      l2: num(parts[4], k + 1, "l2"),
      nInitial: num(parts[5], k + 1, "n_initial"),
      nFinal: num(parts[6], k + 1, "n_final"),
      validFraction: num(parts[7], k + 1, "valid_fraction"),
      wallTimeS: num(parts[8], k + 1, "wall_time_s"),
    });
  }
  if (rows.length === 0) {
    throw new CsvError("no data rows", 2);
  }
  return rows;
}
