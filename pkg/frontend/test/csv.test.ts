import { readFileSync } from "node:fs";
import { join } from "node:path";
import { describe, expect, it } from "vitest";
import { CSV_HEADER, CsvError, parseResultCsv } from "../src/csv.js";

const FIXTURES = join(__dirname, "..", "fixtures");

describe("result csv parser", () => {
  it("parses the committed sweep", () => {
    const rows = parseResultCsv(readFileSync(join(FIXTURES, "p_sweep.csv"), "utf-8"));
    expect(rows).toHaveLength(11);
    expect(rows[0].channel).toBe("bit_flip");
    expect(rows.map((r) => r.sweepValue)).toEqual(
      [0, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1]);
    const half = rows.find((r) => r.sweepValue === 0.5)!;
    expect(half.experiment).toContain("singular");
    expect(Math.abs(half.nFinal)).toBeLessThan(0.05);
  });

  it("parses the committed table", () => {
    const rows = parseResultCsv(readFileSync(join(FIXTURES, "topology_table.csv"), "utf-8"));
    expect(rows.map((r) => r.sweepValue)).toEqual([-3, -2, -1, 1, 2, 3]);
    for (const r of rows) {
      expect(Math.abs(r.nFinal - r.nInitial)).toBeLessThan(0.3);
    }
  });

  it("rejects empty input", () => {
    expect(() => parseResultCsv("")).toThrowError(CsvError);
    expect(() => parseResultCsv(CSV_HEADER + "\n")).toThrowError(/no data rows/);
  });

  it("reports line numbers for malformed rows", () => {
    const text = CSV_HEADER + "\nsweep,bf,0.1,1,0,1.0,1.0,1.0,0\nbad,row\n";
    expect(() => parseResultCsv(text)).toThrowError(/line 3: expected 9 columns/);
    const nonNum = CSV_HEADER + "\nsweep,bf,zap,1,0,1.0,1.0,1.0,0\n";
    expect(() => parseResultCsv(nonNum)).toThrowError(/line 2: bad numeric/);
  });
});
