/** plot --kind <sphere_coverage|p_sweep|topology_bars|density_heatmap>
 *       --in <paths...> --out <file>
 */

import { readFileSync, writeFileSync } from "node:fs";
import { CsvError, parseResultCsv } from "./csv.js";
import { densityHeatmap, pSweepPlot, sphereCoverage, topologyBars } from "./plots.js";
import { SkgfError, parseSkgf } from "./skgf.js";

export const KINDS = ["sphere_coverage", "p_sweep", "topology_bars", "density_heatmap"] as const;
export type Kind = (typeof KINDS)[number];

interface Args {
  kind: Kind;
  inputs: string[];
  out: string;
  seed: number;
}

export function parseArgs(argv: string[]): Args {
  let kind: string | undefined;
  const inputs: string[] = [];
  let out: string | undefined;
  let seed = 12345;
  for (let i = 0; i < argv.length; i++) {
    const a = argv[i];
    if (a === "--kind") kind = argv[++i];
    else if (a === "--in") {
      while (i + 1 < argv.length && !argv[i + 1].startsWith("--")) inputs.push(argv[++i]);
    } else if (a === "--out") out = argv[++i];
    else if (a === "--seed") seed = Number(argv[++i]);
    else if (a === "plot") continue;
    else throw new Error(`unknown argument ${a}`);
  }
  if (!kind || !(KINDS as readonly string[]).includes(kind)) {
    throw new Error(`--kind must be one of ${KINDS.join(", ")}`);
  }
  if (inputs.length === 0) throw new Error("--in requires at least one path");
  if (!out) throw new Error("--out is required");
  return { kind: kind as Kind, inputs, out, seed };
}

export function render(args: Args): string {
  const first = args.inputs[0];
  switch (args.kind) {
    case "p_sweep":
      return pSweepPlot(parseResultCsv(readFileSync(first, "utf-8")));
    case "topology_bars":
      return topologyBars(parseResultCsv(readFileSync(first, "utf-8")));
    case "sphere_coverage":
      return sphereCoverage(parseSkgf(readFileSync(first)), args.seed);
    case "density_heatmap":
      return densityHeatmap(parseSkgf(readFileSync(first)));
  }
}

export function main(argv: string[]): number {
  let args: Args;
  try {
    args = parseArgs(argv);
  } catch (err) {
    console.error(String(err instanceof Error ? err.message : err));
    return 2;
  }
  try {
    const svg = render(args);
    writeFileSync(args.out, svg);
    console.log(`wrote ${args.out}`);
    return 0;
  } catch (err) {
    if (err instanceof CsvError || err instanceof SkgfError) {
      console.error(`${args.inputs[0]}: ${err.message}`);
    } else {
      console.error(String(err instanceof Error ? err.message : err));
    }
    return 1;
  }
}

const isMain = process.argv[1]?.endsWith("cli.js");
if (isMain) {
  process.exit(main(process.argv.slice(2)));
}
