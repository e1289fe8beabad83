/** CSV -> PNG figure renderer for ppkitaev output files.
 *
 *   node dist/cli.js --in fig2.csv --kind heatmap --out fig2.png
 *   node dist/cli.js --in a.csv,b.csv --kind chord --out fig4.png
 *
 * Exit codes: 0 rendered, 1 bad arguments or bad input (named error).
 */

import { readFileSync, writeFileSync } from "node:fs";
import { CsvError } from "./csv.js";
import { renderFigure, type FigureKind, type FigureSpec } from "./figures.js";
import { encodePng } from "./png.js";

export function parseArgs(argv: string[]): FigureSpec {
  let inputs: string[] | null = null;
  let kind: string | null = null;
  let out: string | null = null;
  for (let i = 0; i < argv.length; i++) {
    const a = argv[i];
    const next = () => {
      if (i + 1 >= argv.length) throw new CsvError(`missing value after ${a}`);
      return argv[++i];
    };
    if (a === "--in") inputs = next().split(",").map((s) => s.trim()).filter(Boolean);
    else if (a === "--kind") kind = next();
    else if (a === "--out") out = next();
    else throw new CsvError(`unknown argument ${JSON.stringify(a)}`);
  }
  if (!inputs || inputs.length === 0) throw new CsvError("--in is required");
  if (!kind) throw new CsvError("--kind is required (heatmap | decay | chord)");
  if (!out) throw new CsvError("--out is required");
  if (!["heatmap", "decay", "chord"].includes(kind)) {
    throw new CsvError(`unknown figure kind ${JSON.stringify(kind)}`);
  }
  return { inputs, kind: kind as FigureKind, out };
}

export function main(argv: string[]): number {
  try {
    const spec = parseArgs(argv);
    const texts = spec.inputs.map((p) => readFileSync(p, "utf8"));
    const raster = renderFigure(spec, texts);
    // render fully before touching the output: a failure leaves no partial file
    writeFileSync(spec.out, encodePng(raster.width, raster.height, raster.data));
    return 0;
  } catch (err) {
    const msg = err instanceof Error ? err.message : String(err);
    process.stderr.write(`error: ${msg}\n`);
    return 1;
  }
}

if (import.meta.url === `file://${process.argv[1]}`) {
  process.exit(main(process.argv.slice(2)));
}
