import { mkdtempSync, existsSync, readFileSync, writeFileSync } from "node:fs";
import { tmpdir } from "node:os";
import { join } from "node:path";
import { describe, expect, it } from "vitest";
import { main, parseArgs } from "../src/cli.js";
import { renderFigure } from "../src/figures.js";

function gapCsv(): string {
  const lines = ["# config: command=gap mu=0.4", "mu,gamma,q,L,gap"];
  for (const g of [1, 2, 3, 4, 5]) {
    for (const q of [0, 0.5, 1]) {
      lines.push(`0.4,${g},${q},8,${(1 - q) * 0.3 + 0.01 * g}`);
    }
  }
  return lines.join("\n") + "\n";
}

function xiCsv(): string {
  const lines = ["# config: command=xi mu=0.4", "mu,gamma,q,L,xi_up,xi_fit,alpha,r2"];
  for (const g of [1, 2, 3]) {
    for (const q of [0.5, 0.9, 1]) {
      const xi = q === 1 ? "inf" : String(1 / (1 - q));
      lines.push(`0.4,${g},${q},2048,${xi},${q === 1 ? "nan" : 0.9 / (1 - q)},0.5,0.99`);
    }
  }
  return lines.join("\n") + "\n";
}

function negCsv(q: number): string {
  const lines = [`# config: command=negativity q=${q}`, "ell,chord,negativity"];
  for (const ell of [1, 2, 4, 8, 16]) {
    const chord = (32 / Math.PI) * Math.sin((Math.PI * ell) / 32);
    lines.push(`${ell},${chord},${0.25 * Math.log(chord) * q + 0.3}`);
  }
  return lines.join("\n") + "\n";
}

const PNG_SIG = [0x89, 0x50, 0x4e, 0x47];

describe("renderFigure", () => {
  it("renders a gap heatmap with the transform applied", () => {
    const r = renderFigure({ inputs: ["g.csv"], kind: "heatmap", out: "x" }, [gapCsv()]);
    expect(r.width).toBeGreaterThan(100);
  });

  it("renders an xi heatmap with inf as criticality", () => {
    const r = renderFigure({ inputs: ["x.csv"], kind: "heatmap", out: "x" }, [xiCsv()]);
    expect(r.height).toBeGreaterThan(100);
  });

  it("rejects ragged heatmap grids by name", () => {
    const bad = gapCsv().trimEnd().split("\n").slice(0, -1).join("\n") + "\n";
    expect(() =>
      renderFigure({ inputs: ["g.csv"], kind: "heatmap", out: "x" }, [bad]),
    ).toThrow(/ragged grid/);
  });

  it("renders decay and chord plots", () => {
    renderFigure({ inputs: ["x.csv"], kind: "decay", out: "x" }, [xiCsv()]);
    renderFigure({ inputs: ["a", "b"], kind: "chord", out: "x" }, [negCsv(1), negCsv(0.5)]);
  });

  it("names a deleted column", () => {
    const noXiUp = xiCsv().replace("xi_up", "who_knows");
    expect(() =>
      renderFigure({ inputs: ["x.csv"], kind: "decay", out: "x" }, [noXiUp]),
    ).toThrow(/missing column "xi_up"/);
  });
});

describe("cli", () => {
  it("parses arguments", () => {
    const spec = parseArgs(["--in", "a.csv,b.csv", "--kind", "chord", "--out", "o.png"]);
    expect(spec.inputs).toEqual(["a.csv", "b.csv"]);
    expect(spec.kind).toBe("chord");
  });

  it("rejects unknown kinds and missing flags", () => {
    expect(() => parseArgs(["--kind", "pie"])).toThrow();
    expect(() => parseArgs(["--in", "x"])).toThrow(/--kind/);
  });

  it("writes a PNG end to end and overwrites idempotently", () => {
    const dir = mkdtempSync(join(tmpdir(), "ppk-"));
    const csv = join(dir, "gap.csv");
    const out = join(dir, "gap.png");
    writeFileSync(csv, gapCsv());
    expect(main(["--in", csv, "--kind", "heatmap", "--out", out])).toBe(0);
    const first = readFileSync(out);
    expect([...first.subarray(0, 4)]).toEqual(PNG_SIG);
    expect(main(["--in", csv, "--kind", "heatmap", "--out", out])).toBe(0);
    expect([...readFileSync(out).subarray(0, 4)]).toEqual(PNG_SIG);
  });

  it("fails cleanly on an empty CSV without creating the output", () => {
    const dir = mkdtempSync(join(tmpdir(), "ppk-"));
    const csv = join(dir, "empty.csv");
    const out = join(dir, "never.png");
    writeFileSync(csv, "");
    expect(main(["--in", csv, "--kind", "heatmap", "--out", out])).toBe(1);
    expect(existsSync(out)).toBe(false);
  });
});
