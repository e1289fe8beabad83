/** Figure renderers: (gamma, q) heatmaps, decay-length plots, chord plots. */

import { basename } from "node:path";
import { CsvError, parseCsv, requireColumns, type Table } from "./csv.js";
import { SERIES, viridis } from "./colormap.js";
import { BLACK, GREY, Raster, type Color, fmtTick, niceTicks, scaleLinear } from "./raster.js";

export type FigureKind = "heatmap" | "decay" | "chord";

export interface FigureSpec {
  inputs: string[];
  kind: FigureKind;
  out: string;
  xLabel?: string;
  yLabel?: string;
}

const W = 900;
const H = 640;
const MARGIN = { left: 90, right: 140, top: 40, bottom: 70 };

function gammaC(mu: number): number {
  return Math.abs(mu) <= 1 ? 4 * Math.sqrt(1 - mu * mu) : 0;
}

interface Frame {
  r: Raster;
  px: (v: number) => number;
  py: (v: number) => number;
}

function frame(
  r: Raster,
  x0: number,
  x1: number,
  y0: number,
  y1: number,
  xLabel: string,
  yLabel: string,
  logX = false,
  logY = false,
): Frame {
  const L = MARGIN.left;
  const R = W - MARGIN.right;
  const T = MARGIN.top;
  const B = H - MARGIN.bottom;
  const fx = scaleLinear(x0, x1, L, R);
  const fy = scaleLinear(y0, y1, B, T);
  r.line(L, B, R, B, BLACK);
  r.line(L, T, L, B, BLACK);
  r.line(R, T, R, B, BLACK);
  r.line(L, T, R, T, BLACK);
  const xticks = logX
    ? niceTicks(x0, x1, 6).filter((v) => Number.isInteger(v))
    : niceTicks(x0, x1, 6);
  for (const v of xticks) {
    const px = fx(v);
    r.line(px, B, px, B + 5, BLACK);
    const label = logX ? `10^${fmtTick(v)}` : fmtTick(v);
    r.text(px - r.textWidth(label) / 2, B + 10, label, BLACK);
  }
  const yticks = logY
    ? niceTicks(y0, y1, 6).filter((v) => Number.isInteger(v))
    : niceTicks(y0, y1, 6);
  for (const v of yticks) {
    const py = fy(v);
    r.line(L - 5, py, L, py, BLACK);
    const label = logY ? `10^${fmtTick(v)}` : fmtTick(v);
    r.text(L - 10 - r.textWidth(label), py - 7, label, BLACK);
  }
  r.text((L + R) / 2 - r.textWidth(xLabel) / 2, H - 24, xLabel, BLACK);
  r.text(8, T - 24 < 8 ? 8 : T - 24, yLabel, BLACK);
  return { r, px: fx, py: fy };
}

function uniqueSorted(values: number[]): number[] {
  return [...new Set(values.map((v) => Math.round(v * 1e9) / 1e9))].sort((a, b) => a - b);
}

export function renderHeatmap(tables: Table[]): Raster {
  const table = tables[0];
  let values: number[];
  let title: string;
  let gcol: number[];
  let qcol: number[];
  if (table.columns.has("xi_up")) {
    const [g, q, xiUp] = requireColumns(table, ["gamma", "q", "xi_up"]);
    values = xiUp.map((v) => (Number.isFinite(v) && v > 0 ? 1 / v : v === Infinity ? 0 : NaN));
    title = "1/xi up";
    gcol = g;
    qcol = q;
  } else if (table.columns.has("gap")) {
    const [g, q, gap] = requireColumns(table, ["gamma", "q", "gap"]);
    values = gap.map((v) => Math.pow(Math.max(v, 0), 0.25));
    title = "gap^(1/4)";
    gcol = g;
    qcol = q;
  } else {
    throw new CsvError(`${table.path}: missing column "xi_up" (or "gap") for a heatmap`);
  }
  const [muCol] = requireColumns(table, ["mu"]);
  const gammas = uniqueSorted(gcol);
  const qs = uniqueSorted(qcol);
  if (gammas.length < 2 || qs.length < 2) {
    throw new CsvError(`${table.path}: heatmap needs at least a 2x2 (gamma, q) grid`);
  }
  if (gammas.length * qs.length !== table.nRows) {
    throw new CsvError(
      `${table.path}: ragged grid: ${table.nRows} rows != ` +
        `${gammas.length} gammas x ${qs.length} qs`,
    );
  }
  const index = new Map<string, number>();
  for (let i = 0; i < table.nRows; i++) {
    index.set(`${Math.round(gcol[i] * 1e9)}:${Math.round(qcol[i] * 1e9)}`, values[i]);
  }
  if (index.size !== table.nRows) {
    throw new CsvError(`${table.path}: ragged grid: duplicate (gamma, q) points`);
  }
  const r = new Raster(W, H);
  const dg = (gammas[gammas.length - 1] - gammas[0]) / (gammas.length - 1);
  const dq = (qs[qs.length - 1] - qs[0]) / (qs.length - 1);
  const f = frame(
    r,
    gammas[0] - dg / 2,
    gammas[gammas.length - 1] + dg / 2,
    qs[0] - dq / 2,
    qs[qs.length - 1] + dq / 2,
    "gamma",
    "q",
  );
  const vmax = Math.max(...values.filter((v) => Number.isFinite(v)), 1e-300);
  for (const g of gammas) {
    for (const q of qs) {
      const v = index.get(`${Math.round(g * 1e9)}:${Math.round(q * 1e9)}`);
      if (v === undefined || !Number.isFinite(v)) continue;
      const x0 = f.px(g - dg / 2);
      const x1 = f.px(g + dg / 2);
      const y1 = f.py(q - dq / 2);
      const y0 = f.py(q + dq / 2);
      r.fillRect(x0, y0, x1 - x0 + 1, y1 - y0 + 1, viridis(v / vmax));
    }
  }
  const gc = gammaC(muCol[0]);
  if (gc > gammas[0] && gc < gammas[gammas.length - 1]) {
    r.line(f.px(gc), f.py(qs[0] - dq / 2), f.px(gc), f.py(qs[qs.length - 1] + dq / 2), BLACK, 6);
    r.text(f.px(gc) + 6, MARGIN.top + 6, "gamma c", BLACK);
  }
  // colorbar
  const cbX = W - MARGIN.right + 30;
  for (let y = MARGIN.top; y < H - MARGIN.bottom; y++) {
    const t = 1 - (y - MARGIN.top) / (H - MARGIN.bottom - MARGIN.top);
    r.fillRect(cbX, y, 20, 1, viridis(t));
  }
  r.text(cbX, H - MARGIN.bottom + 10, "0", BLACK);
  r.text(cbX, MARGIN.top - 20, fmtTick(vmax), BLACK);
  r.text(cbX - 10, 8, title, BLACK);
  return r;
}

export function renderDecay(tables: Table[]): Raster {
  const table = tables[0];
  const [q, xiUp, xiFit] = requireColumns(table, ["q", "xi_up", "xi_fit"]);
  const pts = q
    .map((qi, i) => ({
      x: 1 - qi,
      up: xiUp[i],
      fit: xiFit[i],
    }))
    .filter((p) => p.x > 0 && Number.isFinite(p.up))
    .sort((a, b) => a.x - b.x);
  if (pts.length === 0) {
    throw new CsvError(`${table.path}: no finite (1-q, xi) points to plot`);
  }
  const lx = (v: number) => Math.log10(v);
  const xs = pts.map((p) => lx(p.x));
  const ysAll = pts.flatMap((p) =>
    [p.up, p.fit].filter((v) => Number.isFinite(v) && v > 0).map(lx),
  );
  const r = new Raster(W, H);
  const f = frame(
    r,
    Math.min(...xs),
    Math.max(...xs),
    Math.min(...ysAll),
    Math.max(...ysAll),
    "1-q",
    "xi",
    true,
    true,
  );
  let prev: [number, number] | null = null;
  for (const p of pts) {
    const px = f.px(lx(p.x));
    if (Number.isFinite(p.up) && p.up > 0) {
      const py = f.py(lx(p.up));
      if (prev) r.line(prev[0], prev[1], px, py, SERIES[0]);
      prev = [px, py];
    }
    if (Number.isFinite(p.fit) && p.fit > 0) r.marker(px, f.py(lx(p.fit)), SERIES[1], 3);
  }
  r.text(W - MARGIN.right - 160, MARGIN.top + 8, "xi up", SERIES[0]);
  r.text(W - MARGIN.right - 160, MARGIN.top + 28, "xi fit", SERIES[1]);
  return r;
}

export function renderChord(tables: Table[]): Raster {
  const series = tables.map((t) => {
    const [chord, negv] = requireColumns(t, ["chord", "negativity"]);
    const pts = chord
      .map((c, i) => ({ x: c, y: negv[i] }))
      .filter((p) => p.x > 0 && Number.isFinite(p.y))
      .sort((a, b) => a.x - b.x);
    if (pts.length === 0) throw new CsvError(`${t.path}: no positive chord points`);
    const label = t.config.get("q") !== undefined ? `q=${t.config.get("q")}` : basename(t.path);
    return { pts, label };
  });
  const allX = series.flatMap((s) => s.pts.map((p) => Math.log10(p.x)));
  const allY = series.flatMap((s) => s.pts.map((p) => p.y));
  const r = new Raster(W, H);
  const f = frame(
    r,
    Math.min(...allX),
    Math.max(...allX),
    Math.min(0, ...allY),
    Math.max(...allY) * 1.05,
    "chord",
    "N",
    true,
    false,
  );
  series.forEach((s, si) => {
    const color: Color = SERIES[si % SERIES.length];
    let prev: [number, number] | null = null;
    for (const p of s.pts) {
      const px = f.px(Math.log10(p.x));
      const py = f.py(p.y);
      r.marker(px, py, color, 3);
      if (prev) r.line(prev[0], prev[1], px, py, color);
      prev = [px, py];
    }
    r.text(W - MARGIN.right + 10, MARGIN.top + 10 + 22 * si, s.label, color);
  });
  return r;
}

export function renderFigure(spec: FigureSpec, texts: string[]): Raster {
  const tables = texts.map((t, i) => parseCsv(t, spec.inputs[i]));
  if (tables.length === 0) throw new CsvError("no input CSV given");
  switch (spec.kind) {
    case "heatmap":
      return renderHeatmap(tables);
    case "decay":
      return renderDecay(tables);
    case "chord":
      return renderChord(tables);
    default:
      throw new CsvError(`unknown figure kind ${JSON.stringify(spec.kind)}`);
  }
}

export { GREY };
