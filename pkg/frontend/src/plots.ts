/** The four plot kinds: winding-vs-noise curves, before/after bars,
 * Poincare-sphere coverage scatter, and winding-density heatmaps. */

import { ResultRow } from "./csv.js";
import { SkgfFile, pixelCoords } from "./skgf.js";
import { axis, divergingColor, el, fmt, linearScale, roiColor, svgDocument } from "./svg.js";

const W = 640;
const H = 480;
const MARGIN = { left: 60, right: 20, top: 30, bottom: 50 };

export const SPHERE_POINT_BUDGET = 20000;

function frame() {
  return {
    x: [MARGIN.left, W - MARGIN.right] as [number, number],
    y: [H - MARGIN.bottom, MARGIN.top] as [number, number],
  };
}

function ticks(lo: number, hi: number, n: number): number[] {
  const out: number[] = [];
  for (let k = 0; k <= n; k++) out.push(lo + ((hi - lo) * k) / n);
  return out;
}

export function pSweepPlot(rows: ResultRow[], title = "winding number vs noise strength"): string {
  const pts = rows
    .filter((r) => Number.isFinite(r.sweepValue))
    .sort((a, b) => a.sweepValue - b.sweepValue);
  const f = frame();
  const ns = pts.map((r) => r.nFinal);
  const lo = Math.min(0, ...ns) - 0.1;
  const hi = Math.max(1, ...ns) + 0.1;
  const sx = linearScale([Math.min(...pts.map((r) => r.sweepValue)),
                          Math.max(...pts.map((r) => r.sweepValue))], f.x);
  const sy = linearScale([lo, hi], f.y);
  const body = axis(sx, sy, "noise parameter p", "winding number N",
                    ticks(sx.domain[0], sx.domain[1], 5), ticks(lo, hi, 5));
  const path = pts.map((r, i) => `${i === 0 ? "M" : "L"}${fmt(sx(r.sweepValue))},${fmt(sy(r.nFinal))}`).join(" ");
  body.push(el("path", { d: path, fill: "none", stroke: "#1f4e9c", "stroke-width": 1.5 }));
  for (const r of pts) {
    const singular = r.experiment.includes("singular");
    body.push(el("circle", {
      cx: sx(r.sweepValue), cy: sy(r.nFinal), r: singular ? 4 : 2.5,
      fill: singular ? "#c0392b" : "#1f4e9c",
    }));
  }
  body.push(el("text", { x: W / 2, y: 16, "font-size": 13, "text-anchor": "middle" }, title));
  return svgDocument(W, H, body);
}

export function topologyBars(rows: ResultRow[], title = "winding number before/after channel"): string {
  const f = frame();
  const targets = rows.map((r) => r.sweepValue);
  const all = rows.flatMap((r) => [r.nInitial, r.nFinal, r.sweepValue]);
  const lo = Math.min(...all) - 0.5;
  const hi = Math.max(...all) + 0.5;
  const sy = linearScale([lo, hi], f.y);
  const sx = linearScale([-0.5, rows.length - 0.5], f.x);
  const body = axis(sx, sy, "target winding", "winding number N",
                    [], ticks(Math.ceil(lo), Math.floor(hi), Math.floor(hi) - Math.ceil(lo)));
  const y0 = sy(0);
  const band = (sx(1) - sx(0)) || 40;
  rows.forEach((r, i) => {
    const cx = sx(i);
    for (const [offset, value, fill] of [[-0.22, r.nInitial, "#5b8ff9"],
                                         [0.02, r.nFinal, "#e8684a"]] as const) {
      const top = Math.min(sy(value), y0);
      body.push(el("rect", {
        x: cx + offset * band, y: top, width: 0.2 * band,
        height: Math.abs(sy(value) - y0), fill,
      }));
    }
    body.push(el("line", {
      x1: cx - 0.3 * band, y1: sy(r.sweepValue), x2: cx + 0.3 * band,
      y2: sy(r.sweepValue), stroke: "black", "stroke-dasharray": "3,2",
    }));
    body.push(el("text", { x: cx, y: y0 + 16, "font-size": 10, "text-anchor": "middle" },
                 String(r.sweepValue)));
  });
  body.push(el("line", { x1: f.x[0], y1: y0, x2: f.x[1], y2: y0, stroke: "#888", "stroke-width": 0.5 }));
  body.push(el("text", { x: W / 2, y: 16, "font-size": 13, "text-anchor": "middle" }, title));
  body.push(el("text", { x: W - 150, y: 34, "font-size": 10, fill: "#5b8ff9" }, "initial"));
  body.push(el("text", { x: W - 100, y: 34, "font-size": 10, fill: "#e8684a" }, "final"));
  return svgDocument(W, H, body);
}

/** Deterministic subsample: fixed-seed LCG over the pixel index space. */
export function strideSample(total: number, budget: number, seed: number): number[] {
  if (total <= budget) {
    return Array.from({ length: total }, (_, k) => k);
  }
  let state = (seed >>> 0) || 1;
  const next = () => {
    state = (Math.imul(state, 1664525) + 1013904223) >>> 0;
    return state / 2 ** 32;
  };
  const out: number[] = [];
  const stride = total / budget;
  for (let k = 0; k < budget; k++) {
    out.push(Math.min(total - 1, Math.floor(k * stride + next() * stride)));
  }
  return out;
}

/**
 * Orthographic Poincare-sphere scatter of unit Stokes directions,
 * color-coded by the source pixel's plane azimuth/radius so regions of
 * the plane can be traced onto the sphere.  Expects the 5-component
 * SKGF layout (ux, uy, uz, mask, density).
 */
export function sphereCoverage(file: SkgfFile, seed = 12345,
                               title = "Poincare sphere coverage"): string {
  if (file.components.length < 4) {
    throw new Error(`sphere plot needs >= 4 components, found ${file.components.length}`);
  }
  const [ux, uy, uz, mask] = file.components;
  const cx = W / 2;
  const cy = H / 2 + 10;
  const R = 190;
  const body: string[] = [
    el("circle", { cx, cy, r: R, fill: "none", stroke: "#999", "stroke-width": 1 }),
  ];
  const lit: number[] = [];
  for (let k = 0; k < ux.length; k++) if (mask[k] > 0.5) lit.push(k);
  const chosen = strideSample(lit.length, SPHERE_POINT_BUDGET, seed);
  // simple tilted orthographic view; z up
  const tilt = 0.45;
  const ct = Math.cos(tilt);
  const stt = Math.sin(tilt);
  const pts: Array<{ x: number; y: number; depth: number; c: string }> = [];
  for (const idx of chosen) {
    const k = lit[idx];
    const i = k % file.nx;
    const j = Math.floor(k / file.nx);
    const [px, py] = pixelCoords(file, i, j);
    const az = Math.atan2(py, px);
    const rad = Math.hypot(px, py) / file.extent;
    const yv = uy[k] * ct - uz[k] * stt;
    const depth = uy[k] * stt + uz[k] * ct;
    pts.push({ x: cx + R * ux[k], y: cy - R * yv, depth, c: roiColor(az, rad) });
  }
  pts.sort((a, b) => a.depth - b.depth || a.x - b.x || a.y - b.y);
  for (const p of pts) {
    body.push(el("circle", { cx: p.x, cy: p.y, r: 1.4, fill: p.c,
                             "fill-opacity": p.depth > 0 ? "0.9" : "0.25" }));
  }
  body.push(el("text", { x: W / 2, y: 16, "font-size": 13, "text-anchor": "middle" },
               `${title} (${pts.length} points)`));
  return svgDocument(W, H, body);
}

/** Winding-density heatmap from the SKGF density component. */
export function densityHeatmap(file: SkgfFile, component = 4,
                               title = "winding density"): string {
  if (component >= file.components.length) {
    throw new Error(`component ${component} out of range (${file.components.length})`);
  }
  const dens = file.components[component];
  let peak = 0;
  for (let k = 0; k < dens.length; k++) peak = Math.max(peak, Math.abs(dens[k]));
  if (peak === 0) peak = 1;
  const side = Math.min(W - MARGIN.left - MARGIN.right, H - MARGIN.top - MARGIN.bottom);
  const cw = side / file.nx;
  const chh = side / file.ny;
  const body: string[] = [];
  for (let j = 0; j < file.ny; j++) {
    for (let i = 0; i < file.nx; i++) {
      const v = dens[j * file.nx + i] / peak;
      if (v === 0) continue;
      body.push(el("rect", {
        x: MARGIN.left + i * cw,
        y: MARGIN.top + (file.ny - 1 - j) * chh,
        width: cw + 0.05, height: chh + 0.05, fill: divergingColor(v),
      }));
    }
  }
  body.push(el("rect", {
    x: MARGIN.left, y: MARGIN.top, width: side, height: side,
    fill: "none", stroke: "#333", "stroke-width": 1,
  }));
  body.push(el("text", { x: W / 2, y: 16, "font-size": 13, "text-anchor": "middle" },
               `${title} (peak ${peak.toExponential(3)})`));
  return svgDocument(W, H, body);
}
