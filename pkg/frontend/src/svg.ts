/** Minimal deterministic SVG assembly: fixed number formatting, no state. */

export function fmt(v: number): string {
  if (!Number.isFinite(v)) return "0";
  const s = v.toFixed(3);
  return s === "-0.000" ? "0.000" : s;
}

export interface Scale {
  (v: number): number;
  domain: [number, number];
}

export function linearScale(domain: [number, number], range: [number, number]): Scale {
  const [d0, d1] = domain;
  const [r0, r1] = range;
  const span = d1 - d0 || 1;
  const f = ((v: number) => r0 + ((v - d0) / span) * (r1 - r0)) as Scale;
  f.domain = domain;
  return f;
}

export function el(tag: string, attrs: Record<string, string | number>, body = ""): string {
  const parts = Object.entries(attrs)
    .map(([k, v]) => `${k}="${typeof v === "number" ? fmt(v) : v}"`)
    .join(" ");
  return body === "" ? `<${tag} ${parts}/>` : `<${tag} ${parts}>${body}</${tag}>`;
}

export function svgDocument(width: number, height: number, body: string[]): string {
  return [
    `<svg xmlns="http://www.w3.org/2000/svg" width="${width}" height="${height}" viewBox="0 0 ${width} ${height}">`,
    `<rect width="${width}" height="${height}" fill="white"/>`,
    ...body,
    "</svg>",
    "",
  ].join("\n");
}

export function axis(
  x: Scale,
  y: Scale,
  xLabel: string,
  yLabel: string,
  xTicks: number[],
  yTicks: number[],
): string[] {
  const [x0, x1] = [x(x.domain[0]), x(x.domain[1])];
  const [y0, y1] = [y(y.domain[0]), y(y.domain[1])];
  const out: string[] = [
    el("line", { x1: x0, y1: y0, x2: x1, y2: y0, stroke: "black", "stroke-width": 1 }),
    el("line", { x1: x0, y1: y0, x2: x0, y2: y1, stroke: "black", "stroke-width": 1 }),
  ];
  for (const t of xTicks) {
    out.push(el("line", { x1: x(t), y1: y0, x2: x(t), y2: y0 + 4, stroke: "black" }));
    out.push(el("text", { x: x(t), y: y0 + 16, "font-size": 10, "text-anchor": "middle" }, fmt(t)));
  }
  for (const t of yTicks) {
    out.push(el("line", { x1: x0 - 4, y1: y(t), x2: x0, y2: y(t), stroke: "black" }));
    out.push(el("text", { x: x0 - 6, y: y(t) + 3, "font-size": 10, "text-anchor": "end" }, fmt(t)));
  }
  out.push(el("text", { x: (x0 + x1) / 2, y: y0 + 30, "font-size": 11, "text-anchor": "middle" }, xLabel));
  out.push(el("text", {
    x: x0 - 34, y: (y0 + y1) / 2, "font-size": 11, "text-anchor": "middle",
    transform: `rotate(-90 ${fmt(x0 - 34)} ${fmt((y0 + y1) / 2)})`,
  }, yLabel));
  return out;
}

/** Hue-based ROI color keyed by plane azimuth and radius. */
export function roiColor(azimuth: number, radiusFrac: number): string {
  const hue = ((azimuth * 180) / Math.PI + 360) % 360;
  const light = 35 + 40 * Math.min(1, Math.max(0, radiusFrac));
  return `hsl(${hue.toFixed(1)},85%,${light.toFixed(1)}%)`;
}

/** Symmetric diverging color for signed densities, v in [-1, 1]. */
export function divergingColor(v: number): string {
  const t = Math.max(-1, Math.min(1, v));
  const r = t > 0 ? 255 : Math.round(255 * (1 + t));
  const b = t < 0 ? 255 : Math.round(255 * (1 - t));
  const g = Math.round(255 * (1 - Math.abs(t)));
  return `rgb(${r},${g},${b})`;
}
