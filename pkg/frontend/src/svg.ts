/**
 * Minimal deterministic SVG plotting.
 *
 * Same inputs always produce the same bytes: fixed layout constants, a
 * fixed palette, spec-defined number-to-string conversion, and no clocks
 * or randomness anywhere. That makes figure files diffable and lets the
 * artifact determinism guarantee extend to the rendered output.
 */

export interface Extent {
  min: number;
  max: number;
}

export interface Curve {
  label: string;
  /** [x, y] pairs; callers filter out missing values beforehand. */
  points: Array<[number, number]>;
}

export interface PanelSpec {
  title?: string;
  xLabel: string;
  yLabel: string;
  xLog?: boolean;
  yLog?: boolean;
  /** Extra annotation lines drawn under the legend. */
  notes?: string[];
}

export const PANEL_WIDTH = 640;
export const PANEL_HEIGHT = 400;
const MARGIN = { left: 72, right: 20, top: 36, bottom: 52 } as const;

export const PALETTE = [
  "#1f6f8b",
  "#c1403d",
  "#3e8e41",
  "#7d5ba6",
  "#b8860b",
  "#444444",
] as const;

/** Fixed-notation screen coordinate, 2 decimals. */
function px(v: number): string {
  return v.toFixed(2);
}

/** Stable short label for a data value. */
export function fmt(v: number): string {
  if (v === 0) return "0";
  const a = Math.abs(v);
  if (a >= 1e4 || a < 1e-3) {
    return v
      .toExponential(2)
      .replace(/\.?0+e/, "e")
      .replace("e+", "e");
  }
  return Number(v.toPrecision(6)).toString();
}

function escapeText(s: string): string {
  return s
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;");
}

export function extentOfCurves(
  curves: Curve[],
  pick: (p: [number, number]) => number,
): Extent | null {
  let min = Infinity;
  let max = -Infinity;
  for (const curve of curves) {
    for (const p of curve.points) {
      const v = pick(p);
      if (v < min) min = v;
      if (v > max) max = v;
    }
  }
  if (min > max) return null;
  return { min, max };
}

function padExtent(extent: Extent, log: boolean): Extent {
  if (log) {
    // Pad multiplicatively so decade ticks stay meaningful.
    const f = Math.pow(extent.max / extent.min, 0.05) || 1;
    return { min: extent.min / f, max: extent.max * f };
  }
  let span = extent.max - extent.min;
  if (span === 0) span = extent.min === 0 ? 1 : Math.abs(extent.min) * 0.2;
  return { min: extent.min - 0.05 * span, max: extent.max + 0.05 * span };
}

export function linearTicks(extent: Extent, target = 6): number[] {
  const span = extent.max - extent.min;
  const raw = span / target;
  const mag = Math.pow(10, Math.floor(Math.log10(raw)));
  const norm = raw / mag;
  const step = mag * (norm < 1.5 ? 1 : norm < 3.5 ? 2 : norm < 7.5 ? 5 : 10);
  const ticks: number[] = [];
  let v = Math.ceil(extent.min / step) * step;
  for (; v <= extent.max + step * 1e-9; v += step) {
    // Snap to the tick lattice so labels read 0.2 rather than 0.20000000003.
    ticks.push(Number((Math.round(v / step) * step).toPrecision(12)));
  }
  return ticks;
}

export function logTicks(extent: Extent): number[] {
  const lo = Math.floor(Math.log10(extent.min));
  const hi = Math.ceil(Math.log10(extent.max));
  const ticks: number[] = [];
  for (let e = lo; e <= hi; e++) {
    for (const m of [1, 2, 5]) {
      const v = m * Math.pow(10, e);
      if (v >= extent.min * (1 - 1e-12) && v <= extent.max * (1 + 1e-12)) {
        ticks.push(v);
      }
    }
  }
  return ticks;
}

interface Scale {
  toPx(v: number): number;
  ticks(): number[];
}

function makeScale(
  extent: Extent,
  rangeLo: number,
  rangeHi: number,
  log: boolean,
): Scale {
  if (log) {
    const a = Math.log10(extent.min);
    const b = Math.log10(extent.max);
    return {
      toPx: (v) => rangeLo + ((Math.log10(v) - a) / (b - a)) * (rangeHi - rangeLo),
      ticks: () => logTicks(extent),
    };
  }
  return {
    toPx: (v) => rangeLo + ((v - extent.min) / (extent.max - extent.min)) * (rangeHi - rangeLo),
    ticks: () => linearTicks(extent),
  };
}

/** Render one panel as a <g> translated to (x0, y0). */
export function renderPanel(
  spec: PanelSpec,
  curves: Curve[],
  x0: number,
  y0: number,
): string {
  const drawn = curves.filter((c) => c.points.length > 0);
  const innerW = PANEL_WIDTH - MARGIN.left - MARGIN.right;
  const innerH = PANEL_HEIGHT - MARGIN.top - MARGIN.bottom;

  const xExtentRaw = extentOfCurves(drawn, (p) => p[0]) ?? { min: 0, max: 1 };
  const yExtentRaw = extentOfCurves(drawn, (p) => p[1]) ?? { min: 0, max: 1 };
  if (spec.xLog && xExtentRaw.min <= 0) {
    throw new Error("log x axis requires positive data");
  }
  if (spec.yLog && yExtentRaw.min <= 0) {
    throw new Error("log y axis requires positive data");
  }
  const xExtent = padExtent(xExtentRaw, Boolean(spec.xLog));
  const yExtent = padExtent(yExtentRaw, Boolean(spec.yLog));
  const xScale = makeScale(xExtent, MARGIN.left, MARGIN.left + innerW, Boolean(spec.xLog));
  const yScale = makeScale(yExtent, MARGIN.top + innerH, MARGIN.top, Boolean(spec.yLog));

  const parts: string[] = [`<g transform="translate(${px(x0)},${px(y0)})">`];
  parts.push(
    `<rect x="${px(MARGIN.left)}" y="${px(MARGIN.top)}" width="${px(innerW)}" ` +
      `height="${px(innerH)}" fill="none" stroke="#202020" stroke-width="1"/>`,
  );

  for (const tick of xScale.ticks()) {
    const sx = xScale.toPx(tick);
    parts.push(
      `<line x1="${px(sx)}" y1="${px(MARGIN.top + innerH)}" x2="${px(sx)}" ` +
        `y2="${px(MARGIN.top + innerH + 5)}" stroke="#202020" stroke-width="1"/>`,
      `<text x="${px(sx)}" y="${px(MARGIN.top + innerH + 18)}" ` +
        `text-anchor="middle" font-family="monospace" font-size="11">` +
        `${escapeText(fmt(tick))}</text>`,
    );
  }
  for (const tick of yScale.ticks()) {
    const sy = yScale.toPx(tick);
    parts.push(
      `<line x1="${px(MARGIN.left - 5)}" y1="${px(sy)}" x2="${px(MARGIN.left)}" ` +
        `y2="${px(sy)}" stroke="#202020" stroke-width="1"/>`,
      `<text x="${px(MARGIN.left - 8)}" y="${px(sy + 4)}" text-anchor="end" ` +
        `font-family="monospace" font-size="11">${escapeText(fmt(tick))}</text>`,
    );
  }

  parts.push(
    `<text x="${px(MARGIN.left + innerW / 2)}" y="${px(PANEL_HEIGHT - 14)}" ` +
      `text-anchor="middle" font-family="monospace" font-size="12">` +
      `${escapeText(spec.xLabel)}</text>`,
    `<text x="16" y="${px(MARGIN.top + innerH / 2)}" text-anchor="middle" ` +
      `font-family="monospace" font-size="12" ` +
      `transform="rotate(-90 16 ${px(MARGIN.top + innerH / 2)})">` +
      `${escapeText(spec.yLabel)}</text>`,
  );
  if (spec.title) {
    parts.push(
      `<text x="${px(MARGIN.left)}" y="22" font-family="monospace" ` +
        `font-size="13">${escapeText(spec.title)}</text>`,
    );
  }

  drawn.forEach((curve, i) => {
    const color = PALETTE[i % PALETTE.length];
    const pts = curve.points
      .map(([cx, cy]) => `${px(xScale.toPx(cx))},${px(yScale.toPx(cy))}`)
      .join(" ");
    parts.push(
      `<polyline fill="none" stroke="${color}" stroke-width="1.5" points="${pts}"/>`,
    );
  });

  // Legend and notes share a block in the top-right corner of the plot.
  const lines: Array<{ color: string | null; text: string }> = drawn.map(
    (curve, i) => ({ color: PALETTE[i % PALETTE.length], text: curve.label }),
  );
  for (const note of spec.notes ?? []) {
    lines.push({ color: null, text: note });
  }
  if (lines.length > 0) {
    const charW = 6.7;
    const widest = Math.max(...lines.map((l) => l.text.length));
    const boxW = widest * charW + 34;
    const boxH = lines.length * 16 + 10;
    const bx = MARGIN.left + innerW - boxW - 8;
    const by = MARGIN.top + 8;
    parts.push(
      `<rect x="${px(bx)}" y="${px(by)}" width="${px(boxW)}" height="${px(boxH)}" ` +
        `fill="#ffffff" fill-opacity="0.85" stroke="#b0b0b0" stroke-width="0.5"/>`,
    );
    lines.forEach((line, i) => {
      const ly = by + 16 * (i + 1);
      if (line.color !== null) {
        parts.push(
          `<line x1="${px(bx + 6)}" y1="${px(ly - 4)}" x2="${px(bx + 24)}" ` +
            `y2="${px(ly - 4)}" stroke="${line.color}" stroke-width="1.5"/>`,
        );
      }
      parts.push(
        `<text x="${px(bx + 28)}" y="${px(ly)}" font-family="monospace" ` +
          `font-size="11">${escapeText(line.text)}</text>`,
      );
    });
  }

  parts.push("</g>");
  return parts.join("\n");
}

/** Wrap panel markup in a standalone SVG document. */
export function svgDocument(width: number, height: number, body: string): string {
  return (
    `<svg xmlns="http://www.w3.org/2000/svg" width="${width}" ` +
    `height="${height}" viewBox="0 0 ${width} ${height}">\n` +
    `<rect x="0" y="0" width="${width}" height="${height}" fill="#ffffff"/>\n` +
    `${body}\n</svg>\n`
  );
}

/** Single-panel figure document. */
export function singlePanelFigure(spec: PanelSpec, curves: Curve[]): string {
  return svgDocument(PANEL_WIDTH, PANEL_HEIGHT, renderPanel(spec, curves, 0, 0));
}

/** Vertically stacked panels in one document. */
export function stackedFigure(
  panels: Array<{ spec: PanelSpec; curves: Curve[] }>,
): string {
  const body = panels
    .map(({ spec, curves }, i) => renderPanel(spec, curves, 0, i * PANEL_HEIGHT))
    .join("\n");
  return svgDocument(PANEL_WIDTH, PANEL_HEIGHT * panels.length, body);
}
