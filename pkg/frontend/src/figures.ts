/**
 * The standard figure set, one function per kind. Each takes parsed CSV
 * data and returns a complete SVG document string; rendering is pure, so
 * identical artifacts give identical figures.
 */
import {
  ProfileRow,
  ScalingRow,
  SchemaError,
  SeriesTable,
  SERIES_VALUE_COLUMNS,
  TransformedRow,
} from "./csv.js";
import { Curve, fmt, singlePanelFigure, stackedFigure } from "./svg.js";

export const FIGURE_KINDS = [
  "profile-overlay",
  "transformed-profile",
  "norm-vs-time",
  "loglog-scaling",
] as const;

export type FigureKind = (typeof FIGURE_KINDS)[number];

export interface LabeledProfile {
  label: string;
  rows: ProfileRow[];
}

/** Physical profiles u(x) overlaid across viscosities. */
export function profileOverlay(
  inputs: LabeledProfile[],
  title = "physical profile across viscosities",
): string {
  const curves: Curve[] = inputs.map((input) => ({
    label: input.label,
    points: input.rows.map((row) => [row.x, row.u]),
  }));
  return singlePanelFigure(
    { title, xLabel: "x", yLabel: "u" },
    curves,
  );
}

/** Transformed profile U and its derivative against the coordinate alpha. */
export function transformedProfile(
  rows: TransformedRow[],
  title = "transformed profile",
): string {
  return stackedFigure([
    {
      spec: { title, xLabel: "alpha", yLabel: "U" },
      curves: [{ label: "U(alpha)", points: rows.map((r) => [r.alpha, r.U]) }],
    },
    {
      spec: { xLabel: "alpha", yLabel: "U_alpha" },
      curves: [
        { label: "U_alpha(alpha)", points: rows.map((r) => [r.alpha, r.U_alpha]) },
      ],
    },
  ]);
}

/**
 * Selected series columns against time. Columns with no recorded values
 * are dropped; an empty series renders axes with no curves.
 */
export function normVsTime(
  table: SeriesTable,
  columns: string[] = ["lp1", "lp2", "lp4", "lpinf"],
  title?: string,
): string {
  const unknown = columns.filter(
    (name) => !SERIES_VALUE_COLUMNS.includes(name),
  );
  if (unknown.length > 0) {
    throw new SchemaError(
      `norm-vs-time: unknown series columns: ${unknown.join(", ")}`,
    );
  }
  const curves: Curve[] = columns.map((name) => ({
    label: name,
    points: table.rows
      .filter((row) => row.values[name] !== null)
      .map((row) => [row.t, row.values[name] as number]),
  }));
  return singlePanelFigure(
    {
      title: title ?? (table.runId === "" ? "series" : table.runId),
      xLabel: "t",
      yLabel: "norm",
    },
    curves.filter((c) => c.points.length > 0),
  );
}

/**
 * Gradient blow-up scaling: sup|u_x| falls like 1/eps on log-log axes
 * while eps*sup|u_x| stays flat. Annotated with the fitted slope and the
 * relative spread of the product when two or more rows are present.
 */
export function loglogScaling(
  rows: ScalingRow[],
  title = "gradient scaling in eps",
): string {
  if (rows.length === 0) {
    throw new SchemaError("loglog-scaling: need at least one data row");
  }
  for (const row of rows) {
    if (row.eps <= 0 || row.sup_ux <= 0 || row.product <= 0) {
      throw new SchemaError(
        "loglog-scaling: eps, sup_ux and product must be positive for log axes",
      );
    }
  }
  const notes: string[] = [];
  if (rows.length >= 2) {
    const xs = rows.map((r) => Math.log10(r.eps));
    const ys = rows.map((r) => Math.log10(r.sup_ux));
    const n = rows.length;
    const mx = xs.reduce((a, b) => a + b, 0) / n;
    const my = ys.reduce((a, b) => a + b, 0) / n;
    let num = 0;
    let den = 0;
    for (let i = 0; i < n; i++) {
      num += (xs[i] - mx) * (ys[i] - my);
      den += (xs[i] - mx) * (xs[i] - mx);
    }
    const slope = num / den;
    const products = rows.map((r) => r.product);
    const spread =
      (Math.max(...products) - Math.min(...products)) /
      (products.reduce((a, b) => a + b, 0) / rows.length);
    notes.push(`slope sup|u_x|: ${fmt(slope)}`);
    notes.push(`product spread: ${fmt(100 * spread)}%`);
  }
  const curves: Curve[] = [
    { label: "sup|u_x|", points: rows.map((r) => [r.eps, r.sup_ux]) },
    { label: "eps*sup|u_x|", points: rows.map((r) => [r.eps, r.product]) },
  ];
  return singlePanelFigure(
    { title, xLabel: "eps", yLabel: "value", xLog: true, yLog: true, notes },
    curves,
  );
}
