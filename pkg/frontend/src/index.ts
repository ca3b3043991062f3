export {
  SchemaError,
  SERIES_COLUMNS,
  SERIES_VALUE_COLUMNS,
  SCALING_COLUMNS,
  PROFILE_COLUMNS,
  TRANSFORMED_COLUMNS,
  parseSeriesCsv,
  parseScalingCsv,
  parseProfileCsv,
  parseTransformedCsv,
} from "./csv.js";
export type {
  SeriesRow,
  SeriesTable,
  ScalingRow,
  ProfileRow,
  TransformedRow,
} from "./csv.js";
export {
  fmt,
  linearTicks,
  logTicks,
  renderPanel,
  singlePanelFigure,
  stackedFigure,
  svgDocument,
  PALETTE,
  PANEL_WIDTH,
  PANEL_HEIGHT,
} from "./svg.js";
export type { Curve, Extent, PanelSpec } from "./svg.js";
export {
  FIGURE_KINDS,
  loglogScaling,
  normVsTime,
  profileOverlay,
  transformedProfile,
} from "./figures.js";
export type { FigureKind, LabeledProfile } from "./figures.js";
export { runCli } from "./cli.js";
