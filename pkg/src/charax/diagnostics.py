"""Norms, run reports, and the CSV/JSON artifact formats.

Every solver run funnels through DiagnosticsReport: a time series of
scalar diagnostics under a fixed column schema, plus optional scaling
tables. Writers emit shortest-roundtrip decimals, so re-reading an
artifact reproduces the values exactly and identical runs produce
identical bytes.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Iterable, Mapping, Sequence

import numpy as np

from .errors import ConfigError, OracleError
from .grids import GridFunction, integrate

CSV_HEADER = ("run_id,t,linf_u,min_theta,mass_u,mass_theta,lp1,lp2,lp4,lpinf,"
              "bv_deriv,energy_residual,alpha_margin_lo,alpha_margin_hi")

# Column names after run_id and t; SeriesRow stores one optional float each.
VALUE_COLUMNS = tuple(CSV_HEADER.split(",")[2:])

SCALING_HEADER = "eps,sup_ux,product"

PROFILE_HEADER = "x,u,alpha,theta"

TRANSFORMED_HEADER = "alpha,U,U_alpha"


def lp_norm(f: GridFunction, p: float) -> float:
    """(integral |f|^p dx)^(1/p) over f's domain; the sup for p = inf."""
    if p < 1:
        raise ConfigError(f"need p >= 1, got {p}")
    if np.isinf(p):
        return float(np.max(np.abs(f.values)))
    powered = GridFunction(f.grid, np.abs(f.values) ** p)
    return float(integrate(powered)) ** (1.0 / p)


@dataclass(frozen=True)
class SeriesRow:
    """Diagnostics at one output time; unset quantities stay None."""

    t: float
    linf_u: float | None = None
    min_theta: float | None = None
    mass_u: float | None = None
    mass_theta: float | None = None
    lp1: float | None = None
    lp2: float | None = None
    lp4: float | None = None
    lpinf: float | None = None
    bv_deriv: float | None = None
    energy_residual: float | None = None
    alpha_margin_lo: float | None = None
    alpha_margin_hi: float | None = None

    def get(self, column: str) -> float | None:
        return getattr(self, column)


@dataclass(frozen=True)
class ScalingRowRecord:
    """One line of an eps-scaling table: eps, sup_t |u_x|, their product."""

    eps: float
    sup_ux: float
    product: float


@dataclass(frozen=True)
class DiagnosticsReport:
    """A run's identity, configuration echo, time series, and tables."""

    run_id: str
    config: Mapping[str, object] = field(default_factory=dict)
    rows: tuple[SeriesRow, ...] = ()
    scaling: tuple[ScalingRowRecord, ...] = ()
    summary: Mapping[str, object] = field(default_factory=dict)

    def __post_init__(self) -> None:
        if ("," in self.run_id or "\n" in self.run_id or not self.run_id):
            raise ConfigError(f"run_id {self.run_id!r} must be nonempty "
                              "without commas or newlines")
        ts = [row.t for row in self.rows]
        if any(b <= a for a, b in zip(ts, ts[1:])):
            raise ConfigError("time series stamps must strictly increase")
        for row in self.rows:
            for col in ("t",) + VALUE_COLUMNS:
                val = getattr(row, col)
                if val is not None and not np.isfinite(val):
                    raise ConfigError(f"non-finite {col} at t={row.t}")

    def with_rows(self, rows: Iterable[SeriesRow]) -> "DiagnosticsReport":
        return replace(self, rows=tuple(rows))

    def last(self) -> SeriesRow:
        if not self.rows:
            raise ConfigError("report has no recorded rows")
        return self.rows[-1]

    def row_at(self, t: float, tol: float = 1e-9) -> SeriesRow:
        """The recorded row at time t (within tol)."""
        for row in self.rows:
            if abs(row.t - t) <= tol:
                return row
        raise ConfigError(f"no recorded row at t={t}")


def _fmt(value: float | None) -> str:
    """Shortest decimal that round-trips; None becomes the empty field."""
    if value is None:
        return ""
    return repr(float(value))


def write_csv(report: DiagnosticsReport, path: str | Path) -> None:
    """Time series as CSV under the fixed header, one row per output step."""
    lines = [CSV_HEADER]
    for row in report.rows:
        cells = [report.run_id, _fmt(row.t)]
        cells += [_fmt(row.get(col)) for col in VALUE_COLUMNS]
        lines.append(",".join(cells))
    Path(path).write_text("\n".join(lines) + "\n")


def read_csv(path: str | Path) -> DiagnosticsReport:
    """Rebuild a report (series only) from a CSV artifact."""
    lines = Path(path).read_text().splitlines()
    if not lines or lines[0] != CSV_HEADER:
        raise OracleError(f"{path}: missing or mismatched CSV header")
    run_id = "unknown"
    rows = []
    for line in lines[1:]:
        if not line:
            continue
        cells = line.split(",")
        if len(cells) != 2 + len(VALUE_COLUMNS):
            raise OracleError(f"{path}: bad column count in {line!r}")
        run_id = cells[0]
        values = {col: (float(c) if c else None)
                  for col, c in zip(VALUE_COLUMNS, cells[2:])}
        rows.append(SeriesRow(t=float(cells[1]), **values))
    return DiagnosticsReport(run_id=run_id, rows=tuple(rows))


def write_json(report: DiagnosticsReport, path: str | Path) -> None:
    """Full report as JSON: config echo, series, scaling tables, summary."""
    doc = {
        "run_id": report.run_id,
        "config": dict(report.config),
        "series": [
            {"t": row.t, **{col: row.get(col) for col in VALUE_COLUMNS}}
            for row in report.rows
        ],
        "scaling": [
            {"eps": r.eps, "sup_ux": r.sup_ux, "product": r.product}
            for r in report.scaling
        ],
        "summary": dict(report.summary),
    }
    Path(path).write_text(json.dumps(doc, indent=1, sort_keys=True) + "\n")


def read_json(path: str | Path) -> DiagnosticsReport:
    """Rebuild the full report from a JSON artifact."""
    doc = json.loads(Path(path).read_text())
    rows = tuple(
        SeriesRow(t=entry["t"],
                  **{col: entry.get(col) for col in VALUE_COLUMNS})
        for entry in doc.get("series", []))
    scaling = tuple(
        ScalingRowRecord(entry["eps"], entry["sup_ux"], entry["product"])
        for entry in doc.get("scaling", []))
    return DiagnosticsReport(run_id=doc["run_id"],
                             config=doc.get("config", {}),
                             rows=rows, scaling=scaling,
                             summary=doc.get("summary", {}))


def write_scaling_csv(rows: Sequence[ScalingRowRecord], path: str | Path) -> None:
    """Scaling table as CSV: one line per eps, ordered as given."""
    lines = [SCALING_HEADER]
    lines += [",".join((_fmt(r.eps), _fmt(r.sup_ux), _fmt(r.product)))
              for r in rows]
    Path(path).write_text("\n".join(lines) + "\n")


def write_profile_csv(path: str | Path, x: np.ndarray, u: np.ndarray,
                      alpha: np.ndarray | None = None,
                      theta: np.ndarray | None = None) -> None:
    """Final physical profile: x, u, and the coordinate fields when present."""
    lines = [PROFILE_HEADER]
    for j in range(len(x)):
        lines.append(",".join((
            _fmt(x[j]), _fmt(u[j]),
            _fmt(None if alpha is None else alpha[j]),
            _fmt(None if theta is None else theta[j]))))
    Path(path).write_text("\n".join(lines) + "\n")


def write_transformed_csv(path: str | Path, alphas: np.ndarray,
                          values: np.ndarray, derivs: np.ndarray) -> None:
    """Transformed profile samples: the graph (alpha, U) and U_alpha."""
    lines = [TRANSFORMED_HEADER]
    for j in range(len(alphas)):
        lines.append(",".join((_fmt(alphas[j]), _fmt(values[j]),
                               _fmt(derivs[j]))))
    Path(path).write_text("\n".join(lines) + "\n")
