"""Report schema and artifact IO: fixed headers, lossless roundtrips."""

import math

import numpy as np
import pytest

from charax import diagnostics as diag
from charax.errors import ConfigError, OracleError
from charax.grids import Grid1D, GridFunction


def sample_report():
    rows = (
        diag.SeriesRow(t=0.0, linf_u=1.0, lp2=math.pi, mass_u=0.0),
        diag.SeriesRow(t=0.1, linf_u=0.875, lp2=2.9, energy_residual=0.01,
                       alpha_margin_lo=-1e-16, alpha_margin_hi=0.25),
        diag.SeriesRow(t=0.30000000000000004, linf_u=1.0 / 3.0),
    )
    scaling = (diag.ScalingRowRecord(4e-3, 25.0, 0.1),
               diag.ScalingRowRecord(2e-3, 49.0, 0.098))
    return diag.DiagnosticsReport(run_id="demo-0123456789", rows=rows,
                                  scaling=scaling,
                                  config={"preset": "demo", "n": 64},
                                  summary={"backend": "numpy"})


def test_lp_norm_against_closed_forms():
    grid = Grid1D(n=4096)
    f = GridFunction(grid, np.sin(2 * np.pi * grid.nodes()))
    assert abs(diag.lp_norm(f, 2.0) - math.sqrt(0.5)) < 1e-12
    assert abs(diag.lp_norm(f, 1.0) - 2.0 / math.pi) < 1e-6
    assert diag.lp_norm(f, math.inf) == np.max(np.abs(f.values))
    with pytest.raises(ConfigError):
        diag.lp_norm(f, 0.5)


def test_report_validation():
    with pytest.raises(ConfigError, match="run_id"):
        diag.DiagnosticsReport(run_id="bad,id")
    with pytest.raises(ConfigError, match="run_id"):
        diag.DiagnosticsReport(run_id="")
    with pytest.raises(ConfigError, match="strictly increase"):
        diag.DiagnosticsReport(run_id="r", rows=(diag.SeriesRow(t=0.1),
                                                 diag.SeriesRow(t=0.1)))
    with pytest.raises(ConfigError, match="non-finite"):
        diag.DiagnosticsReport(run_id="r",
                               rows=(diag.SeriesRow(t=0.0, lp2=math.nan),))


def test_row_lookup():
    report = sample_report()
    assert report.last().t == 0.30000000000000004
    assert report.row_at(0.1).linf_u == 0.875
    with pytest.raises(ConfigError):
        report.row_at(0.2)
    with pytest.raises(ConfigError):
        diag.DiagnosticsReport(run_id="r").last()


def test_csv_header_and_empty_fields(tmp_path):
    path = tmp_path / "report.csv"
    diag.write_csv(sample_report(), path)
    lines = path.read_text().splitlines()
    assert lines[0] == ("run_id,t,linf_u,min_theta,mass_u,mass_theta,"
                        "lp1,lp2,lp4,lpinf,bv_deriv,energy_residual,"
                        "alpha_margin_lo,alpha_margin_hi")
    # unset diagnostics serialize as empty cells, set ones as repr
    assert lines[1] == "demo-0123456789,0.0,1.0,,0.0,,,3.141592653589793,,,,,,"
    assert lines[3].startswith("demo-0123456789,0.30000000000000004,"
                               "0.3333333333333333,")


def test_csv_roundtrip_is_lossless(tmp_path):
    path = tmp_path / "report.csv"
    report = sample_report()
    diag.write_csv(report, path)
    back = diag.read_csv(path)
    assert back.run_id == report.run_id
    assert back.rows == report.rows
    # a second write of the re-read series is byte-identical
    again = tmp_path / "again.csv"
    diag.write_csv(back, again)
    assert again.read_bytes() == path.read_bytes()


def test_csv_reader_rejects_foreign_files(tmp_path):
    bad = tmp_path / "foreign.csv"
    bad.write_text("time,value\n0,1\n")
    with pytest.raises(OracleError, match="header"):
        diag.read_csv(bad)
    truncated = tmp_path / "short.csv"
    truncated.write_text(diag.CSV_HEADER + "\nrun,0.0,1.0\n")
    with pytest.raises(OracleError, match="column count"):
        diag.read_csv(truncated)


def test_empty_series_writes_header_only(tmp_path):
    path = tmp_path / "empty.csv"
    diag.write_csv(diag.DiagnosticsReport(run_id="empty-run"), path)
    assert path.read_text() == diag.CSV_HEADER + "\n"


def test_json_roundtrip_preserves_everything(tmp_path):
    path = tmp_path / "report.json"
    report = sample_report()
    diag.write_json(report, path)
    back = diag.read_json(path)
    assert back.run_id == report.run_id
    assert back.rows == report.rows
    assert back.scaling == report.scaling
    assert dict(back.config) == dict(report.config)
    assert dict(back.summary) == dict(report.summary)


def test_scaling_csv_format(tmp_path):
    path = tmp_path / "scaling.csv"
    diag.write_scaling_csv(sample_report().scaling, path)
    assert path.read_text() == ("eps,sup_ux,product\n"
                                "0.004,25.0,0.1\n"
                                "0.002,49.0,0.098\n")


def test_profile_and_transformed_csv(tmp_path):
    x = np.array([0.25, 0.75])
    u = np.array([1.0, -1.0])
    p1 = tmp_path / "profile.csv"
    diag.write_profile_csv(p1, x, u, alpha=np.array([0.2, 0.8]),
                           theta=np.array([0.9, 1.1]))
    assert p1.read_text() == ("x,u,alpha,theta\n"
                              "0.25,1.0,0.2,0.9\n"
                              "0.75,-1.0,0.8,1.1\n")
    p2 = tmp_path / "bare.csv"
    diag.write_profile_csv(p2, x, u)
    assert p2.read_text().splitlines()[1] == "0.25,1.0,,"
    p3 = tmp_path / "transformed.csv"
    diag.write_transformed_csv(p3, x, u, np.array([3.5, -2.5]))
    assert p3.read_text() == ("alpha,U,U_alpha\n"
                              "0.25,1.0,3.5\n"
                              "0.75,-1.0,-2.5\n")
