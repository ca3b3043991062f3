"""Experiment runners: configs in, solver loops, diagnostics artifacts out.

A config is a flat JSON-able dict (see problems.PRESETS). Runners build the
problem objects, integrate with per-step invariant enforcement, and return
a RunResult carrying the diagnostics report, checkpoint states, and a
summary of scalar findings. Writing artifacts is separate (write_artifacts)
so tests can run everything in memory.
"""

from __future__ import annotations

import hashlib
import json
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Callable, Mapping, Sequence

import numpy as np

from . import diagnostics, oracles, problems, scalar1d, scalar2d, temple
from .diagnostics import DiagnosticsReport, ScalingRowRecord, SeriesRow
from .errors import ConfigError, SolverAbort
from .grids import Grid1D, GridFunction, TorusGrid2D, ddx, ddx_axis, integrate
from .stepping import stable_dt, stable_dt_2d

# Slack added to the discrete maximum principle: pure roundoff headroom.
MP_TOL = 1e-8

# Relative slack for the exact discrete Holder ordering of p-root masses.
_HOLDER_SLACK = 1e-12

_P_COLUMNS = {1.0: "lp1", 2.0: "lp2", 4.0: "lp4", math.inf: "lpinf"}


def parse_p_list(text: str) -> list[float]:
    """Comma list of p exponents; restricted to the CSV schema's columns."""
    out = []
    for piece in str(text).split(","):
        piece = piece.strip()
        if not piece:
            continue
        p = math.inf if piece == "inf" else float(piece)
        if p not in _P_COLUMNS:
            raise ConfigError(f"p_list entry {piece!r} not in 1,2,4,inf")
        out.append(p)
    if not out:
        raise ConfigError("p_list is empty")
    return out


def parse_float_list(text: str) -> list[float]:
    return [float(piece) for piece in str(text).split(",") if piece.strip()]


def run_id_for(config: Mapping[str, object]) -> str:
    """Deterministic run identity: preset or kind, plus a config digest."""
    name = str(config.get("preset") or config.get("kind") or "run")
    canon = json.dumps({k: config[k] for k in sorted(config)}, sort_keys=True)
    digest = hashlib.sha256(canon.encode()).hexdigest()[:10]
    return f"{name}-{digest}"


def _cfg_float(config: Mapping[str, object], key: str, default=None) -> float:
    if key not in config or config[key] is None:
        if default is None:
            raise ConfigError(f"config is missing {key!r}")
        return float(default)
    try:
        return float(config[key])  # type: ignore[arg-type]
    except (TypeError, ValueError):
        raise ConfigError(f"config field {key!r} is not a number: "
                          f"{config[key]!r}") from None


def _cfg_int(config: Mapping[str, object], key: str, default=None) -> int:
    value = _cfg_float(config, key, default)
    if value != int(value):
        raise ConfigError(f"config field {key!r} must be an integer")
    return int(value)


@dataclass(frozen=True)
class Segment:
    t0: float
    t1: float
    steps: int

    @property
    def dt(self) -> float:
        return (self.t1 - self.t0) / self.steps


def plan_segments(t_end: float, dt0: float,
                  checkpoints: Sequence[float] = ()) -> list[Segment]:
    """Split [0, t_end] at the checkpoints, each piece at a snapped dt.

    Within a segment dt = length / ceil(length / dt0), so every checkpoint
    is an exact step boundary and dt never exceeds the stability bound.
    """
    if t_end <= 0.0:
        raise ConfigError(f"t_end must be > 0, got {t_end}")
    marks = sorted({cp for cp in checkpoints if 0.0 < cp < t_end})
    marks.append(t_end)
    segments = []
    prev = 0.0
    for mark in marks:
        steps = max(1, int(math.ceil((mark - prev) / dt0 - 1e-12)))
        segments.append(Segment(prev, mark, steps))
        prev = mark
    return segments


@dataclass(frozen=True)
class RunResult:
    """Everything a run produced, before any files are written."""

    config: Mapping[str, object]
    run_id: str
    report: DiagnosticsReport
    extra_reports: tuple[DiagnosticsReport, ...] = ()
    summary: Mapping[str, object] = field(default_factory=dict)
    final_state: object | None = None
    checkpoint_states: Mapping[float, object] = field(default_factory=dict)
    problem: object | None = None


def _u0_scalar1d(config: Mapping[str, object]) -> Callable:
    name = str(config.get("u0", "sine"))
    if name == "sine":
        return problems.sine_u0
    if name == "riemann":
        u_left = _cfg_float(config, "u_left")
        u_right = _cfg_float(config, "u_right")
        x_jump = _cfg_float(config, "x_jump", 0.25)

        def u0(x):
            return np.where(np.asarray(x) < x_jump, u_left, u_right)

        return u0
    raise ConfigError(f"unknown scalar1d u0 {name!r}")


def build_scalar1d(config: Mapping[str, object]) -> scalar1d.ScalarProblem1D:
    flux, dflux = problems.flux_pair(str(config.get("flux", "burgers")))
    grid = Grid1D(n=_cfg_int(config, "n"),
                  topology=str(config.get("topology", "periodic")))
    return scalar1d.ScalarProblem1D(flux, dflux, _u0_scalar1d(config), grid,
                                    _cfg_float(config, "eps"))


def _scalar1d_row(state: scalar1d.CoupledState1D,
                  problem: scalar1d.ScalarProblem1D,
                  p_list: Sequence[float]) -> SeriesRow:
    margins = scalar1d.check_alpha_bounds(state, problem)
    values = {
        "linf_u": float(np.max(np.abs(state.u.values))),
        "min_theta": float(np.min(state.theta.values)),
        "mass_u": integrate(state.u),
        "mass_theta": integrate(state.theta),
        "bv_deriv": scalar1d.transformed_bv_of_deriv(state),
        "alpha_margin_lo": margins.margin_lo,
        "alpha_margin_hi": margins.margin_hi,
    }
    for p in p_list:
        values[_P_COLUMNS[p]] = scalar1d.transformed_lp_norm(state, p)
    return SeriesRow(t=state.t, **values)


def run_scalar1d(config: Mapping[str, object]) -> RunResult:
    """Integrate the 1D coupled system, enforcing the maximum principle,
    Theta positivity, and alpha monotonicity at every step."""
    problem = build_scalar1d(config)
    p_list = parse_p_list(str(config.get("p_list", "1,2,4,inf")))
    record_every = _cfg_int(config, "record_every", 0)
    checkpoints = parse_float_list(str(config.get("checkpoints", "")))
    t_end = _cfg_float(config, "t_end")
    safety = _cfg_float(config, "safety", 0.4)
    weight = _cfg_float(config, "upwind_weight", 1.0)

    state = scalar1d.init_state(problem)
    lo = float(np.min(state.u.values))
    hi = float(np.max(state.u.values))
    mp_bound = max(abs(lo), abs(hi)) + MP_TOL
    dt0 = stable_dt(problem.grid, problem.speed_bound(lo, hi), problem.eps,
                    safety)

    rows = [_scalar1d_row(state, problem, p_list)]
    checkpoint_states: dict[float, object] = {}
    sup_ux = float(np.max(np.abs(ddx(state.u).values)))
    for segment in plan_segments(t_end, dt0, checkpoints):
        for k in range(segment.steps):
            state = scalar1d.advance(state, problem, segment.dt,
                                     upwind_weight=weight)
            linf = float(np.max(np.abs(state.u.values)))
            if linf > mp_bound:
                raise SolverAbort(
                    f"maximum principle violated: |u|={linf!r} exceeds "
                    f"{mp_bound!r} at t={state.t}")
            sup_ux = max(sup_ux, float(np.max(np.abs(ddx(state.u).values))))
            if record_every > 0 and (k + 1) % record_every == 0 \
                    and k + 1 < segment.steps:
                rows.append(_scalar1d_row(state, problem, p_list))
        rows.append(_scalar1d_row(state, problem, p_list))
        if segment.t1 < t_end:
            checkpoint_states[segment.t1] = state

    run_id = run_id_for(config)
    ux_end = float(np.max(np.abs(ddx(state.u).values)))
    summary = {
        "backend": _backend_name(),
        "eps": problem.eps,
        "sup_ux": sup_ux,
        "ux_end": ux_end,
        "product_end": problem.eps * ux_end,
        "mp_bound": mp_bound,
    }
    report = DiagnosticsReport(run_id=run_id, config=dict(config),
                               rows=tuple(rows), summary=summary)
    return RunResult(config=dict(config), run_id=run_id, report=report,
                     summary=summary, final_state=state,
                     checkpoint_states=checkpoint_states, problem=problem)


def _u0_scalar2d(config: Mapping[str, object]) -> Callable:
    name = str(config.get("u0", "diagonal-sine"))
    if name == "diagonal-sine":
        def u0(x1, x2):
            return np.sin(2.0 * np.pi * (x1 + x2))
        return u0
    raise ConfigError(f"unknown scalar2d u0 {name!r}")


def build_scalar2d(config: Mapping[str, object]) -> scalar2d.ScalarProblem2D:
    flux1, dflux1 = problems.flux_pair(str(config.get("flux1", "burgers")))
    flux2, dflux2 = problems.flux_pair(str(config.get("flux2", "burgers")))
    grid = TorusGrid2D(n1=_cfg_int(config, "n1"), n2=_cfg_int(config, "n2"))
    return scalar2d.ScalarProblem2D(flux1, dflux1, flux2, dflux2,
                                    _u0_scalar2d(config), grid,
                                    _cfg_float(config, "eps"))


def run_scalar2d(config: Mapping[str, object]) -> RunResult:
    """Integrate on the torus, auditing the weighted energy balance and
    enforcing the Theta mass identity, maximum principle, and the Holder
    ordering of the p-root gradient masses at every step."""
    problem = build_scalar2d(config)
    p_list = parse_p_list(str(config.get("p_list", "1,2,4")))
    if any(math.isinf(p) for p in p_list):
        raise ConfigError("scalar2d p_list must be finite (1,2,4)")
    axis = _cfg_int(config, "axis", 0)
    record_every = _cfg_int(config, "record_every", 1)
    t_end = _cfg_float(config, "t_end")
    safety = _cfg_float(config, "safety", 0.4)
    weight = _cfg_float(config, "upwind_weight", 1.0)
    energy_p = 2.0

    state = scalar2d.init_state2d(problem)
    lo = float(np.min(state.u.values))
    hi = float(np.max(state.u.values))
    mp_bound = max(abs(lo), abs(hi)) + MP_TOL
    ms1, ms2 = problem.speed_bounds(lo, hi)
    dt0 = stable_dt_2d(problem.grid, ms1, ms2, problem.eps, safety)
    segments = plan_segments(t_end, dt0)

    times = [0.0]
    masses = [scalar2d.weighted_lp(state, energy_p, axis)]
    dissipations = [scalar2d.dissipation_rate(state, problem, energy_p, axis)]

    def holder_check(st):
        roots = [scalar2d.weighted_lp(st, p, axis) ** (1.0 / p)
                 for p in sorted(p_list)]
        for a, b in zip(roots, roots[1:]):
            if a > b * (1.0 + _HOLDER_SLACK):
                raise SolverAbort(
                    f"Holder ordering of transformed norms broken at "
                    f"t={st.t}: {roots}")

    def residual_now():
        traj = scalar2d.EnergyTrajectory(energy_p, axis, np.array(times),
                                         np.array(masses),
                                         np.array(dissipations))
        return scalar2d.energy_balance_residual(traj).residual

    def row(st):
        values = {
            "linf_u": float(np.max(np.abs(st.u.values))),
            "min_theta": float(np.min(st.theta.values)),
            "mass_u": integrate(st.u),
            "mass_theta": scalar2d.theta_mass(st),
            "energy_residual": residual_now() if len(times) > 1 else None,
        }
        for p in p_list:
            values[_P_COLUMNS[p]] = scalar2d.weighted_lp(st, p, axis) ** (1.0 / p)
        return SeriesRow(t=st.t, **values)

    holder_check(state)
    rows = [row(state)]
    for segment in segments:
        for k in range(segment.steps):
            state = scalar2d.advance2d(state, problem, segment.dt,
                                       upwind_weight=weight)
            linf = float(np.max(np.abs(state.u.values)))
            if linf > mp_bound:
                raise SolverAbort(
                    f"maximum principle violated: |u|={linf!r} exceeds "
                    f"{mp_bound!r} at t={state.t}")
            times.append(state.t)
            masses.append(scalar2d.weighted_lp(state, energy_p, axis))
            dissipations.append(
                scalar2d.dissipation_rate(state, problem, energy_p, axis))
            holder_check(state)
            if record_every > 0 and (k + 1) % record_every == 0 \
                    and k + 1 < segment.steps:
                rows.append(row(state))
        rows.append(row(state))

    ratio = scalar2d.ratio_max_principle_check(state, problem, axis)
    run_id = run_id_for(config)
    summary = {
        "backend": _backend_name(),
        "eps": problem.eps,
        "energy_residual": residual_now(),
        "ratio_max": ratio.max_ratio,
        "ratio_bound": ratio.bound,
        "ratio_passed": ratio.passed,
        "theta_mass_end": scalar2d.theta_mass(state),
    }
    report = DiagnosticsReport(run_id=run_id, config=dict(config),
                               rows=tuple(rows), summary=summary)
    return RunResult(config=dict(config), run_id=run_id, report=report,
                     summary=summary, final_state=state, problem=problem)


def _u0_temple(config: Mapping[str, object]) -> Callable:
    name = str(config.get("u0", ""))
    if name == "diagonal-sine":
        return problems.diagonal_sine_u0
    if name == "chromatography-wave":
        return problems.chromatography_wave_u0
    raise ConfigError(f"unknown temple u0 {name!r}")


def build_temple(config: Mapping[str, object]) -> temple.TempleProblem:
    system = str(config.get("system", ""))
    grid = Grid1D(n=_cfg_int(config, "n"))
    eps = _cfg_float(config, "eps")
    width = config.get("mollify_width")
    width_val = None if width in (None, "") else float(width)  # type: ignore[arg-type]
    u0 = _u0_temple(config)
    if system == "chromatography":
        return temple.langmuir_chromatography(u0, grid, eps, width_val)
    if system == "diagonal":
        return temple.diagonal_system(
            problems.burgers_flux, problems.burgers_dflux,
            problems.burgers_flux, problems.burgers_dflux,
            u0, grid, eps, box=((0.1, 0.9), (0.1, 0.9)),
            mollify_width=width_val)
    raise ConfigError(f"unknown temple system {system!r}")


def _temple_row(state: temple.TempleState, fam: int, c3: float,
                p_list: Sequence[float], mass_u: float) -> SeriesRow:
    lo, hi = temple.alpha_envelope_margins(state, fam, c3)
    values = {
        "linf_u": max(float(np.max(np.abs(state.u1.values))),
                      float(np.max(np.abs(state.u2.values)))),
        "min_theta": float(np.min(state.theta(fam).values)),
        "mass_u": mass_u,
        "mass_theta": integrate(state.theta(fam)),
        "alpha_margin_lo": lo,
        "alpha_margin_hi": hi,
    }
    for p in p_list:
        values[_P_COLUMNS[p]] = temple.transformed_w_lp_norm(state, fam, p)
    return SeriesRow(t=state.t, **values)


def run_temple(config: Mapping[str, object]) -> RunResult:
    """Certify the eigenstructure, then integrate the coupled 2x2 system.

    Per step this enforces Theta positivity, alpha monotonicity, exact
    R_i(u) consistency, and the R_i range maximum principle; it tracks the
    per-family transformed W^{1,p} norms (their growth over the initial
    value is the persistence measure), the observed modified-speed bound,
    and sup |u_x|. The optional cross-check re-advances each step from the
    same previous state in the other evolution mode and aborts when the
    invariants disagree beyond cross_check_tol; a single step keeps the
    honest discretization difference at O(dt dx), so a violation points at
    inconsistent eigenstructure wiring rather than truncation.
    """
    problem = build_temple(config)
    temple.require_certified(problem)
    defect = temple.validate_Dij(problem)
    if defect > 1e-6:
        raise ConfigError(f"coupling coefficients fail manufactured-field "
                          f"validation: {defect:.3e} > 1e-6")
    p_list = parse_p_list(str(config.get("p_list", "1,2,4")))
    mode = str(config.get("mode", "u"))
    cross = str(config.get("cross_check", "") or "")
    cross_tol = _cfg_float(config, "cross_check_tol", 1e-6)
    record_every = _cfg_int(config, "record_every", 0)
    t_end = _cfg_float(config, "t_end")
    safety = _cfg_float(config, "safety", 0.4)

    state = temple.init_temple_state(problem)
    r_ranges = [(float(np.min(state.riemann(i).values)),
                 float(np.max(state.riemann(i).values))) for i in (0, 1)]
    w_init = {(i, p): temple.transformed_w_lp_norm(state, i, p)
              for i in (0, 1) for p in p_list}
    w_growth = {key: 1.0 for key in w_init}
    dt0 = temple.temple_stable_dt(state, problem, safety)
    speed_max = temple.max_modified_speed(state, problem)
    sup_ux = max(float(np.max(np.abs(ddx(state.u1).values))),
                 float(np.max(np.abs(ddx(state.u2).values))))
    mp_overshoot = 0.0
    cross_drift = 0.0

    def mass_total(st):
        return integrate(st.u1) + integrate(st.u2)

    rows = {0: [_temple_row(state, 0, speed_max, p_list, mass_total(state))],
            1: [_temple_row(state, 1, speed_max, p_list, mass_total(state))]}
    segments = plan_segments(t_end, dt0)
    for segment in segments:
        for k in range(segment.steps):
            prev = state
            state = temple.advance_temple(state, problem, segment.dt, mode=mode)
            speed_max = max(speed_max,
                            temple.max_modified_speed(state, problem))
            sup_ux = max(sup_ux,
                         float(np.max(np.abs(ddx(state.u1).values))),
                         float(np.max(np.abs(ddx(state.u2).values))))
            for i, (lo0, hi0) in enumerate(r_ranges):
                check = temple.r_range_check(state, lo0, hi0, i, tol=MP_TOL)
                mp_overshoot = max(mp_overshoot, lo0 - check.lo,
                                   check.hi - hi0)
                if not check.passed:
                    raise SolverAbort(
                        f"R_{i + 1} range left its initial envelope by "
                        f"{max(lo0 - check.lo, check.hi - hi0):.3e} "
                        f"at t={state.t}")
            for (i, p), w0 in w_init.items():
                w_growth[(i, p)] = max(
                    w_growth[(i, p)],
                    temple.transformed_w_lp_norm(state, i, p) / w0)
            if cross:
                other = "riemann" if mode == "u" else "u"
                shadow = temple.advance_temple(prev, problem, segment.dt,
                                               mode=other)
                drift = max(
                    float(np.max(np.abs(state.R1.values - shadow.R1.values))),
                    float(np.max(np.abs(state.R2.values - shadow.R2.values))))
                cross_drift = max(cross_drift, drift)
                if drift > cross_tol:
                    raise SolverAbort(
                        f"invariants of the two evolution modes disagree by "
                        f"{drift:.3e} > {cross_tol:.0e} within one step "
                        f"at t={state.t}")
            if record_every > 0 and (k + 1) % record_every == 0 \
                    and k + 1 < segment.steps:
                for fam in (0, 1):
                    rows[fam].append(_temple_row(state, fam, speed_max,
                                                 p_list, mass_total(state)))
        for fam in (0, 1):
            rows[fam].append(_temple_row(state, fam, speed_max, p_list,
                                         mass_total(state)))

    run_id = run_id_for(config)
    cert = temple.certify_eigenstructure(problem)
    summary = {
        "backend": _backend_name(),
        "eps": problem.eps,
        "mode": mode,
        "sup_ux": sup_ux,
        "product": problem.eps * sup_ux,
        "speed_max": speed_max,
        "mp_overshoot": mp_overshoot,
        "w_growth": {f"W{i + 1}_p{p:g}": w_growth[(i, p)]
                     for (i, p) in sorted(w_growth)},
        "dij_defect": defect,
        "certification": {name: val for name, val, _ in cert.rows()},
    }
    if cross:
        summary["cross_drift"] = cross_drift
    report1 = DiagnosticsReport(run_id=f"{run_id}-f1", config=dict(config),
                                rows=tuple(rows[0]), summary=summary)
    report2 = DiagnosticsReport(run_id=f"{run_id}-f2", config=dict(config),
                                rows=tuple(rows[1]), summary=summary)
    return RunResult(config=dict(config), run_id=run_id, report=report1,
                     extra_reports=(report2,), summary=summary,
                     final_state=state, problem=problem)


_RUNNERS = {
    "scalar1d": run_scalar1d,
    "scalar2d": run_scalar2d,
    "temple": run_temple,
}


def run_config(config: Mapping[str, object]) -> RunResult:
    kind = str(config.get("kind", ""))
    try:
        runner = _RUNNERS[kind]
    except KeyError:
        raise ConfigError(
            f"unknown kind {kind!r}; available: {sorted(_RUNNERS)}") from None
    return runner(config)


def _backend_name() -> str:
    from ._kernels import BACKEND
    return BACKEND


def write_artifacts(result: RunResult, out_dir: str | Path) -> list[Path]:
    """CSV series, JSON report, and final-profile artifacts for one run."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    written = []
    for report in (result.report, *result.extra_reports):
        csv_path = out / f"{report.run_id}.csv"
        diagnostics.write_csv(report, csv_path)
        json_path = out / f"{report.run_id}.json"
        diagnostics.write_json(report, json_path)
        written += [csv_path, json_path]
    state = result.final_state
    if isinstance(state, scalar1d.CoupledState1D):
        grid = state.u.grid
        ppath = out / f"{result.run_id}_profile.csv"
        diagnostics.write_profile_csv(ppath, grid.nodes(), state.u.values,
                                      state.alpha.values, state.theta.values)
        profile = scalar1d.reconstruct_profile(state)
        tpath = out / f"{result.run_id}_transformed.csv"
        diagnostics.write_transformed_csv(tpath, profile.alphas,
                                          profile.values, profile.derivs)
        written += [ppath, tpath]
    elif isinstance(state, temple.TempleState):
        for fam in (0, 1):
            profile = temple.reconstruct_W(state, fam)
            tpath = out / f"{result.run_id}_f{fam + 1}_transformed.csv"
            diagnostics.write_transformed_csv(tpath, profile.alphas,
                                              profile.values, profile.derivs)
            written.append(tpath)
    return written


def _sweep_entry(config: Mapping[str, object]) -> tuple[RunResult, ScalingRowRecord]:
    result = run_config(config)
    eps = float(result.summary["eps"])
    key = "ux_end" if "ux_end" in result.summary else "sup_ux"
    sup = float(result.summary[key])
    # Problem objects hold closures and cannot cross process boundaries;
    # they are rebuildable from the config echo.
    result = replace(result, problem=None)
    return result, ScalingRowRecord(eps, sup, eps * sup)


@dataclass(frozen=True)
class SweepResult:
    results: tuple[RunResult, ...]
    scaling: tuple[ScalingRowRecord, ...]

    def products(self) -> list[float]:
        return [row.product for row in self.scaling]

    def ratios(self) -> list[float]:
        prods = self.products()
        return [b / a for a, b in zip(prods, prods[1:])]


def sweep_configs(config: Mapping[str, object]) -> list[dict]:
    """Expand eps_list/n_list into per-run configs (order as listed)."""
    eps_list = parse_float_list(str(config.get("eps_list", "")))
    if len(eps_list) < 2:
        raise ConfigError("sweep needs eps_list with at least two values")
    n_list = [int(v) for v in parse_float_list(str(config.get("n_list", "")))]
    if n_list and len(n_list) != len(eps_list):
        raise ConfigError("n_list length must match eps_list")
    out = []
    for idx, eps in enumerate(eps_list):
        sub = {k: v for k, v in config.items()
               if k not in ("eps_list", "n_list", "jobs")}
        sub["eps"] = eps
        if n_list:
            sub["n"] = n_list[idx]
        out.append(sub)
    return out


def run_sweep(config: Mapping[str, object], jobs: int = 1) -> SweepResult:
    """Run one config per eps (optionally in parallel), assemble the
    scaling table in the listed eps order."""
    configs = sweep_configs(config)
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            entries = list(pool.map(_sweep_entry, configs))
    else:
        entries = [_sweep_entry(cfg) for cfg in configs]
    results = tuple(entry[0] for entry in entries)
    scaling = tuple(entry[1] for entry in entries)
    return SweepResult(results=results, scaling=scaling)


@dataclass(frozen=True)
class OracleRow:
    eps: float
    n: int
    l1_error: float
    linf_error: float | None = None


@dataclass(frozen=True)
class OracleComparison:
    kind: str
    rows: tuple[OracleRow, ...]
    rate: float | None

    def l1_decreasing(self) -> bool:
        errs = [row.l1_error for row in self.rows]
        return all(b < a for a, b in zip(errs, errs[1:]))


def _viscous_riemann_final(u_left: float, u_right: float, x_jump: float,
                           n: int, eps: float, t_end: float,
                           safety: float) -> scalar1d.CoupledState1D:
    config = {
        "kind": "scalar1d", "flux": "burgers", "u0": "riemann",
        "topology": "line", "u_left": u_left, "u_right": u_right,
        "x_jump": x_jump, "n": n, "eps": eps, "t_end": t_end,
        "safety": safety, "record_every": 0,
    }
    return run_scalar1d(config).final_state  # type: ignore[return-value]


def compare_oracle(config: Mapping[str, object]) -> OracleComparison:
    """Error table of the viscous solver against the exact references.

    comparison "shock" / "rarefaction": line-topology Burgers Riemann data
    against the entropy solution at t_end, L1 error per eps plus the fitted
    log-log convergence rate. comparison "pre-shock": periodic sine data
    against the characteristics solution, sup-norm error per eps (no rate:
    the bound 10 eps + 5 dx^2 is checked by the caller).
    """
    comparison = str(config.get("comparison", "shock"))
    eps_list = parse_float_list(str(config.get("eps_list", "")))
    if not eps_list:
        raise ConfigError("compare_oracle needs eps_list")
    n_list = [int(v) for v in parse_float_list(str(config.get("n_list", "")))]
    if len(n_list) != len(eps_list):
        raise ConfigError("compare_oracle needs n_list matching eps_list")
    t_end = _cfg_float(config, "t_end")
    safety = _cfg_float(config, "safety", 0.4)

    rows = []
    if comparison in ("shock", "rarefaction"):
        u_left, u_right = (1.0, 0.0) if comparison == "shock" else (0.0, 1.0)
        x_jump = _cfg_float(config, "x_jump", 0.25)
        datum = oracles.RiemannDatum(u_left, u_right, problems.burgers_flux,
                                     problems.burgers_dflux)
        for eps, n in zip(eps_list, n_list):
            state = _viscous_riemann_final(u_left, u_right, x_jump, n, eps,
                                           t_end, safety)
            grid = state.u.grid
            exact = GridFunction(grid, oracles.riemann_at(
                datum, t_end, grid.nodes(), x_jump))
            rows.append(OracleRow(eps, n,
                                  oracles.l1_distance(state.u, exact)))
    elif comparison == "pre-shock":
        if t_end >= 1.0 / (2.0 * math.pi):
            raise ConfigError(
                f"characteristics oracle needs t < {1.0 / (2.0 * math.pi):.4f}"
                f" (sine breaking time), got {t_end}")
        for eps, n in zip(eps_list, n_list):
            config1 = {"kind": "scalar1d", "flux": "burgers", "u0": "sine",
                       "topology": "periodic", "n": n, "eps": eps,
                       "t_end": t_end, "safety": safety, "record_every": 0}
            state = run_scalar1d(config1).final_state
            grid = state.u.grid  # type: ignore[union-attr]

            def du0(y):
                return 2.0 * math.pi * np.cos(2.0 * math.pi * y)

            exact = oracles.characteristics_solution(
                problems.sine_u0, du0, problems.burgers_dflux, t_end,
                grid.nodes())
            err = state.u.values - exact  # type: ignore[union-attr]
            l1 = float(np.sum(np.abs(err)) * grid.dx)
            rows.append(OracleRow(eps, n, l1, float(np.max(np.abs(err)))))
    else:
        raise ConfigError(f"unknown comparison {comparison!r}")

    rate = None
    if len(rows) >= 2:
        xs = np.log([row.eps for row in rows])
        ys = np.log([row.l1_error for row in rows])
        rate = float(np.polyfit(xs, ys, 1)[0])
    return OracleComparison(comparison, tuple(rows), rate)
