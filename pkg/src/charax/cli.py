"""Command line entry point.

Subcommands: run (one configuration), sweep (one configuration per eps),
compare-oracle (error tables against the exact references), certify
(eigenstructure residual report), accept (the full acceptance checklist).
Configurations come from a named preset or a JSON file, with flat
--key=value overrides applied on top; artifacts land in --out or the
CHARAX_OUT directory. Exit codes: 0 success, 1 a checked invariant or
acceptance criterion failed, 2 configuration error, 3 solver abort.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from . import acceptance, diagnostics, experiments, problems, temple
from .errors import CFLError, ConfigError, GridError, OracleError, SolverAbort

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_CONFIG = 2
EXIT_ABORT = 3


def _parse_override(text: str) -> tuple[str, object]:
    if "=" not in text:
        raise ConfigError(f"override {text!r} is not key=value")
    key, raw = text.split("=", 1)
    key = key.strip()
    if not key:
        raise ConfigError(f"override {text!r} has an empty key")
    try:
        return key, json.loads(raw)
    except json.JSONDecodeError:
        return key, raw


def load_config(preset: str | None, config_path: str | None,
                overrides: list[str]) -> dict:
    """Preset or JSON file, then flat overrides; values parse as JSON
    scalars when possible and stay strings otherwise."""
    if preset and config_path:
        raise ConfigError("give either a preset or a config file, not both")
    if preset:
        cfg = problems.preset_config(preset)
    elif config_path:
        try:
            cfg = json.loads(Path(config_path).read_text())
        except FileNotFoundError:
            raise ConfigError(f"config file not found: {config_path}") from None
        except json.JSONDecodeError as exc:
            raise ConfigError(f"config file {config_path}: {exc}") from None
        if not isinstance(cfg, dict):
            raise ConfigError(f"config file {config_path} is not an object")
    else:
        raise ConfigError("need --preset or --config")
    for item in overrides:
        key, value = _parse_override(item)
        cfg[key] = value
    return cfg


def _out_dir(args) -> Path | None:
    if getattr(args, "out", None):
        return Path(args.out)
    env = os.environ.get("CHARAX_OUT")
    return Path(env) if env else None


def _add_config_args(sub) -> None:
    sub.add_argument("--preset", help="named preset configuration")
    sub.add_argument("--config", help="JSON configuration file")
    sub.add_argument("--set", dest="overrides", action="append", default=[],
                     metavar="KEY=VALUE", help="override a config field")
    sub.add_argument("--out", help="artifact directory (or CHARAX_OUT)")


def cmd_run(args) -> int:
    cfg = load_config(args.preset, args.config, args.overrides)
    result = experiments.run_config(cfg)
    out = _out_dir(args)
    if out is not None:
        for path in experiments.write_artifacts(result, out):
            print(path)
    last = result.report.rows[-1]
    print(f"{result.run_id}: t={last.t:g} rows={len(result.report.rows)}")
    for key in ("sup_ux", "product_end", "product", "energy_residual",
                "mp_overshoot", "cross_drift"):
        if key in result.summary:
            print(f"  {key} = {result.summary[key]}")
    return EXIT_OK


def cmd_sweep(args) -> int:
    cfg = load_config(args.preset, args.config, args.overrides)
    sweep = experiments.run_sweep(cfg, jobs=args.jobs)
    out = _out_dir(args)
    if out is not None:
        for result in sweep.results:
            experiments.write_artifacts(result, out)
        path = out / "scaling.csv"
        diagnostics.write_scaling_csv(list(sweep.scaling), path)
        print(path)
    print(diagnostics.SCALING_HEADER)
    for row in sweep.scaling:
        print(f"{row.eps!r},{row.sup_ux!r},{row.product!r}")
    return EXIT_OK


def cmd_compare_oracle(args) -> int:
    if args.preset or args.config:
        cfg = load_config(args.preset, args.config, args.overrides)
    else:
        # no base needed here: the comparison has full defaults, and bare
        # --set overrides refine them
        cfg = dict(_parse_override(item) for item in args.overrides)
    cfg.setdefault("comparison", args.comparison)
    cfg.setdefault("eps_list", acceptance.SWEEP_EPS)
    cfg.setdefault("n_list", acceptance.SWEEP_N)
    cfg.setdefault("t_end", 0.1 if cfg["comparison"] == "pre-shock" else 0.5)
    cmp = experiments.compare_oracle(cfg)
    print("eps,n,l1_error,linf_error")
    for row in cmp.rows:
        linf = "" if row.linf_error is None else repr(row.linf_error)
        print(f"{row.eps!r},{row.n},{row.l1_error!r},{linf}")
    if cmp.rate is not None:
        print(f"fitted rate: {cmp.rate:.4f}")
    return EXIT_OK


def cmd_certify(args) -> int:
    cfg = load_config(args.preset, args.config, args.overrides)
    problem = experiments.build_temple(cfg)
    report = temple.certify_eigenstructure(problem)
    defect = temple.validate_Dij(problem)
    print("residual,value,threshold")
    for name, value, threshold in report.rows():
        print(f"{name},{value!r},{threshold!r}")
    print(f"Dij_validation,{defect!r},1e-06")
    if not report.ok or defect > 1e-6:
        return EXIT_CHECK_FAILED
    return EXIT_OK


def cmd_accept(args) -> int:
    results = acceptance.run_all(jobs=args.jobs, out_dir=_out_dir(args))
    failed = [r for r in results if not r.passed]
    print(f"{len(results) - len(failed)}/{len(results)} criteria passed")
    return EXIT_CHECK_FAILED if failed else EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="charax",
        description="Viscous conservation-law runs in generalized-"
                    "characteristic coordinates, with invariant checks.")
    subs = parser.add_subparsers(dest="command", required=True)

    sub = subs.add_parser("run", help="integrate one configuration")
    _add_config_args(sub)
    sub.set_defaults(func=cmd_run)

    sub = subs.add_parser("sweep", help="one run per eps in eps_list")
    _add_config_args(sub)
    sub.add_argument("--jobs", type=int, default=1,
                     help="parallel worker processes")
    sub.set_defaults(func=cmd_sweep)

    sub = subs.add_parser("compare-oracle",
                          help="error table against the exact solutions")
    _add_config_args(sub)
    sub.add_argument("--comparison", default="shock",
                     choices=("shock", "rarefaction", "pre-shock"))
    sub.set_defaults(func=cmd_compare_oracle)

    sub = subs.add_parser("certify",
                          help="eigenstructure residuals for a 2x2 system")
    _add_config_args(sub)
    sub.set_defaults(func=cmd_certify)

    sub = subs.add_parser("accept", help="run the acceptance checklist")
    sub.add_argument("--jobs", type=int, default=1,
                     help="parallel worker processes for the sweeps")
    sub.add_argument("--out", help="artifact directory (or CHARAX_OUT)")
    sub.set_defaults(func=cmd_accept)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ConfigError, GridError) as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (SolverAbort, CFLError) as exc:
        print(f"solver abort: {exc}", file=sys.stderr)
        return EXIT_ABORT
    except OracleError as exc:
        print(f"oracle error: {exc}", file=sys.stderr)
        return EXIT_CHECK_FAILED


if __name__ == "__main__":
    sys.exit(main())
