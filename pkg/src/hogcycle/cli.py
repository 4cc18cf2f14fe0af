"""Command-line front end.

Subcommands: ``simulate``, ``check``, ``chaos``, ``fracdim``,
``bifurcate``.  Every run writes its data files plus a ``manifest.txt``
from which the identical run can be re-executed
(:func:`manifest_to_argv`).  Exit codes: 0 success, 1 simulation fault,
2 usage or configuration error.

Parameter precedence: dedicated flags override ``--set key=value``
assignments, which override the ``--config`` file, which overrides the
preset.
"""

from __future__ import annotations

import argparse
import dataclasses
import os
import sys

import numpy as np

from . import __version__, analysis, engine, output, sweep
from .model import PRESETS, DomainError, Parameters, derive_constants

_VAR_FLAGS = {"Nr": "N_r", "P": "P"}


class UsageError(Exception):
    """Bad flags or configuration; maps to exit code 2."""


def _param_fields() -> dict[str, type]:
    return {f.name: f.type for f in dataclasses.fields(Parameters)}


def _convert_param(name: str, raw: str):
    if name == "q":
        return int(raw)
    if name in ("birth_law", "market_force"):
        return raw
    if name == "R_const":
        return None if raw.lower() in ("none", "") else float(raw)
    return float(raw)


def resolve_params(args) -> Parameters:
    """Build Parameters from preset, config file, --set and flags."""
    try:
        params = PRESETS[args.preset]
    except KeyError:
        raise UsageError(
            f"unknown preset {args.preset!r}; choose from {sorted(PRESETS)}"
        )
    overrides: dict[str, str] = {}
    if getattr(args, "config", None):
        try:
            overrides.update(output.read_config(args.config))
        except FileNotFoundError as exc:
            raise UsageError(str(exc))
    for assignment in getattr(args, "set", None) or []:
        key, value = output.parse_kv(assignment)
        overrides[key] = value

    fields = _param_fields()
    typed = {}
    for key, raw in overrides.items():
        name = "lam" if key == "lambda" else key
        if name not in fields:
            raise UsageError(f"unknown parameter {key!r}")
        try:
            typed[name] = _convert_param(name, raw)
        except ValueError:
            raise UsageError(f"bad value for {key}: {raw!r}")
    if getattr(args, "q", None) is not None:
        typed["q"] = args.q
    if getattr(args, "birth_law", None) is not None:
        typed["birth_law"] = args.birth_law
    try:
        return params.override(**typed) if typed else params
    except DomainError as exc:
        raise UsageError(f"invalid parameters: {exc}")


def _params_manifest(params: Parameters) -> dict:
    entries = {}
    for f in dataclasses.fields(Parameters):
        value = getattr(params, f.name)
        entries[f.name] = "none" if value is None else value
    return entries


def _common_manifest(command: str, args, params: Parameters) -> dict:
    entries = {"command": command, "version": __version__, "preset": args.preset}
    entries.update(_params_manifest(params))
    entries["seed"] = args.seed
    return entries


def manifest_to_argv(path: str) -> list[str]:
    """Rebuild the argv of the run recorded in a manifest file."""
    m = output.read_manifest(path)
    command = m["command"]
    argv = [command, "--preset", m["preset"], "--seed", m["seed"]]
    for name in _param_fields():
        argv += ["--set", f"{name}={m[name]}"]
    passthrough = {
        "simulate": ("years", "p0", "grid-stride", "start-year"),
        "chaos": ("years", "p0", "window", "var", "method"),
        "fracdim": ("years", "p0", "burnin", "var"),
        "bifurcate": (
            "param",
            "lo",
            "hi",
            "step",
            "years",
            "p0",
            "record-lo",
            "record-hi",
        ),
        "check": ("years", "p0"),
    }[command]
    for flag in passthrough:
        key = flag.replace("-", "_")
        if key in m:
            argv += [f"--{flag}", m[key]]
    if m.get("totals") == "True":
        argv += ["--totals"]
    if m.get("empirical") == "True":
        argv += ["--empirical"]
    return argv


def _write_series_csv(path, t, series, names=engine.VARIABLES) -> None:
    cols = [series[name] for name in names]
    rows = zip(t.tolist(), *(c.tolist() for c in cols))
    output.write_csv(path, ("t",) + tuple(names), rows)


def cmd_simulate(args) -> int:
    params = resolve_params(args)
    os.makedirs(args.out, exist_ok=True)
    record = engine.RecordSpec(
        grid_stride=args.grid_stride,
        yearly=True,
        grid_start_year=args.start_year,
        yearly_start_year=args.start_year,
        totals=args.totals,
    )
    traj = engine.simulate(
        params, args.seed, args.years, record, p_init=args.p0, backend=args.backend
    )
    _write_series_csv(os.path.join(args.out, "yearly.csv"), traj.t_yearly, traj.yearly)
    _write_series_csv(os.path.join(args.out, "grid.csv"), traj.t_grid, traj.grid)
    if args.totals:
        _write_series_csv(
            os.path.join(args.out, "totals.csv"),
            traj.t_grid,
            traj.grid,
            names=engine.TOTAL_VARIABLES,
        )
    manifest = _common_manifest("simulate", args, params)
    manifest.update(
        years=args.years,
        p0=args.p0,
        grid_stride=args.grid_stride,
        start_year=args.start_year,
        totals=args.totals,
    )
    output.write_manifest(os.path.join(args.out, "manifest.txt"), manifest)
    print(f"wrote {args.out}/yearly.csv, grid.csv ({len(traj.t_grid)} grid rows)")
    return 0


def cmd_check(args) -> int:
    params = resolve_params(args)
    consts = derive_constants(params)
    for name in (
        "c0",
        "c1",
        "cOmega_min",
        "cOmega_max",
        "rho_max",
        "N_max",
        "N_min",
        "L1",
        "S_max",
        "S_min",
        "P_min",
        "P_max",
    ):
        print(f"{name}={output.format_value(getattr(consts, name))}")
    print(f"hyp_persistence={consts.hyp_persistence}")
    print(f"hyp_demand={consts.hyp_demand}")
    print(f"hyp_supply={consts.hyp_supply}")

    if args.empirical:
        record = engine.RecordSpec(grid_stride=1, yearly=False)
        traj = engine.simulate(
            params, args.seed, args.years, record, p_init=args.p0,
            backend=args.backend,
        )
        mature = traj.t_grid >= params.A1
        n_r = traj.grid["N_r"][mature]
        s = traj.grid["S"][mature]
        p = traj.grid["P"][mature]
        dn = np.abs(np.diff(traj.grid["N_r"]))[mature[1:]]
        slack = 1.05
        checks = [
            ("max N_r", float(n_r.max()), slack * consts.N_max),
            ("max S", float(s.max()), slack * consts.S_max),
            ("max |dN_r| per step", float(dn.max()), slack * consts.L1 / params.q),
        ]
        for label, observed, bound in checks:
            verdict = "ok" if observed <= bound else "VIOLATED"
            print(
                f"empirical {label}={observed!r} bound={bound!r} [{verdict}]"
            )
        print(f"empirical min N_r={n_r.min()!r} (N_min={consts.N_min!r})")
        print(f"empirical min S={s.min()!r} (S_min={consts.S_min!r})")
        print(f"empirical P range=[{p.min()!r}, {p.max()!r}]")
    return 0


def cmd_chaos(args) -> int:
    params = resolve_params(args)
    os.makedirs(args.out, exist_ok=True)
    end = engine.final_time(params, args.years)
    record = engine.RecordSpec(
        grid_stride=1, yearly=False, grid_start_year=end - args.window
    )
    traj = engine.simulate(
        params, args.seed, args.years, record, p_init=args.p0, backend=args.backend
    )
    series = traj.grid[_VAR_FLAGS[args.var]]
    report = analysis.chaos_report(
        series, dt=1.0 / params.q, k_max=12, method=args.method
    )
    output.write_csv(
        os.path.join(args.out, "acf.csv"),
        ("lag", "acf"),
        zip(report.acf.lags.tolist(), report.acf.values.tolist()),
    )
    output.write_csv(
        os.path.join(args.out, "entropy.csv"),
        ("K", "H_K"),
        zip(report.K.tolist(), report.HK.tolist()),
    )
    output.write_csv(
        os.path.join(args.out, "returns.csv"),
        ("k", "log10_return"),
        enumerate(report.returns.tolist()),
    )
    summary = {
        "variable": args.var,
        "tau_star": report.tau_star,
        "acf_at_tau_star": report.acf.acf_at_tau,
        "acf_threshold_ok": report.acf.threshold_ok,
        "slope": report.slope,
        "corrcoef": report.corrcoef,
        "regression_method": report.regression_method,
        "n_returns": len(report.returns),
    }
    output.write_manifest(os.path.join(args.out, "summary.txt"), summary)
    manifest = _common_manifest("chaos", args, params)
    manifest.update(
        years=args.years, p0=args.p0, window=args.window, var=args.var,
        method=args.method,
    )
    output.write_manifest(os.path.join(args.out, "manifest.txt"), manifest)
    print(
        f"tau_star={report.tau_star!r} slope={report.slope!r} "
        f"corrcoef={report.corrcoef!r}"
    )
    return 0


def cmd_fracdim(args) -> int:
    params = resolve_params(args)
    os.makedirs(args.out, exist_ok=True)
    record = engine.RecordSpec(
        grid_stride=0, yearly=True, yearly_start_year=args.burnin
    )
    traj = engine.simulate(
        params, args.seed, args.years, record, p_init=args.p0, backend=args.backend
    )
    series = traj.yearly[_VAR_FLAGS[args.var]]
    cloud = analysis.delay_embed(series, dim=3, lag=1)
    fit = analysis.fractal_dimension(cloud)
    output.write_csv(
        os.path.join(args.out, "boxcount.csv"),
        ("epsilon", "count"),
        zip(fit.epsilons.tolist(), fit.counts.tolist()),
    )
    summary = {
        "variable": args.var,
        "n_points": len(cloud),
        "dimension": fit.dimension,
        "corrcoef": fit.corrcoef,
        "fit_lo": fit.fit_lo,
        "fit_hi": fit.fit_hi,
    }
    output.write_manifest(os.path.join(args.out, "summary.txt"), summary)
    manifest = _common_manifest("fracdim", args, params)
    manifest.update(
        years=args.years, p0=args.p0, burnin=args.burnin, var=args.var
    )
    output.write_manifest(os.path.join(args.out, "manifest.txt"), manifest)
    print(f"dimension={fit.dimension!r} corrcoef={fit.corrcoef!r}")
    return 0


def cmd_bifurcate(args) -> int:
    params = resolve_params(args)
    os.makedirs(args.out, exist_ok=True)
    try:
        spec = sweep.SweepSpec(
            param_name=args.param,
            lo=args.lo,
            hi=args.hi,
            step=args.step,
            years=args.years,
            record_lo=args.record_lo,
            record_hi=args.record_hi,
            seed=args.seed,
        )
    except ValueError as exc:
        raise UsageError(str(exc))
    data = sweep.run_sweep(params, spec, jobs=args.jobs)
    output.write_csv(
        os.path.join(args.out, "bifurcation.csv"),
        ("param", "t", "N_r", "P"),
        data.rows(),
    )
    manifest = _common_manifest("bifurcate", args, params)
    manifest.update(
        param=args.param,
        lo=args.lo,
        hi=args.hi,
        step=args.step,
        years=args.years,
        p0=args.p0,
        record_lo=args.record_lo,
        record_hi=args.record_hi,
    )
    output.write_manifest(os.path.join(args.out, "manifest.txt"), manifest)
    n_fault = sum(data.faulted)
    print(
        f"swept {len(data.param_values)} values of {args.param}"
        + (f" ({n_fault} faulted)" if n_fault else "")
    )
    return 0


def _add_common(p: argparse.ArgumentParser, years_default) -> None:
    p.add_argument("--preset", default="SP", help="parameter preset (SP, HH1, TG)")
    p.add_argument("--config", help="key=value config file overriding the preset")
    p.add_argument(
        "--set",
        action="append",
        metavar="KEY=VALUE",
        help="override one parameter (repeatable)",
    )
    p.add_argument("--seed", type=int, default=0, help="64-bit history seed")
    p.add_argument("--years", type=int, default=years_default)
    p.add_argument("--q", type=int, help="steps per year")
    p.add_argument("--birth-law", choices=("proportional", "appendix_literal"))
    p.add_argument("--p0", type=float, default=1.0, help="initial price")
    p.add_argument("--out", default="out", help="output directory")
    p.add_argument("--backend", choices=("c", "python"), help="stepping kernel")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="hogcycle",
        description="Coupled livestock-population / meat-price simulator "
        "and chaos toolkit",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("simulate", help="run one simulation, export CSV")
    _add_common(p, years_default=50)
    p.add_argument("--grid-stride", type=int, default=1)
    p.add_argument("--start-year", type=float, default=0.0)
    p.add_argument("--totals", action="store_true")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("check", help="derived constants and hypothesis report")
    _add_common(p, years_default=200)
    p.add_argument(
        "--empirical",
        action="store_true",
        help="also run a trajectory and compare against the bounds",
    )
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("chaos", help="autocorrelation + return-sign entropy")
    _add_common(p, years_default=300000)
    p.add_argument("--window", type=float, default=10000.0)
    p.add_argument("--var", choices=sorted(_VAR_FLAGS), default="P")
    p.add_argument("--method", choices=analysis.REGRESSION_METHODS, default="ols")
    p.set_defaults(func=cmd_chaos)

    p = sub.add_parser("fracdim", help="box-counting dimension of the attractor")
    _add_common(p, years_default=300000)
    p.add_argument("--burnin", type=float, default=100000.0)
    p.add_argument("--var", choices=sorted(_VAR_FLAGS), default="Nr")
    p.set_defaults(func=cmd_fracdim)

    p = sub.add_parser("bifurcate", help="one-parameter bifurcation sweep")
    _add_common(p, years_default=2000)
    p.add_argument("--param", required=True, choices=sweep.SWEEPABLE)
    p.add_argument("--lo", type=float, required=True)
    p.add_argument("--hi", type=float, required=True)
    p.add_argument("--step", type=float, default=0.01)
    p.add_argument("--record-lo", type=int, default=1500)
    p.add_argument("--record-hi", type=int, default=2000)
    p.add_argument("--jobs", type=int, default=1)
    p.set_defaults(func=cmd_bifurcate)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if exc.code is not None else 2
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except DomainError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except engine.SimulationFault as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
