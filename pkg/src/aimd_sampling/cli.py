"""Command-line entry point: ``aimd-sampling <command> ...``.

Exit codes: 0 success, 2 usage or input error, 3 infeasible run,
4 no feasible parameters.
"""

from __future__ import annotations

import argparse
import csv
import logging
import sys

from .baselines.constant import UnsustainableTrace, optimize_constant_rate
from .baselines.fhc import fhc_total_localizations, solve_fhc, write_fhc_csv
from .controller import DEFAULT_PARAMS, K_MIN, TuningParams
from .energy import DEFAULT_PROFILE, DeviceEnergyProfile
from .simulator import run_simulation, write_result_csv
from .solar import SolarModel, evaluate_model, fit_ridge, load_calibration_csv
from .traces import (irradiance_to_harvest, load_irradiance_csv, read_harvest_csv, synth_trace,
                     write_harvest_csv)
from .tuner import GridSpec, NoFeasibleParameters, grid_search, write_report_csv

EXIT_OK, EXIT_USAGE, EXIT_INFEASIBLE, EXIT_NO_PARAMS = 0, 2, 3, 4

log = logging.getLogger("aimd_sampling")


class InputError(Exception):
    pass


def _floats(text: str, n: int, what: str) -> list[float]:
    parts = [p for p in text.split(",")]
    if len(parts) != n:
        raise InputError(f"{what}: expected {n} comma-separated values, got {text!r}")
    try:
        return [float(p) for p in parts]
    except ValueError:
        raise InputError(f"{what}: not numeric: {text!r}") from None


def _params(text: str | None) -> TuningParams:
    if text is None:
        return DEFAULT_PARAMS
    try:
        return TuningParams(*_floats(text, 4, "--params"))
    except ValueError as exc:
        raise InputError(f"--params: {exc}") from None


def _profile(text: str | None, floor: float) -> DeviceEnergyProfile:
    if text is None:
        vals = [DEFAULT_PROFILE.energy_per_localization, DEFAULT_PROFILE.idle_power,
                DEFAULT_PROFILE.battery_capacity, DEFAULT_PROFILE.system_voltage]
    else:
        vals = _floats(text, 4, "--profile")
    try:
        return DeviceEnergyProfile(*vals, battery_floor=floor)
    except ValueError as exc:
        raise InputError(f"--profile: {exc}") from None


def _grid(text: str | None) -> GridSpec:
    if text is None:
        return GridSpec()
    axes = text.split(",")
    if len(axes) != 3:
        raise InputError("--grid: expected lo:hi:n for beta1, beta2 and gamma")
    ranges, steps = [], []
    for ax in axes:
        bits = ax.split(":")
        if len(bits) != 3:
            raise InputError(f"--grid: bad axis {ax!r}, expected lo:hi:n")
        try:
            lo, hi, n = float(bits[0]), float(bits[1]), int(bits[2])
        except ValueError:
            raise InputError(f"--grid: bad axis {ax!r}") from None
        if n < 1 or lo > hi:
            raise InputError(f"--grid: empty axis {ax!r}")
        ranges.append((lo, hi))
        steps.append(n)
    grid = GridSpec(ranges[0], ranges[1], ranges[2], tuple(steps))
    if not grid.points():
        raise InputError("--grid: no point with beta1 < beta2")
    return grid


def cmd_fit_solar(args) -> int:
    if args.train_frac >= 1.0:
        raise InputError("empty holdout: --train-frac must be < 1")
    data = load_calibration_csv(args.calib, drop_saturated=not args.keep_saturated)
    model, holdout = fit_ridge(data, args.alpha, args.seed, args.train_frac)
    if len(holdout) == 0:
        raise InputError("empty holdout: not enough samples for the requested split")
    rmse, mae = evaluate_model(model, holdout)
    model.save(args.out)
    print(f"slope={model.slope:.6g} W/(W/m2) intercept={model.intercept:.6g} W")
    print(f"rmse={rmse:.6g} W mae={mae:.6g} W (holdout n={len(holdout)})")
    return EXIT_OK


def cmd_make_trace(args) -> int:
    if (args.irradiance is None) == (args.synth is None):
        raise InputError("give exactly one of --irradiance or --synth")
    if args.irradiance is not None:
        if args.model is None:
            raise InputError("--irradiance needs --model")
        irr = load_irradiance_csv(args.irradiance, args.interval)
        trace = irradiance_to_harvest(irr, SolarModel.load(args.model))
    else:
        days, mn, mx, peak, noise, seed = _floats(args.synth, 6, "--synth")
        try:
            trace = synth_trace(int(days), mn / 1000.0, mx / 1000.0, peak, noise, int(seed))
        except ValueError as exc:
            raise InputError(f"--synth: {exc}") from None
    write_harvest_csv(trace, args.out)
    print(f"wrote {len(trace)} days to {args.out}")
    return EXIT_OK


def _plot(result, path) -> None:
    try:
        import matplotlib
        matplotlib.use("Agg")
        import matplotlib.pyplot as plt
    except ImportError:
        log.warning("matplotlib not installed, skipping plot")
        return
    try:
        fig, axes = plt.subplots(3, 1, sharex=True, figsize=(8, 7))
        axes[0].plot(result.days, result.harvested, lw=0.8)
        axes[0].set_ylabel("harvest [J/day]")
        axes[1].step(result.days, result.k_used, where="post", lw=0.8)
        axes[1].set_ylabel("k [fixes/day]")
        axes[2].plot(result.days, result.b_end * 100.0, lw=0.8)
        axes[2].set_ylabel("battery [%]")
        axes[2].set_xlabel("day")
        fig.tight_layout()
        fig.savefig(path, format="svg")
        plt.close(fig)
    except Exception as exc:  # plotting never changes the exit code
        log.warning("plot failed: %s", exc)


def cmd_simulate(args) -> int:
    trace = read_harvest_csv(args.trace)
    profile = _profile(args.profile, args.floor)
    result = run_simulation(trace, profile, _params(args.params), args.b0, args.k_min,
                            years=args.years)
    write_result_csv(result, args.out)
    if args.plot:
        _plot(result, args.plot)
    print(f"days={len(result)} total_localizations={result.total_localizations} "
          f"min_battery={result.min_battery:.4f} feasible={result.feasible}")
    return EXIT_OK if result.feasible else EXIT_INFEASIBLE


def cmd_tune(args) -> int:
    grid = _grid(args.grid)
    traces = [read_harvest_csv(p) for p in args.traces]
    profile = _profile(args.profile, args.floor)
    try:
        res = grid_search(grid, traces, profile, args.b0, args.k_min, years=args.years,
                          workers=args.workers)
    except NoFeasibleParameters:
        print("no feasible parameters", file=sys.stderr)
        return EXIT_NO_PARAMS
    write_report_csv(res.report, args.out)
    b = res.best
    print(f"beta1={b.beta1:g} beta2={b.beta2:g} gamma={b.gamma:g} J={res.J}")
    return EXIT_OK


def cmd_compare(args) -> int:
    trace = read_harvest_csv(args.trace)
    profile = _profile(args.profile, args.floor)
    params = _params(args.params)
    aimd = run_simulation(trace, profile, params, args.b0, args.k_min, years=args.years)
    try:
        k_const = optimize_constant_rate(trace, profile, args.b0, args.k_min, years=args.years)
    except UnsustainableTrace as exc:
        print(str(exc), file=sys.stderr)
        return EXIT_INFEASIBLE
    fhc = solve_fhc(trace.repeat(args.years), profile)
    if not fhc.optimal:
        print("finite-horizon problem infeasible", file=sys.stderr)
        return EXIT_INFEASIBLE
    if args.fhc_out:
        write_fhc_csv(fhc, args.fhc_out)
    totals = {
        "constant": float(k_const * len(aimd)),
        "aimd": float(aimd.total_localizations),
        "fhc": fhc_total_localizations(fhc),
    }
    ours = totals["aimd"]
    with open(args.out, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh)
        w.writerow(["method", "total_localizations", "ours_over_method"])
        for name, tot in totals.items():
            w.writerow([name, f"{tot:.6f}", f"{ours / tot:.3f}"])
    print(f"constant k={k_const}/day total={totals['constant']:.0f}")
    print(f"aimd total={ours:.0f} feasible={aimd.feasible}")
    print(f"fhc total={totals['fhc']:.1f}")
    print(f"ours/FHC={ours / totals['fhc']:.3f} ours/const={ours / totals['constant']:.3f}")
    return EXIT_OK if aimd.feasible else EXIT_INFEASIBLE


def _common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--profile", help="eloc_j,idle_w,cap_mah,volt (default 5.1,0.019,3000,3.8)")
    p.add_argument("--floor", type=float, default=DEFAULT_PROFILE.battery_floor,
                   help="battery floor fraction (default 0.05)")
    p.add_argument("--b0", type=float, default=1.0, help="initial battery fraction")
    p.add_argument("--k-min", type=int, default=K_MIN)
    p.add_argument("--years", type=int, default=1, help="repeat the trace cyclically")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="aimd-sampling", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("fit-solar", help="fit the irradiance-to-power ridge model")
    p.add_argument("--calib", required=True)
    p.add_argument("--alpha", type=float, default=0.1)
    p.add_argument("--train-frac", type=float, default=0.8)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--keep-saturated", action="store_true",
                   help="keep samples at or above the 100 W/m2 sensor saturation")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_fit_solar)

    p = sub.add_parser("make-trace", help="build a daily harvest trace")
    p.add_argument("--irradiance")
    p.add_argument("--model")
    p.add_argument("--interval", type=float, help="sample interval in seconds")
    p.add_argument("--synth", help="days,min_mw,max_mw,peak_day,noise,seed")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_make_trace)

    p = sub.add_parser("simulate", help="run the controller over a harvest trace")
    p.add_argument("--trace", required=True)
    p.add_argument("--params", help="beta1,beta2,gamma,B (default -0.203,0.468,0.67,3.0)")
    _common(p)
    p.add_argument("--out", required=True)
    p.add_argument("--plot", help="write a 3-panel SVG here")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("tune", help="grid-search the controller thresholds")
    p.add_argument("--traces", nargs="+", required=True)
    p.add_argument("--grid", help="b1lo:b1hi:n,b2lo:b2hi:n,glo:ghi:n "
                                  "(default -1:0:21,0:1:21,0.5:1:11)")
    p.add_argument("--workers", type=int, default=1)
    _common(p)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_tune)

    p = sub.add_parser("compare", help="constant rate vs controller vs clairvoyant optimum")
    p.add_argument("--trace", required=True)
    p.add_argument("--params")
    _common(p)
    p.add_argument("--fhc-out", help="write the hourly optimum here")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_compare)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s: %(message)s")
    try:
        return args.func(args)
    except (InputError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
