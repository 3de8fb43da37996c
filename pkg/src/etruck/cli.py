"""Command-line entry point: ``etruck {energy,cyclelife,tco,payback,sensitivity}``.

Exit codes: 0 success, 1 internal error, 2 user or configuration error.
"""

from __future__ import annotations

import argparse
import csv
import json
import logging
import os
import sys
from dataclasses import replace

import numpy as np

from . import battery, economics, payback
from .config import RunConfig, load_config
from .drivecycle import REFERENCE_CYCLES, CycleError, load_cycle, reference_cycle, stitch_daily, synth_cycle
from .powertrain import RoadProfile, per_ton_mile, simulate_cycle
from .units import KG_PER_LB, LB_PER_US_TON, mph_to_mps

log = logging.getLogger("etruck")

EXIT_OK, EXIT_INTERNAL, EXIT_USAGE = 0, 1, 2
HIST_BINS = 60


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(message)


def _global_flags(p: argparse.ArgumentParser, suppress: bool) -> None:
    d = argparse.SUPPRESS if suppress else None
    p.add_argument("--config", metavar="PATH", default=d, help="TOML run configuration")
    p.add_argument("--seed", type=int, default=d)
    p.add_argument("--samples", type=int, default=d, help="Monte Carlo sample count")
    p.add_argument("--grid-points", type=int, default=d)
    p.add_argument("--out", metavar="DIR", default=d, help="output directory")
    p.add_argument("--workers", type=int, default=d)


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    _global_flags(common, suppress=True)

    ap = _Parser(prog="etruck", description="Electric vs diesel semi-truck energy, battery life and cost analysis.")
    _global_flags(ap, suppress=False)
    ap.add_argument("-v", "--verbose", action="store_true")
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)

    e = sub.add_parser("energy", parents=[common], help="energy per mile over a drive cycle")
    src = e.add_mutually_exclusive_group()
    src.add_argument("--cycle", metavar="CSV", help="t_s,v_mps cycle file")
    src.add_argument("--kind", choices=("cruise", "composite", "custom"), default=None)
    e.add_argument("--speed-mph", type=float, help="target speed for a synthetic cycle")
    e.add_argument("--duration-s", type=float, default=3600.0)
    e.add_argument("--stop-fraction", type=float, default=None)
    e.add_argument("--daily-miles", type=float, help="repeat the cycle to this daily distance")
    e.add_argument("--grade", type=float, default=0.0, help="road grade, rise/run")
    e.add_argument("--grade-fraction", type=float, default=0.0)
    e.add_argument("--platoon", action="store_true", help="apply the platoon energy factor")
    e.add_argument("--pack-kwh", type=float, default=1000.0)

    c = sub.add_parser("cyclelife", parents=[common], help="capacity fade for cases A-F")
    c.add_argument("--fade-zero", action="store_true", help="disable all capacity fade")
    c.add_argument("--max-miles", type=float, default=1_200_000.0)

    for name, helptext in (("tco", "cost-per-mile distributions"), ("payback", "payback distribution")):
        t = sub.add_parser(name, parents=[common], help=helptext)
        t.add_argument("--rf", type=float, help="battery replacement fraction override")
        t.add_argument("--emit-plotdata", action="store_true", help="also write histogram CSVs")

    s = sub.add_parser("sensitivity", parents=[common], help="one-at-a-time payback sweep")
    s.add_argument("--variable", required=True)
    s.add_argument("--values", required=True, help="comma-separated pinned values")
    return ap


def resolve_config(args) -> RunConfig:
    cfg = load_config(args.config) if getattr(args, "config", None) else RunConfig()
    over = {}
    for attr, key in (("seed", "seed"), ("samples", "samples"), ("grid_points", "grid_points"),
                      ("out", "output_dir"), ("workers", "workers")):
        v = getattr(args, attr, None)
        if v is not None:
            over[key] = v
    return replace(cfg, **over) if over else cfg


# ----------------------------------------------------------------- helpers

class Report:
    def __init__(self, cfg: RunConfig, command: str):
        self.cfg = cfg
        self.command = command
        self.headline: dict = {}
        self.files: list[str] = []
        os.makedirs(cfg.output_dir, exist_ok=True)

    def path(self, name: str) -> str:
        p = os.path.join(self.cfg.output_dir, name)
        self.files.append(p)
        return p

    def write(self) -> str:
        p = self.path("report.json")
        doc = {
            "command": self.command,
            "config": self.cfg.to_dict(),
            "headline": self.headline,
            "manifest": sorted(os.path.relpath(f, self.cfg.output_dir) for f in self.files),
        }
        with open(p, "w", encoding="utf-8") as fh:
            json.dump(doc, fh, indent=2, sort_keys=True, default=_json_default)
            fh.write("\n")
        return p


def _json_default(o):
    if isinstance(o, (np.floating, np.integer)):
        return o.item()
    if isinstance(o, tuple):
        return list(o)
    raise TypeError(type(o))


def _write_hist(path, columns: dict[str, np.ndarray]) -> None:
    allv = np.concatenate([v for v in columns.values() if v.size])
    edges = np.histogram_bin_edges(allv, bins=HIST_BINS)
    counts = {k: np.histogram(v, bins=edges)[0] for k, v in columns.items()}
    with open(path, "w", encoding="utf-8", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["bin_lo", "bin_hi"] + [f"count_{k}" for k in columns])
        for i in range(len(edges) - 1):
            w.writerow([repr(float(edges[i])), repr(float(edges[i + 1]))] + [int(counts[k][i]) for k in columns])


def _ranges(cfg: RunConfig, rf: float | None = None) -> economics.ParameterRanges:
    r = cfg.ranges
    if r.replacement_odometer is None:
        r = replace(r, replacement_odometer=battery.replacement_odometer(cfg.vehicle, cfg.fade))
    if rf is not None:
        r = r.pinned("replacement_fraction", rf)
    return r


# ---------------------------------------------------------------- commands

def cmd_energy(args, cfg: RunConfig) -> int:
    rep = Report(cfg, "energy")
    if args.cycle:
        cycle = load_cycle(args.cycle)
    elif args.speed_mph is not None or args.stop_fraction is not None:
        kind = args.kind or "cruise"
        speed = mph_to_mps(args.speed_mph) if args.speed_mph is not None else REFERENCE_CYCLES[kind][0]
        cycle = synth_cycle(kind, speed, args.duration_s, args.stop_fraction or 0.0)
    else:
        cycle = reference_cycle(args.kind or "cruise")
    if args.daily_miles:
        cycle = stitch_daily(cycle, args.daily_miles)
    if cycle.distance_m <= 0:
        raise CycleError(f"cycle {cycle.name!r} covers zero distance")
    vehicle = cfg.vehicle.platooned() if args.platoon else cfg.vehicle
    road = RoadProfile(args.grade, args.grade_fraction)
    tr = simulate_cycle(cycle, vehicle, road, args.pack_kwh)
    tons = vehicle.mass / KG_PER_LB / LB_PER_US_TON
    with open(rep.path("energy_power.csv"), "w", encoding="utf-8", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(("t_s", "power_w"))
        for t, p in zip(tr.time, tr.power):
            w.writerow((repr(float(t)), repr(float(p))))
    rep.headline = {
        "cycle": cycle.name,
        "distance_mi": tr.distance,
        "net_energy_kwh": tr.net_energy,
        "energy_per_mile_kwh": tr.energy_per_mile,
        "wh_per_ton_mile": per_ton_mile(tr.energy_per_mile, tons),
        "platoon": bool(args.platoon),
    }
    rep.write()
    print(f"cycle {cycle.name}: {tr.distance:.2f} mi, {tr.net_energy:.1f} kWh")
    print(f"energy per mile: {tr.energy_per_mile:.3f} kWh/mi")
    print(f"per ton-mile ({tons:.1f} US tons): {rep.headline['wh_per_ton_mile']:.2f} Wh/ton-mi")
    return EXIT_OK


def cmd_cyclelife(args, cfg: RunConfig) -> int:
    rep = Report(cfg, "cyclelife")
    fade = battery.NO_FADE if args.fade_zero else cfg.fade
    traces = battery.run_reference_cases(cfg.vehicle, fade, max_miles=args.max_miles)
    rows = []
    for label, tr in traces.items():
        tr.to_csv(rep.path(f"cyclelife_case_{label}.csv"))
        eol = battery.miles_to_eol(tr)
        crosses = eol is not None and eol < 1_000_000
        rows.append((label, eol, crosses))
    with open(rep.path("cyclelife_summary.csv"), "w", encoding="utf-8", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(("case", "miles_to_eol_mi", "crosses_400mi_before_1m"))
        for label, eol, crosses in rows:
            w.writerow((label, "beyond horizon" if eol is None else f"{eol:.1f}", int(crosses)))
    rep.headline = {label: {"miles_to_eol": eol, "crosses_400mi_before_1m": crosses} for label, eol, crosses in rows}
    rep.write()
    print("case  miles to EOL (80%)   400-mi range lost before 1M mi")
    for label, eol, crosses in rows:
        txt = "beyond horizon" if eol is None else f"{eol:,.0f}"
        print(f"  {label}   {txt:>16}   {'yes' if crosses else 'no'}")
    return EXIT_OK


def cmd_tco(args, cfg: RunConfig) -> int:
    rep = Report(cfg, "tco")
    r = _ranges(cfg, args.rf)
    batch = economics.sample_scenarios(r, cfg.samples, cfg.grid_points, cfg.seed)
    economics.write_scenarios_csv(batch, rep.path("tco_scenarios.csv"))
    d = economics.cpm_distribution(batch, "diesel")
    e = economics.cpm_distribution(batch, "electric")
    if args.emit_plotdata:
        _write_hist(rep.path("tco_hist.csv"), {"diesel": d.samples, "electric": e.samples})
    rep.headline = {
        "replacement_fraction": r.replacement_fraction,
        "cpm_diesel_mean": d.mean, "cpm_diesel_std": d.std,
        "cpm_electric_mean": e.mean, "cpm_electric_std": e.std,
    }
    rep.write()
    print(f"replacement fraction R_f = {r.replacement_fraction:.2f}, {len(batch)} scenarios")
    print(f"diesel   cost per mile: {d.mean:.3f} +/- {d.std:.3f} USD/mi")
    print(f"electric cost per mile: {e.mean:.3f} +/- {e.std:.3f} USD/mi")
    return EXIT_OK


def cmd_payback(args, cfg: RunConfig) -> int:
    rep = Report(cfg, "payback")
    r = _ranges(cfg, args.rf)
    batch = economics.sample_scenarios(r, cfg.samples, cfg.grid_points, cfg.seed)
    payback.write_payback_csv(batch, rep.path("payback_scenarios.csv"))
    d = payback.payback_distribution(batch)
    odo = payback.odometer_distribution(batch)
    if args.emit_plotdata:
        _write_hist(rep.path("payback_hist.csv"), {"payback_yr": d.samples})
    rep.headline = {
        "replacement_fraction": r.replacement_fraction,
        "payback_mean_yr": d.mean, "payback_std_yr": d.std, "payback_median_yr": d.median,
        "odometer_mean_mi": odo.mean, "no_breakeven": d.excluded,
    }
    rep.write()
    print(f"replacement fraction R_f = {r.replacement_fraction:.2f}, {len(batch)} scenarios")
    print(f"payback: mean {d.mean:.2f} yr, std {d.std:.2f}, median {d.median:.2f}")
    print(f"odometer at payback: mean {odo.mean:,.0f} mi")
    print(f"scenarios without break-even: {d.excluded}")
    return EXIT_OK


def cmd_sensitivity(args, cfg: RunConfig) -> int:
    if args.variable not in economics.VARIABLES:
        raise UsageError(f"unknown variable {args.variable!r}; valid names: {', '.join(economics.VARIABLES)}")
    try:
        values = [float(x) for x in args.values.split(",") if x.strip()]
    except ValueError:
        raise UsageError(f"--values must be comma-separated numbers, got {args.values!r}") from None
    if not values:
        raise UsageError("--values is empty")
    rep = Report(cfg, "sensitivity")
    pts = payback.sensitivity_sweep(_ranges(cfg), args.variable, values, cfg.samples, cfg.seed,
                                    cfg.grid_points, cfg.workers)
    payback.write_sensitivity_csv(pts, rep.path(f"sensitivity_{args.variable}.csv"))
    rep.headline = {"variable": args.variable,
                    "points": [{"pinned_value": p.pinned_value, "mean_payback_yr": p.mean_payback,
                                "median_payback_yr": p.median_payback} for p in pts]}
    rep.write()
    print(f"{'value':>12}  {'mean yr':>8}  {'median yr':>9}  {'std':>6}  no-breakeven")
    for p in pts:
        print(f"{p.pinned_value:>12g}  {p.mean_payback:8.3f}  {p.median_payback:9.3f}  "
              f"{p.std_payback:6.3f}  {p.frac_no_breakeven:.3%}")
    return EXIT_OK


COMMANDS = {
    "energy": cmd_energy,
    "cyclelife": cmd_cyclelife,
    "tco": cmd_tco,
    "payback": cmd_payback,
    "sensitivity": cmd_sensitivity,
}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as exc:
        print(f"etruck: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except SystemExit as exc:  # --help
        return int(exc.code or 0)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        cfg = resolve_config(args)
        return COMMANDS[args.command](args, cfg)
    except (UsageError, ValueError) as exc:
        # ConfigError, CycleError and FadeConfigurationError are ValueErrors
        print(f"etruck: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except Exception:
        log.exception("internal error")
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
