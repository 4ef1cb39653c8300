"""Command-line front end.

Exit codes: 0 success, 2 invalid arguments or configuration, 3 domain or
constraint violation.  Numbers are printed with 12 significant digits.
"""
from __future__ import annotations

import argparse
import json
import math
import sys
import warnings

from . import interference as itf
from .discrepancy import HEADER as DISCREPANCY_HEADER, discrepancy_report
from .errors import DomainError, OutOfFitRangeWarning, ParameterError
from .experiments import (OFFSET_HEADER, REFERENCE_MAPE_PERCENT, SWEEP_HEADER, SweepSpec, Swept, Testbed,
                          default_values, ground_truth_experiment, mape, receiver_offset_study,
                          refit_approximations, run_sweep)
from .geometry import (ARMS, MIN_GAP_TIME_S, IntersectionGeometry, implied_gap_time, lane_horizontal_angles,
                       table1_data)
from .interference import BoundMode, DistanceModel, Mode
from .io import csv_text, fmt12, round12
from .optimize import (BOX_D_RANGE, BOX_H_RANGE, DEFAULT_D_STEP, DEFAULT_H_STEP, optimize_bound)
from .scenario import load_scenario
from .traffic import DEFAULT_MIN_GAP_FT, stochastic_scenario, uniform_scenario
from .transmission import DEFAULT_BETA, Sense, naive_range, transmission_range_bound

EXIT_OK, EXIT_USAGE, EXIT_DOMAIN = 0, 2, 3

MODE_ALIASES = {
    "exact": Mode.EXACT,
    "finite": Mode.FINITE_PAPER_DISTANCES,
    "printed": Mode.BOUND_PRINTED,
    "derived": Mode.BOUND_DERIVED,
    "fitted": Mode.BOUND_FITTED,
}


def _floats(text: str) -> list[float]:
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}")


def _modes(text: str) -> list[Mode]:
    out = []
    for name in text.split(","):
        name = name.strip().lower()
        if name not in MODE_ALIASES:
            raise argparse.ArgumentTypeError(f"unknown mode {name!r}; choose from {', '.join(MODE_ALIASES)}")
        out.append(MODE_ALIASES[name])
    return out


def _json_value(v):
    v = round12(v)
    if isinstance(v, float) and not math.isfinite(v):
        return str(v)
    return v


def _emit(args, record: dict):
    if args.json:
        print(json.dumps({k: _json_value(v) for k, v in record.items()}))
    elif args.csv:
        sys.stdout.write(csv_text(list(record), [list(record.values())], fmt12))
    else:
        width = max(len(k) for k in record)
        for k, v in record.items():
            print(f"{k:<{width}} = {fmt12(v)}")


def _emit_table(args, header, rows):
    if args.json:
        print(json.dumps([{k: _json_value(v) for k, v in zip(header, r)} for r in rows]))
    else:
        sys.stdout.write(csv_text(header, rows, fmt12))


def _bound_value(mode: str, h: float, D: float, alpha: float):
    """(total, per-arm dict or None) for a bound family name."""
    if mode == "fitted":
        return itf.nonorthogonal_bound_fitted(h, D, alpha), None
    b = itf.proposition1_bound(h, IntersectionGeometry(D, alpha), BoundMode(mode.upper()))
    return b.total, b


# --------------------------------------------------------------------------
# subcommands


def cmd_bound(args):
    total, b = _bound_value(args.mode, args.h, args.D, args.alpha)
    rec = {"mode": args.mode, "h_ft": args.h, "D_ft": args.D, "alpha_deg": args.alpha}
    if b is not None:
        rec.update(north=b.north, south=b.south, east=b.east, west=b.west)
    else:
        rec["in_fit_range"] = bool(itf.in_fit_range(args.h, args.D))
    rec["lambda_ft_neg2"] = total
    _emit(args, rec)


def _scenario_from_args(args):
    if args.scenario:
        return load_scenario(args.scenario, seed=args.seed)
    geom = IntersectionGeometry(args.D, args.alpha, arm_length_ft=args.arm_length)
    counts = {a: args.n for a in ARMS}
    if args.stochastic:
        return stochastic_scenario(geom, args.h, counts, args.seed or 0, args.min_gap)
    return uniform_scenario(geom, args.h, counts)


def cmd_exact(args):
    sc = _scenario_from_args(args)
    b = itf.exact_interference(sc, DistanceModel(args.distance_model.upper()))
    _emit(args, {"distance_model": args.distance_model, "north": b.north, "south": b.south,
                 "east": b.east, "west": b.west, "lambda_ft_neg2": b.total})


def cmd_range(args):
    if args.lam is not None:
        lam = args.lam
    elif args.h is not None and args.D is not None:
        lam, _ = _bound_value(args.mode, args.h, args.D, args.alpha)
    else:
        raise ParameterError("range needs --lambda or both --h and --D")
    res = transmission_range_bound(args.beta, lam)
    rec = {"beta": args.beta, "lambda_ft_neg2": lam, "r_b_ft": res.r_b_ft}
    if lam > 0:
        rec["r_naive_ft"] = naive_range(args.beta, lam)
        rec["r_b_over_r_naive"] = res.r_b_ft / rec["r_naive_ft"]
    _emit(args, rec)


def cmd_mp(args):
    senses = [Sense.MIN, Sense.MAX] if args.sense == "both" else [Sense(args.sense.upper())]
    bound = itf.bound_function(args.mode)
    if args.mode == "fitted":
        itf.coefficients_for(args.alpha)
    print("note: the default sense is MIN (tightest bound); MAX gives the worst case "
          "and hence the most conservative range. Use --sense both to see both.", file=sys.stderr)
    records = []
    for s in senses:
        r = optimize_bound(bound, s, (args.h_min, args.h_max), (args.D_min, args.D_max),
                           args.h_step, args.D_step, args.alpha, unsafe_box=args.unsafe_box,
                           workers=args.workers)
        records.append({"sense": s.value, "mode": args.mode, "alpha_deg": args.alpha,
                        "lambda_ft_neg2": r.objective_value, "arg_h_ft": r.arg_h_ft, "arg_D_ft": r.arg_D_ft,
                        "grid_points": r.n_points,
                        "r_b_ft": transmission_range_bound(args.beta, r.objective_value, s).r_b_ft})
    if len(records) == 1:
        _emit(args, records[0])
    else:
        _emit_table(args, list(records[0]), [list(r.values()) for r in records])


def cmd_sweep(args):
    swept = Swept(args.param)
    values = args.values if args.values else default_values(swept)
    spec = SweepSpec(swept, tuple(values), h=args.h, D=args.D, alpha_deg=args.alpha,
                     modes=tuple(args.modes), beta=args.beta,
                     distance_model=DistanceModel(args.distance_model.upper()),
                     vehicles_per_arm=args.n, arm_length_ft=args.arm_length)
    rows = run_sweep(spec)
    text = csv_text(SWEEP_HEADER, (r.as_row() for r in rows), fmt12)
    if args.out and args.out != "-":
        with open(args.out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def cmd_mape(args):
    if args.truth is not None or args.model is not None:
        if args.truth is None or args.model is None:
            raise ParameterError("--truth and --model must be given together")
        rep = mape(args.truth, args.model)
        _emit(args, {"mape_percent": rep.mape_percent, "timesteps": rep.timestep_count})
        return
    tb = Testbed(args.testbed.upper())
    rep = ground_truth_experiment(tb, args.timesteps, args.seed or 0, args.h, args.min_gap, args.n)
    _emit(args, {"testbed": tb.value, "timesteps": rep.timestep_count, "seed": args.seed or 0,
                 "mape_percent": rep.mape_percent, "mean_realized_spacing_ft": rep.mean_realized_spacing_ft,
                 "reference_mape_percent": REFERENCE_MAPE_PERCENT[tb.value]})


def cmd_multilane(args):
    geom = IntersectionGeometry(args.D, args.alpha, lanes_per_arm=args.lanes, lane_width_ft=args.lane_width,
                                reference_lane_index=args.ref_index)
    ref_dist = args.reference_distance or args.D
    thetas = lane_horizontal_angles(geom, ref_dist)
    base, _ = _bound_value(args.mode, args.h, args.D, args.alpha)
    factor = itf.multilane_factor(thetas, geom.ref_lane, args.literal_last_line)
    rec = {"lanes": args.lanes, "reference_lane": geom.ref_lane, "base_lambda_ft_neg2": base,
           "factor": factor, "lambda_overall_ft_neg2": base * factor}
    rec.update({f"theta_{m}_rad": t for m, t in enumerate(thetas)})
    _emit(args, rec)


def cmd_table1(args):
    header = ["speed_mph", "c_ft", "alpha_deg", "implied_t_g_s", "meets_3s_floor"]
    rows = []
    for v, c, a in table1_data():
        t = implied_gap_time(v, c, a)
        rows.append([v, c, a, t, t >= MIN_GAP_TIME_S])
    _emit_table(args, header, rows)


def cmd_fit(args):
    from .experiments import default_ratio_grid
    rep = refit_approximations(default_ratio_grid(args.points))
    print(rep.to_json(indent=2))


def cmd_offset(args):
    sc = _scenario_from_args(args)
    rows = receiver_offset_study(sc, args.offsets)
    _emit_table(args, list(OFFSET_HEADER), [r.as_row() for r in rows])


def cmd_discrepancy(args):
    rows = discrepancy_report(args.h, args.D, args.beta)
    _emit_table(args, list(DISCREPANCY_HEADER), [r.as_row() for r in rows])


# --------------------------------------------------------------------------
# parser


def _add_output(p):
    g = p.add_mutually_exclusive_group()
    g.add_argument("--json", action="store_true", help="JSON output")
    g.add_argument("--csv", action="store_true", help="CSV output")


def _add_point(p, h=None, D=None, alpha=90.0):
    p.add_argument("--h", type=float, default=h, help="mean spacing headway, ft")
    p.add_argument("--D", type=float, default=D, help="intersection diameter, ft")
    p.add_argument("--alpha", type=float, default=alpha, help="intersection angle, degrees")


def _add_scenario(p):
    p.add_argument("--scenario", help="JSON scenario file")
    p.add_argument("--h", type=float, default=50.0, help="mean spacing, ft")
    p.add_argument("--D", type=float, default=40.0)
    p.add_argument("--alpha", type=float, default=90.0)
    p.add_argument("--n", type=int, default=40, help="vehicles per arm")
    p.add_argument("--arm-length", type=float, default=2000.0)
    p.add_argument("--stochastic", action="store_true", help="shifted-exponential gaps instead of uniform")
    p.add_argument("--min-gap", type=float, default=DEFAULT_MIN_GAP_FT)
    p.add_argument("--seed", type=int, default=None)


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="v2vint",
                                 description="Worst-case V2V interference and transmission range at intersections.")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("bound", help="closed-form interference bound at one (h, D, alpha)")
    _add_point(p, 50.0, 40.0)
    p.add_argument("--mode", choices=["printed", "derived", "fitted"], default="derived")
    _add_output(p)
    p.set_defaults(func=cmd_bound)

    p = sub.add_parser("exact", help="per-vehicle interference for a placement")
    _add_scenario(p)
    p.add_argument("--distance-model", choices=["paper", "coordinate"], default="paper")
    _add_output(p)
    p.set_defaults(func=cmd_exact)

    p = sub.add_parser("range", help="transmission-range bound r_b")
    p.add_argument("--beta", type=float, default=DEFAULT_BETA)
    p.add_argument("--lambda", dest="lam", type=float, default=None, help="interference, ft^-2")
    _add_point(p)
    p.add_argument("--mode", choices=["printed", "derived", "fitted"], default="fitted")
    _add_output(p)
    p.set_defaults(func=cmd_range)

    p = sub.add_parser("mp", help="grid-search the bound over the (h, D) box")
    p.add_argument("--mode", choices=["printed", "derived", "fitted"], default="fitted")
    p.add_argument("--alpha", type=float, default=90.0)
    p.add_argument("--sense", choices=["min", "max", "both"], default="min")
    p.add_argument("--h-min", type=float, default=BOX_H_RANGE[0])
    p.add_argument("--h-max", type=float, default=BOX_H_RANGE[1])
    p.add_argument("--D-min", type=float, default=BOX_D_RANGE[0])
    p.add_argument("--D-max", type=float, default=BOX_D_RANGE[1])
    p.add_argument("--h-step", type=float, default=DEFAULT_H_STEP)
    p.add_argument("--D-step", type=float, default=DEFAULT_D_STEP)
    p.add_argument("--unsafe-box", action="store_true", help="allow a box outside 1.5<h<=86, 28<=D<=125")
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--beta", type=float, default=DEFAULT_BETA)
    _add_output(p)
    p.set_defaults(func=cmd_mp)

    p = sub.add_parser("sweep", help="CSV sweep over h, D or alpha")
    p.add_argument("--param", choices=[s.value for s in Swept], default="h")
    p.add_argument("--values", type=_floats, default=None, help="comma-separated values (default: standard set)")
    _add_point(p, 50.0, 40.0)
    p.add_argument("--modes", type=_modes, default=[Mode.EXACT, Mode.BOUND_DERIVED, Mode.BOUND_FITTED],
                   help="comma-separated: " + ",".join(MODE_ALIASES))
    p.add_argument("--distance-model", choices=["paper", "coordinate"], default="coordinate")
    p.add_argument("--n", type=int, default=None, help="vehicles per arm for exact/finite modes")
    p.add_argument("--arm-length", type=float, default=2000.0)
    p.add_argument("--beta", type=float, default=DEFAULT_BETA)
    p.add_argument("--seed", type=int, default=None, help="accepted for uniformity; sweeps are deterministic")
    p.add_argument("--out", default="-")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("mape", help="MAPE of the per-arm series against per-vehicle ground truth")
    p.add_argument("--testbed", choices=["orthogonal", "nonorthogonal"], default="orthogonal")
    p.add_argument("--timesteps", type=int, default=2000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--h", type=float, default=50.0, help="configured mean spacing, ft")
    p.add_argument("--min-gap", type=float, default=DEFAULT_MIN_GAP_FT)
    p.add_argument("--n", type=int, default=40, help="vehicles per arm")
    p.add_argument("--truth", type=_floats, default=None, help="explicit truth series")
    p.add_argument("--model", type=_floats, default=None, help="explicit model series")
    _add_output(p)
    p.set_defaults(func=cmd_mape)

    p = sub.add_parser("multilane", help="multi-lane interference scaling")
    _add_point(p, 50.0, 40.0)
    p.add_argument("--mode", choices=["printed", "derived", "fitted"], default="derived")
    p.add_argument("--lanes", type=int, default=4)
    p.add_argument("--lane-width", type=float, default=12.0)
    p.add_argument("--ref-index", type=int, default=None, help="0-based reference lane (default lanes//2)")
    p.add_argument("--reference-distance", type=float, default=None, help="ft (default D)")
    p.add_argument("--literal-last-line", action="store_true",
                   help="use (1 - theta^2) ratios instead of (2 - theta^2)")
    _add_output(p)
    p.set_defaults(func=cmd_multilane)

    p = sub.add_parser("table1", help="sight-distance table with implied gap times")
    _add_output(p)
    p.set_defaults(func=cmd_table1)

    p = sub.add_parser("fit", help="refit the polygamma approximations (JSON report)")
    p.add_argument("--points", type=int, default=200)
    p.set_defaults(func=cmd_fit)

    p = sub.add_parser("offset", help="interference as the receiver moves upstream")
    _add_scenario(p)
    p.add_argument("--offsets", type=_floats, default=[0.0, 50.0, 100.0])
    _add_output(p)
    p.set_defaults(func=cmd_offset)

    p = sub.add_parser("discrepancy", help="CSV of formula-variant gaps")
    p.add_argument("--h", type=float, default=30.0)
    p.add_argument("--D", type=float, default=60.0)
    p.add_argument("--beta", type=float, default=DEFAULT_BETA)
    _add_output(p)
    p.set_defaults(func=cmd_discrepancy)
    return ap


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        with warnings.catch_warnings():
            warnings.simplefilter("always", OutOfFitRangeWarning)
            warnings.formatwarning = lambda msg, cat, *a, **k: f"warning: {msg}\n"
            args.func(args)
    except DomainError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except ParameterError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
