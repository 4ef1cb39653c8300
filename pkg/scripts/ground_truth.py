"""Snapshot MAPE of the per-arm series against per-vehicle summation, both testbeds."""
import argparse
import json
import time

from v2vint.experiments import REFERENCE_MAPE_PERCENT, Testbed, ground_truth_experiment


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--timesteps", type=int, default=2000)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--mean-spacing", type=float, default=50.0)
    args = ap.parse_args()
    for tb in Testbed:
        t0 = time.perf_counter()
        rep = ground_truth_experiment(tb, args.timesteps, args.seed, args.mean_spacing)
        print(json.dumps({
            "testbed": tb.value,
            "timesteps": rep.timestep_count,
            "seed": args.seed,
            "mape_percent": rep.mape_percent,
            "mean_realized_spacing_ft": rep.mean_realized_spacing_ft,
            "reference_mape_percent": REFERENCE_MAPE_PERCENT[tb.value],
            "seconds": round(time.perf_counter() - t0, 3),
        }))


if __name__ == "__main__":
    main()
