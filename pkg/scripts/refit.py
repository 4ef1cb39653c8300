"""Refit the trigamma power law and digamma log law; write the JSON report."""
import argparse
from pathlib import Path

from v2vint.experiments import default_ratio_grid, refit_approximations


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--points", type=int, default=200)
    ap.add_argument("--out", default="results/fit_report.json")
    args = ap.parse_args()
    rep = refit_approximations(default_ratio_grid(args.points))
    text = rep.to_json(indent=2)
    out = Path(args.out)
    out.parent.mkdir(parents=True, exist_ok=True)
    out.write_text(text + "\n", encoding="utf-8")
    print(text)


if __name__ == "__main__":
    main()
