"""CSV of formula variants evaluated side by side at one (h, D) point."""
import argparse

from v2vint.discrepancy import discrepancy_report, write_discrepancy_csv


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--h", type=float, default=30.0)
    ap.add_argument("--D", type=float, default=60.0)
    ap.add_argument("--beta", type=float, default=0.15)
    ap.add_argument("--out", default="-", help="path, or - for stdout")
    args = ap.parse_args()
    write_discrepancy_csv(args.out, discrepancy_report(args.h, args.D, args.beta))


if __name__ == "__main__":
    main()
