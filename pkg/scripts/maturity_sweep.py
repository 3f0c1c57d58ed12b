"""Optimal (u,d) per criterion as the time to expiry varies.

The option price at each maturity is set from a reference lattice (u_ref, d_ref),
so every run calibrates to a non-empty contour.
"""
import argparse
from pathlib import Path

from nsfhedge.bootstrap import BootstrapConfig, ensemble_prices, extract_jumps, read_price_csv
from nsfhedge.contour import SurfaceSpec, extract_contour, surface_value
from nsfhedge.criteria import optimize_over_contour
from nsfhedge.pricing import OptionTerms


def main():
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("prices", type=Path)
    p.add_argument("--days", type=int, nargs="+", default=[10, 20, 30, 40])
    p.add_argument("--moneyness", type=float, default=1.0, help="strike over spot")
    p.add_argument("--u-ref", type=float, default=1.03)
    p.add_argument("--d-ref", type=float, default=0.97)
    p.add_argument("--paths", type=int, default=1000)
    p.add_argument("--grid-size", type=int, default=90)
    p.add_argument("--seed", type=int, default=0)
    args = p.parse_args()

    records = read_price_csv(args.prices)
    pool = extract_jumps(records)
    s0 = records[-1].close
    print("days\tcriterion\tu\td\tvalue")
    for n in args.days:
        spec = SurfaceSpec(n=n, R=args.moneyness)
        contour = extract_contour(spec, surface_value(spec, args.u_ref, args.d_ref), args.grid_size)
        config = BootstrapConfig(n=n, s0=s0, num_paths=args.paths, seed=args.seed)
        prices = ensemble_prices(pool, config)
        report = optimize_over_contour(contour, prices, OptionTerms(n=n, s0=s0, K=args.moneyness * s0))
        for row in report.rows:
            print(f"{n}\t{row.kind.value}\t{row.u:.4f}\t{row.d:.4f}\t{row.value:.4f}")


if __name__ == "__main__":
    main()
