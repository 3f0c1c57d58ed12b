"""Write a synthetic daily close series as a `date,close` CSV.

Closes follow a multiplicative walk with Student-t jumps on business days.
"""
import argparse
import datetime as dt

import numpy as np


def business_days(start, count):
    days, day = [], start
    while len(days) < count:
        if day.weekday() < 5:
            days.append(day)
        day += dt.timedelta(days=1)
    return days


def main():
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("out")
    p.add_argument("--days", type=int, default=520)
    p.add_argument("--s0", type=float, default=40.0)
    p.add_argument("--vol", type=float, default=0.012, help="scale of the daily jump")
    p.add_argument("--dof", type=float, default=4.0, help="Student-t degrees of freedom")
    p.add_argument("--start", type=dt.date.fromisoformat, default=dt.date(2003, 1, 6))
    p.add_argument("--seed", type=int, default=0)
    args = p.parse_args()

    rng = np.random.default_rng(args.seed)
    jumps = np.clip(1.0 + args.vol * rng.standard_t(args.dof, args.days - 1), 0.8, 1.25)
    closes = np.cumprod(np.concatenate([[args.s0], jumps]))
    with open(args.out, "w") as fh:
        fh.write("date,close\n")
        for day, close in zip(business_days(args.start, args.days), closes):
            fh.write(f"{day.isoformat()},{close:.4f}\n")


if __name__ == "__main__":
    main()
