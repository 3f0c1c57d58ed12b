from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

from .bootstrap import JumpPoolError, PriceDataError
from .contour import EmptyContourError
from .hedging import SimulationError
from .pipeline import RunConfig, run_pipeline
from .pricing import DomainError

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_EMPTY_CONTOUR = 3
EXIT_SIMULATION = 4


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="nsfhedge",
        description="Select market-calibrated (u,d) hedges by bootstrapped risk criteria.",
    )
    p.add_argument("--prices", required=True, type=Path, help="CSV with header date,close")
    p.add_argument("--strike", required=True, type=float)
    p.add_argument("--option-price", required=True, type=float, help="quoted option price x0")
    p.add_argument("--spot", required=True, type=float, help="stock price s0 at the quote")
    p.add_argument("--days", required=True, type=int, help="trading days to expiry")
    p.add_argument("--rate", type=float, default=0.0, help="risk-free rate per trading day")
    p.add_argument("--contour-rate", type=float, default=0.0, help="rate used when calibrating the contour")
    p.add_argument("--grid-size", type=int, default=90)
    p.add_argument("--u-max", type=float, default=1.10)
    p.add_argument("--d-min", type=float, default=0.90)
    p.add_argument("--paths", type=int, default=1000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--phase", type=int, default=0, help="weekly pattern offset of the first draw")
    p.add_argument("--option-id", default="")
    p.add_argument("--check", action="store_true", help="cross-check residuals by two routes")
    p.add_argument("--out", required=True, type=Path, help="output directory")
    p.add_argument("-v", "--verbose", action="store_true")
    return p


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(message)s")
    try:
        config = RunConfig(
            prices_path=args.prices,
            strike=args.strike,
            option_price=args.option_price,
            spot=args.spot,
            days=args.days,
            output_dir=args.out,
            rate=args.rate,
            contour_rate=args.contour_rate,
            grid_size=args.grid_size,
            u_max=args.u_max,
            d_min=args.d_min,
            num_paths=args.paths,
            seed=args.seed,
            phase=args.phase,
            option_id=args.option_id,
            check=args.check,
        )
        artifacts = run_pipeline(config)
    except EmptyContourError as exc:
        print(f"error: option price not attainable on the value surface: {exc}", file=sys.stderr)
        return EXIT_EMPTY_CONTOUR
    except SimulationError as exc:
        print(f"error: simulation failed: {exc}", file=sys.stderr)
        return EXIT_SIMULATION
    except (PriceDataError, JumpPoolError, DomainError, ValueError) as exc:
        print(f"error: bad input: {exc}", file=sys.stderr)
        return EXIT_INPUT
    sys.stdout.write(artifacts.report_txt.read_text(encoding="utf-8"))
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
