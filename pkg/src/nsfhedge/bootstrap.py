"""Historical jump pools and bootstrap price paths.

Daily closes are turned into relative jumps, split by the calendar gap that
produced them, and resampled with replacement in a weekly pattern of four
next-day jumps followed by one weekend/holiday jump.
"""
from __future__ import annotations

import csv
import datetime as dt
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .hedging import PricePath

WEEK_PATTERN = 5  # four next-day draws, then one weekend/holiday draw


class PriceDataError(ValueError):
    """Unreadable or ill-formed price history."""


class JumpPoolError(ValueError):
    """A jump group needed for sampling is empty."""


@dataclass(frozen=True, slots=True)
class PriceRecord:
    date: dt.date
    close: float


@dataclass(frozen=True)
class JumpPool:
    next_day: np.ndarray
    weekend_holiday: np.ndarray

    def __post_init__(self) -> None:
        for name in ("next_day", "weekend_holiday"):
            arr = np.array(getattr(self, name), dtype=float)
            if arr.ndim != 1:
                raise JumpPoolError(f"{name} must be one-dimensional")
            if np.any(arr <= 0) or not np.all(np.isfinite(arr)):
                raise JumpPoolError(f"{name} jumps must be finite and positive")
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)

    @property
    def size(self) -> int:
        return self.next_day.size + self.weekend_holiday.size

    def require_nonempty(self) -> None:
        if self.next_day.size == 0:
            raise JumpPoolError("next-day jump group is empty")
        if self.weekend_holiday.size == 0:
            raise JumpPoolError("weekend/holiday jump group is empty")


@dataclass(frozen=True)
class BootstrapConfig:
    n: int
    s0: float
    num_paths: int = 1000
    seed: int = 0
    phase: int = 0  # position in the weekly pattern of the first draw

    def __post_init__(self) -> None:
        if self.num_paths < 1 or self.n < 1:
            raise ValueError("need num_paths >= 1 and n >= 1")
        if not self.s0 > 0:
            raise ValueError("s0 must be positive")
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must be an unsigned 64-bit integer")


def read_price_csv(path: str | Path) -> list[PriceRecord]:
    """Parse a ``date,close`` CSV with ISO dates in ascending order."""
    try:
        with open(path, newline="") as fh:
            reader = csv.DictReader(fh)
            if reader.fieldnames is None or [f.strip() for f in reader.fieldnames] != ["date", "close"]:
                raise PriceDataError(f"{path}: expected header 'date,close'")
            rows = []
            for lineno, row in enumerate(reader, start=2):
                try:
                    date = dt.date.fromisoformat(row["date"].strip())
                    close = float(row["close"])
                except (ValueError, AttributeError, TypeError) as exc:
                    raise PriceDataError(f"{path}:{lineno}: {exc}") from None
                rows.append(PriceRecord(date, close))
    except OSError as exc:
        raise PriceDataError(f"cannot read {path}: {exc}") from exc
    validate_records(rows)
    return rows


def validate_records(records: Sequence[PriceRecord]) -> None:
    for i, rec in enumerate(records):
        if not (np.isfinite(rec.close) and rec.close > 0):
            raise PriceDataError(f"record {i}: close must be positive, got {rec.close}")
        if i and rec.date <= records[i - 1].date:
            raise PriceDataError(f"record {i}: dates must be strictly increasing")


def extract_jumps(records: Sequence[PriceRecord], require_both: bool = True) -> JumpPool:
    """Group consecutive close-to-close jumps by calendar gap.

    A one-day gap is a next-day jump; any longer gap (weekends, mid-week
    holidays, long weekends) goes to the weekend/holiday group. Unless
    ``require_both`` is false, an empty group is an error.
    """
    if len(records) < 2:
        raise PriceDataError("need at least two price records")
    validate_records(records)
    next_day, weekend = [], []
    for prev, cur in zip(records, records[1:]):
        jump = cur.close / prev.close
        gap = (cur.date - prev.date).days
        (next_day if gap == 1 else weekend).append(jump)
    pool = JumpPool(np.array(next_day), np.array(weekend))
    if require_both:
        pool.require_nonempty()
    return pool


def _weekend_slots(n: int, phase: int) -> np.ndarray:
    return (np.arange(n) + phase) % WEEK_PATTERN == WEEK_PATTERN - 1


def path_rng(seed: int, path_index: int) -> np.random.Generator:
    # one independent stream per path: results do not depend on generation order
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed, spawn_key=(path_index,))))


def _draw_jumps(pool: JumpPool, config: BootstrapConfig, path_index: int) -> np.ndarray:
    if not 0 <= path_index < config.num_paths:
        raise IndexError(f"path index {path_index} outside [0, {config.num_paths})")
    pool.require_nonempty()
    rng = path_rng(config.seed, path_index)
    weekend = _weekend_slots(config.n, config.phase)
    jumps = np.empty(config.n)
    jumps[~weekend] = pool.next_day[rng.integers(pool.next_day.size, size=int((~weekend).sum()))]
    jumps[weekend] = pool.weekend_holiday[rng.integers(pool.weekend_holiday.size, size=int(weekend.sum()))]
    return jumps


def generate_path(pool: JumpPool, config: BootstrapConfig, path_index: int) -> PricePath:
    return PricePath.from_jumps(config.s0, _draw_jumps(pool, config, path_index))


def generate_ensemble(pool: JumpPool, config: BootstrapConfig) -> list[PricePath]:
    return [generate_path(pool, config, i) for i in range(config.num_paths)]


def ensemble_prices(pool: JumpPool, config: BootstrapConfig) -> np.ndarray:
    """Price matrix of shape ``(num_paths, n + 1)``; row ``i`` equals path ``i``."""
    return np.stack([p.prices for p in generate_ensemble(pool, config)])


def stack_paths(paths: Iterable[PricePath]) -> np.ndarray:
    return np.stack([p.prices for p in paths])
