import datetime as dt

import hypothesis
import numpy as np
import pytest

from nsfhedge.bootstrap import JumpPool, PriceRecord

np.seterr(all="warn", under="ignore")

hypothesis.settings.register_profile("default", max_examples=100, deadline=None)
hypothesis.settings.register_profile("fast", max_examples=10, deadline=None)
hypothesis.settings.load_profile("default")

_acceptance: dict[str, tuple[str, str]] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "acceptance(cid, title): acceptance criterion")


def pytest_runtest_logreport(report):
    if report.when != "call" and not (report.when == "setup" and report.failed):
        return
    marker = getattr(report, "acceptance", None)
    if marker:
        _acceptance[marker[0]] = (marker[1], report.outcome)


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    m = item.get_closest_marker("acceptance")
    if m is not None:
        rep.acceptance = m.args


def pytest_terminal_summary(terminalreporter):
    if not _acceptance:
        return
    terminalreporter.section("acceptance criteria")
    for cid in sorted(_acceptance, key=lambda c: int(c[2:])):
        title, outcome = _acceptance[cid]
        verdict = "PASS" if outcome == "passed" else "FAIL"
        terminalreporter.write_line(f"{cid:<5} {verdict}  {title}")


def business_days(start: dt.date, count: int) -> list[dt.date]:
    days, day = [], start
    while len(days) < count:
        if day.weekday() < 5:
            days.append(day)
        day += dt.timedelta(days=1)
    return days


def synthetic_records(jumps, start=dt.date(2003, 1, 6), s0=50.0) -> list[PriceRecord]:
    dates = business_days(start, len(jumps) + 1)
    closes = np.cumprod(np.concatenate([[s0], jumps]))
    return [PriceRecord(day, float(c)) for day, c in zip(dates, closes)]


def write_price_csv(path, records) -> None:
    lines = ["date,close"] + [f"{rec.date.isoformat()},{rec.close!r}" for rec in records]
    path.write_text("\n".join(lines) + "\n")


@pytest.fixture
def narrow_pool():
    """Both jump groups supported on [0.98, 1.02]."""
    rng = np.random.default_rng(2004)
    return JumpPool(rng.uniform(0.98, 1.02, 400), rng.uniform(0.98, 1.02, 100))


@pytest.fixture
def heavy_tailed_pool():
    rng = np.random.default_rng(1015)
    nd = 1.0 + 0.008 * rng.standard_t(3, 400)
    wk = 1.0 + 0.012 * rng.standard_t(3, 100)
    return JumpPool(np.clip(nd, 0.8, 1.25), np.clip(wk, 0.8, 1.25))


@pytest.fixture
def price_csv(tmp_path):
    rng = np.random.default_rng(7)
    path = tmp_path / "prices.csv"
    write_price_csv(path, synthetic_records(rng.uniform(0.985, 1.015, 520)))
    return path
