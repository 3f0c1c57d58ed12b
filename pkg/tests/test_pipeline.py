import numpy as np
import pytest

from nsfhedge.cli import EXIT_EMPTY_CONTOUR, EXIT_INPUT, EXIT_OK, EXIT_SIMULATION, main
from nsfhedge.criteria import CriterionKind
from nsfhedge.pipeline import RunConfig, run_pipeline
from nsfhedge.report import parse_kv
from oracles import one_period_contour_d

ARTIFACTS = ("report.txt", "report.kv", "contour.tsv", "surface.tsv", "delta_samples.tsv")


def args(price_csv, out, **over):
    opts = {
        "--prices": price_csv, "--strike": 100, "--option-price": 10, "--spot": 100, "--days": 1,
        "--u-max": 1.4, "--d-min": 0.5, "--grid-size": 41, "--paths": 50, "--seed": 9, "--out": out,
    }
    opts.update(over)
    return [str(x) for kv in opts.items() for x in kv]


def test_one_period_fixture(price_csv, tmp_path, capsys):
    out = tmp_path / "run"
    assert main(args(price_csv, out) + ["--check"]) == EXIT_OK
    for name in ARTIFACTS:
        assert (out / name).is_file()
    contour = np.loadtxt(out / "contour.tsv", skiprows=1)
    assert np.allclose(contour[:, 1], one_period_contour_d(contour[:, 0], 0.1), atol=1e-8, rtol=0)
    report = parse_kv((out / "report.kv").read_text(encoding="utf-8"))
    assert [r.kind for r in report.rows] == list(CriterionKind)
    assert report.metadata["seed"] == "9"
    assert report.metadata["c_star"] == repr(0.1)
    assert "Risk criterion" in capsys.readouterr().out
    delta = (out / "delta_samples.tsv").read_text().splitlines()
    assert delta[0] == "criterion\tpath\tdelta_n"
    assert len(delta) == 1 + 4 * 50
    surface = np.loadtxt(out / "surface.tsv", skiprows=1)
    assert surface.shape[1] == 3


def test_byte_identical_reruns(price_csv, tmp_path):
    out = tmp_path / "run"
    assert main(args(price_csv, out, **{"--days": 10, "--option-price": 2.5, "--u-max": 1.1, "--d-min": 0.9})) == EXIT_OK
    first = {name: (out / name).read_bytes() for name in ARTIFACTS}
    assert main(args(price_csv, out, **{"--days": 10, "--option-price": 2.5, "--u-max": 1.1, "--d-min": 0.9})) == EXIT_OK
    assert first == {name: (out / name).read_bytes() for name in ARTIFACTS}
    assert not list(out.glob("*.tmp"))


def test_unattainable_price_exit_code(price_csv, tmp_path, capsys):
    assert main(args(price_csv, tmp_path / "o", **{"--option-price": 60})) == EXIT_EMPTY_CONTOUR
    assert "not attainable" in capsys.readouterr().err


def test_bad_csv_exit_code(tmp_path):
    bad = tmp_path / "bad.csv"
    bad.write_text("date,close\n2004-01-02,abc\n")
    assert main(args(bad, tmp_path / "o")) == EXIT_INPUT
    assert main(args(tmp_path / "missing.csv", tmp_path / "o")) == EXIT_INPUT


def test_missing_weekend_group_exit_code(tmp_path):
    only_next_day = tmp_path / "p.csv"
    only_next_day.write_text("date,close\n2004-01-05,10\n2004-01-06,10.1\n2004-01-07,10.2\n")
    assert main(args(only_next_day, tmp_path / "o")) == EXIT_INPUT


def test_simulation_error_exit_code(price_csv, tmp_path, capsys):
    # contour calibrated at r=0 contains u <= 1+r for the hedging rate
    assert main(args(price_csv, tmp_path / "o", **{"--rate": 0.2})) == EXIT_SIMULATION
    assert "(u, d)" in capsys.readouterr().err


def test_run_pipeline_api(price_csv, tmp_path):
    cfg = RunConfig(
        prices_path=price_csv, strike=100.0, option_price=10.0, spot=100.0, days=1,
        output_dir=tmp_path / "api", u_max=1.4, d_min=0.5, grid_size=11, num_paths=20, seed=1,
    )
    art = run_pipeline(cfg)
    assert art.contour_points == len(np.loadtxt(art.contour_file, skiprows=1))
    assert parse_kv(art.report_kv.read_text(encoding="utf-8")) == art.report
    assert art.report.metadata["config.seed"] == "1"
