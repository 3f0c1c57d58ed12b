import numpy as np
import pytest
from hypothesis import given, strategies as st
from hypothesis.extra.numpy import arrays

from nsfhedge.bootstrap import BootstrapConfig, ensemble_prices
from nsfhedge.contour import Contour, SurfaceSpec, extract_contour, surface_value
from nsfhedge.criteria import (
    ALL_CRITERIA,
    CriterionKind,
    criterion_values,
    evaluate_criterion,
    optimize_over_contour,
    scan_contour,
)
from nsfhedge.hedging import ResidualLedger, SimulationError
from nsfhedge.pricing import OptionTerms


def ledger(res, u=1.02, d=0.98, r=0.0):
    res = np.asarray(res, dtype=float)
    return ResidualLedger(
        u=u, d=d, r=r, initial_cost=0.0, residuals=res,
        setup_costs=np.zeros_like(res), liquidations=res.copy(), accumulated=float(res.sum()),
    )


def test_directions_fixed():
    assert [k.direction for k in ALL_CRITERIA] == ["max", "min", "min", "max"]
    assert len(set(CriterionKind)) == 4


def test_all_positive_residuals_give_certain_profit():
    leds = [ledger([0.1, 0.3]), ledger([0.2, 0.01])]
    assert evaluate_criterion(CriterionKind.ProbPositiveProfit, leds, 0.0).value == 1.0


def test_shortfall_example_is_negative():
    v = evaluate_criterion(CriterionKind.ExpectedShortfall, [ledger([0.1, 0.2])], 0.0)
    assert v.value == pytest.approx(-0.1, abs=1e-15)
    assert v.direction == "min"


def test_squared_residuals_example():
    assert evaluate_criterion(CriterionKind.ExpectedSquaredResiduals, [ledger([1.0, 2.0])], 0.0).value == 5.0


def test_expected_profit_compounds():
    v = evaluate_criterion(CriterionKind.ExpectedAccumulatedProfit, [ledger([1.0, 1.0], r=0.1)], 0.1)
    assert v.value == pytest.approx(2.1, abs=1e-15)


def test_zero_accumulated_counts_as_failure():
    assert evaluate_criterion(CriterionKind.ProbPositiveProfit, [ledger([0.0, 0.0]), ledger([1.0, -1.0])], 0.0).value == 0.0


def test_evaluate_errors():
    with pytest.raises(ValueError):
        evaluate_criterion(CriterionKind.ExpectedShortfall, [], 0.0)
    with pytest.raises(ValueError):
        evaluate_criterion(CriterionKind.ExpectedShortfall, [ledger([1.0]), ledger([1.0], u=1.03)], 0.0)
    with pytest.raises(ValueError):
        evaluate_criterion(CriterionKind.ExpectedShortfall, [ledger([1.0], r=0.01)], 0.0)


residual_samples = arrays(np.float64, st.tuples(st.integers(1, 30), st.integers(1, 10)), elements=st.floats(-5, 5, allow_subnormal=False))


@given(residual_samples)
def test_value_ranges(res):
    vals = criterion_values(res, 0.0)
    assert 0.0 <= vals[CriterionKind.ProbPositiveProfit] <= 1.0
    assert vals[CriterionKind.ExpectedSquaredResiduals] >= 0.0


@given(residual_samples, st.floats(0.0, 3.0))
def test_prob_positive_monotone_under_translation(res, c):
    before = criterion_values(res, 0.0)[CriterionKind.ProbPositiveProfit]
    after = criterion_values(res + c, 0.0)[CriterionKind.ProbPositiveProfit]
    assert after >= before


@pytest.fixture
def small_case(narrow_pool):
    spec = SurfaceSpec(n=10, R=1.0)
    contour = extract_contour(spec, surface_value(spec, 1.03, 0.97), 20)
    prices = ensemble_prices(narrow_pool, BootstrapConfig(n=10, s0=100.0, num_paths=200, seed=3))
    return contour, prices, OptionTerms(n=10, s0=100.0, K=100.0)


def test_extremality_and_tie_break(small_case):
    contour, prices, terms = small_case
    scan = scan_contour(contour, prices, terms)
    report = optimize_over_contour(contour, prices, terms)
    for row in report.rows:
        vals = scan.values[row.kind]
        best = vals.max() if row.kind.maximize else vals.min()
        assert row.value == best
        first = int(np.flatnonzero(vals == best)[0])
        assert (row.u, row.d) == tuple(contour.points[first])


def test_common_random_numbers(small_case):
    contour, prices, terms = small_case
    a = optimize_over_contour(contour, prices, terms)
    b = optimize_over_contour(contour, prices.copy(), terms)
    assert [repr(r) for r in a.rows] == [repr(r) for r in b.rows]


def test_singleton_contour_is_optimal_everywhere(small_case):
    _, prices, terms = small_case
    single = Contour(level=0.0, points=np.array([[1.03, 0.97]]), tolerance=0.0)
    report = optimize_over_contour(single, prices, terms)
    assert len(report.rows) == 4
    assert all((row.u, row.d) == (1.03, 0.97) for row in report.rows)


def test_all_jumps_inside_gives_probability_one(small_case):
    contour, prices, terms = small_case
    inside = contour.points[(contour.d < 0.98) & (contour.u > 1.02)]
    assert len(inside)
    report = optimize_over_contour(contour, prices, terms, kinds=[CriterionKind.ProbPositiveProfit])
    assert [r.kind for r in report.rows] == [CriterionKind.ProbPositiveProfit]
    assert report.rows[0].value == 1.0


def test_simulation_error_names_point(small_case):
    _, prices, _ = small_case
    terms = OptionTerms(n=10, s0=100.0, K=100.0, r=0.01)  # 1+r above the contour's u
    bad = Contour(level=0.0, points=np.array([[1.005, 0.97]]), tolerance=0.0)
    with pytest.raises(SimulationError, match="1.005"):
        scan_contour(bad, prices, terms)


def test_expected_profit_spread_diagnostic(small_case):
    contour, prices, terms = small_case
    scan = scan_contour(contour, prices, terms)
    spread = scan.spread(CriterionKind.ExpectedAccumulatedProfit)
    print(f"E(Delta_n) spread over contour (n=10): {spread:.6f}")
    assert spread >= 0.0
