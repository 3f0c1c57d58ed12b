"""Investor risk criteria over bootstrap residuals and selection along a contour."""
from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .contour import Contour
from .hedging import PricePath, ResidualLedger, SimulationError, accumulate_residuals, simulate_residuals
from .pricing import DomainError, OptionTerms


class CriterionKind(enum.Enum):
    ProbPositiveProfit = "ProbPositiveProfit"
    ExpectedShortfall = "ExpectedShortfall"
    ExpectedSquaredResiduals = "ExpectedSquaredResiduals"
    ExpectedAccumulatedProfit = "ExpectedAccumulatedProfit"

    @property
    def maximize(self) -> bool:
        return self in (CriterionKind.ProbPositiveProfit, CriterionKind.ExpectedAccumulatedProfit)

    @property
    def direction(self) -> str:
        return "max" if self.maximize else "min"

    @property
    def label(self) -> str:
        return _LABELS[self]


_LABELS = {
    CriterionKind.ProbPositiveProfit: "P(Δ_n)>0",
    CriterionKind.ExpectedShortfall: "E(shortfall)",
    CriterionKind.ExpectedSquaredResiduals: "E(sum δ_k^2)",
    CriterionKind.ExpectedAccumulatedProfit: "E(Δ_n)",
}

ALL_CRITERIA = tuple(CriterionKind)


@dataclass(frozen=True)
class CriterionValue:
    kind: CriterionKind
    value: float

    @property
    def direction(self) -> str:
        return self.kind.direction


@dataclass(frozen=True)
class ReportRow:
    kind: CriterionKind
    u: float
    d: float
    value: float


@dataclass(frozen=True)
class RiskReport:
    rows: tuple[ReportRow, ...]
    metadata: dict[str, str] = field(default_factory=dict)

    def row(self, kind: CriterionKind) -> ReportRow:
        for row in self.rows:
            if row.kind is kind:
                return row
        raise KeyError(kind)


def criterion_values(
    residuals: np.ndarray, r: float, kinds: Iterable[CriterionKind] = ALL_CRITERIA
) -> dict[CriterionKind, float]:
    """Sample estimates of each criterion from residuals of shape ``(paths, n)``.

    Residuals enter the shortfall and squared criteria undiscounted; only the
    accumulated residual compounds at ``r``.
    """
    res = np.asarray(residuals, dtype=float)
    if res.ndim != 2 or res.shape[0] == 0 or res.shape[1] == 0:
        raise ValueError("need a nonempty (paths, n) residual sample")
    out = {}
    for kind in kinds:
        if kind is CriterionKind.ProbPositiveProfit:
            acc = accumulate_residuals(res, r)
            out[kind] = float(np.count_nonzero(acc > 0.0)) / res.shape[0]
        elif kind is CriterionKind.ExpectedShortfall:
            out[kind] = float(np.mean(np.max(-res, axis=1)))
        elif kind is CriterionKind.ExpectedSquaredResiduals:
            out[kind] = float(np.mean(np.sum(res * res, axis=1)))
        elif kind is CriterionKind.ExpectedAccumulatedProfit:
            out[kind] = float(np.mean(accumulate_residuals(res, r)))
    return out


def evaluate_criterion(
    kind: CriterionKind, ledgers: Sequence[ResidualLedger], r: float
) -> CriterionValue:
    if not ledgers:
        raise ValueError("empty ledger sample")
    first = ledgers[0]
    for led in ledgers:
        if (led.u, led.d, led.r) != (first.u, first.d, first.r) or led.residuals.shape != first.residuals.shape:
            raise ValueError("ledgers come from different (u, d, r) or horizons")
    if first.r != r:
        raise ValueError(f"ledgers were simulated with r={first.r}, not {r}")
    res = np.stack([led.residuals for led in ledgers])
    return CriterionValue(kind, criterion_values(res, r, (kind,))[kind])


@dataclass(frozen=True)
class ContourScan:
    """Criterion values at every contour point, in contour order."""

    points: np.ndarray  # (m, 2)
    values: dict[CriterionKind, np.ndarray]

    def best_index(self, kind: CriterionKind) -> int:
        # argmax/argmin return the first extremum; points are sorted by u
        vals = self.values[kind]
        return int(np.argmax(vals) if kind.maximize else np.argmin(vals))

    def spread(self, kind: CriterionKind) -> float:
        vals = self.values[kind]
        return float(vals.max() - vals.min())


def _as_price_matrix(ensemble) -> np.ndarray:
    if isinstance(ensemble, np.ndarray):
        return ensemble
    return np.stack([p.prices if isinstance(p, PricePath) else np.asarray(p) for p in ensemble])


def scan_contour(
    contour: Contour,
    ensemble,
    base: OptionTerms,
    kinds: Iterable[CriterionKind] = ALL_CRITERIA,
    check: bool = False,
) -> ContourScan:
    """Simulate the same ensemble at every contour point and evaluate criteria."""
    kinds = tuple(kinds)
    prices = _as_price_matrix(ensemble)
    if len(contour) == 0 or prices.shape[0] == 0:
        raise ValueError("need a nonempty contour and ensemble")
    values = {k: np.empty(len(contour)) for k in kinds}
    for i, (u, d) in enumerate(contour.points.tolist()):
        try:
            res = simulate_residuals(base.with_jumps(u, d), prices, check=check)
        except (DomainError, SimulationError) as exc:
            raise SimulationError(f"at (u, d) = ({u!r}, {d!r}): {exc}") from exc
        for kind, v in criterion_values(res, base.r, kinds).items():
            values[kind][i] = v
    return ContourScan(points=contour.points.copy(), values=values)


def report_from_scan(scan: ContourScan, metadata: dict[str, str] | None = None) -> RiskReport:
    rows = []
    for kind in ALL_CRITERIA:
        if kind not in scan.values:
            continue
        i = scan.best_index(kind)
        u, d = scan.points[i]
        rows.append(ReportRow(kind, float(u), float(d), float(scan.values[kind][i])))
    return RiskReport(rows=tuple(rows), metadata=dict(metadata or {}))


def optimize_over_contour(
    contour: Contour,
    ensemble,
    base: OptionTerms,
    kinds: Iterable[CriterionKind] = ALL_CRITERIA,
    metadata: dict[str, str] | None = None,
    check: bool = False,
) -> RiskReport:
    """Best contour point per criterion; ties go to the smallest ``u``."""
    scan = scan_contour(contour, ensemble, base, kinds, check=check)
    return report_from_scan(scan, metadata)
