"""Non-self-financing rebalancing of the lattice hedge along realized paths.

At each period the portfolio set up one step earlier is liquidated at the new
stock and bond prices, a fresh portfolio costing ``g_k(s_k)`` is bought, and the
difference is withdrawn (or injected) as the residual ``delta_k``.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .pricing import DomainError, ModelParams, lattice, option_value, payoff, _call_on_lattice

JUMP_SANITY_RANGE = (0.5, 2.0)
RESIDUAL_TOL = 1e-9


class SimulationError(RuntimeError):
    def __init__(self, message: str, period: int | None = None):
        super().__init__(message if period is None else f"period {period}: {message}")
        self.period = period


class DataQualityWarning(UserWarning):
    pass


@dataclass(frozen=True)
class PricePath:
    prices: np.ndarray  # s_0..s_n
    jumps: np.ndarray  # xi_1..xi_n

    def __post_init__(self) -> None:
        prices = np.asarray(self.prices, dtype=float)
        jumps = np.asarray(self.jumps, dtype=float)
        if prices.ndim != 1 or prices.size < 2:
            raise DomainError("a path needs at least two prices")
        if jumps.shape != (prices.size - 1,):
            raise DomainError("need exactly one jump per period")
        if not np.all(np.isfinite(prices)) or np.any(prices <= 0):
            raise DomainError("prices must be finite and positive")
        if not np.allclose(jumps * prices[:-1], prices[1:], rtol=1e-12, atol=0.0):
            raise DomainError("jumps inconsistent with prices")
        object.__setattr__(self, "prices", prices)
        object.__setattr__(self, "jumps", jumps)

    @property
    def n(self) -> int:
        return self.jumps.size

    @classmethod
    def from_prices(cls, prices: Sequence[float]) -> PricePath:
        prices = np.asarray(prices, dtype=float)
        if np.any(prices <= 0):
            raise DomainError("prices must be positive")
        return cls(prices, prices[1:] / prices[:-1])

    @classmethod
    def from_jumps(cls, s0: float, jumps: Sequence[float]) -> PricePath:
        jumps = np.asarray(jumps, dtype=float)
        prices = np.cumprod(np.concatenate([[float(s0)], jumps]))  # s_k = s_{k-1} * xi_k
        return cls(prices, jumps)


@dataclass(frozen=True, slots=True)
class PortfolioPosition:
    gamma: float  # stock units
    beta: float  # bond units
    k: int


@dataclass(frozen=True)
class ResidualLedger:
    """Cash flows of one hedged path under one ``(u, d)``.

    ``setup_costs[i]`` and ``liquidations[i]`` belong to period ``i + 1``; the
    last set-up cost is the option payoff. ``initial_cost`` is ``g_0(s_0)``.
    """

    u: float
    d: float
    r: float
    initial_cost: float
    residuals: np.ndarray
    setup_costs: np.ndarray
    liquidations: np.ndarray
    accumulated: float
    positions: tuple[PortfolioPosition, ...] = ()


def bond_path(params: ModelParams) -> np.ndarray:
    return params.b0 * (1.0 + params.r) ** np.arange(params.n + 1)


def hedge_weights(params: ModelParams, k: int, s_k: float, b_k: float) -> PortfolioPosition:
    """Stock and bond holdings set up at period ``k`` (``0 <= k < n``)."""
    if not 0 <= k < params.n:
        raise DomainError(f"hedge period {k} outside [0, {params.n})")
    if s_k <= 0 or b_k <= 0:
        raise DomainError("prices must be positive")
    u, d, r = params.u, params.d, params.r
    g_up = option_value(params, k + 1, s_k * u)
    g_down = option_value(params, k + 1, s_k * d)
    gamma = (g_up - g_down) / (s_k * (u - d))
    beta = (u * g_down - d * g_up) / ((1.0 + r) * b_k * (u - d))
    return PortfolioPosition(gamma=gamma, beta=beta, k=k)


def replication_value(pos: PortfolioPosition, s: float, b: float) -> float:
    return pos.gamma * s + pos.beta * b


def step_residual(params: ModelParams, k: int, s_prev, xi):
    """Residual withdrawn at period ``k`` after a jump ``xi`` from ``s_prev``.

    Jumps outside ``[d, u]`` are allowed and give a negative residual.
    """
    if not 1 <= k <= params.n:
        raise DomainError(f"residual period {k} outside [1, {params.n}]")
    if np.any(np.asarray(s_prev) <= 0) or np.any(np.asarray(xi) <= 0):
        raise DomainError("price and jump must be positive")
    u, d = params.u, params.d
    g_down = option_value(params, k, s_prev * d)
    g_up = option_value(params, k, s_prev * u)
    g_now = option_value(params, k, s_prev * xi)
    return (u - xi) / (u - d) * g_down + (xi - d) / (u - d) * g_up - g_now


def accumulate_residuals(residuals, r: float):
    """Residuals compounded at ``r`` to the last period (along the last axis)."""
    res = np.asarray(residuals, dtype=float)
    if res.shape[-1] == 0:
        raise ValueError("need at least one residual")
    growth = 1.0 + r
    acc = np.zeros(res.shape[:-1])
    # Horner form; with r == 0 this is exactly the left-to-right sum
    for k in range(res.shape[-1]):
        acc = acc * growth + res[..., k]
    return float(acc) if acc.ndim == 0 else acc


def _warn_on_jumps(jumps: np.ndarray, sanity: tuple[float, float] | None) -> None:
    if sanity is None:
        return
    lo, hi = sanity
    bad = (jumps <= lo) | (jumps >= hi)
    if np.any(bad):
        warnings.warn(
            f"{int(bad.sum())} jump(s) outside the sanity range ({lo}, {hi})",
            DataQualityWarning,
            stacklevel=3,
        )


def simulate_hedge(
    params: ModelParams,
    path: PricePath,
    check: bool = True,
    sanity: tuple[float, float] | None = JUMP_SANITY_RANGE,
) -> ResidualLedger:
    """Roll the hedge along ``path`` and record every residual.

    With ``check`` the portfolio-arithmetic residual is compared against the
    closed form and a ``SimulationError`` is raised on disagreement.
    """
    if path.n != params.n:
        raise SimulationError(f"path has {path.n} periods, params expect {params.n}")
    _warn_on_jumps(path.jumps, sanity)
    u, d, r, n = params.u, params.d, params.r, params.n
    s, xi, b = path.prices, path.jumps, bond_path(params)

    positions = []
    residuals = np.empty(n)
    setups = np.empty(n)
    liquidations = np.empty(n)
    for k in range(1, n + 1):
        pos = hedge_weights(params, k - 1, s[k - 1], b[k - 1])
        positions.append(pos)
        liquidations[k - 1] = replication_value(pos, s[k], b[k])
        setups[k - 1] = option_value(params, k, s[k])
        residuals[k - 1] = liquidations[k - 1] - setups[k - 1]
        if not math.isfinite(residuals[k - 1]):
            raise SimulationError("non-finite residual", period=k)
        if check:
            closed = step_residual(params, k, s[k - 1], xi[k - 1])
            if abs(closed - residuals[k - 1]) > RESIDUAL_TOL:
                raise SimulationError(
                    f"residual routes disagree: {closed!r} vs {residuals[k - 1]!r}",
                    period=k,
                )
    return ResidualLedger(
        u=u,
        d=d,
        r=r,
        initial_cost=option_value(params, 0, s[0]),
        residuals=residuals,
        setup_costs=setups,
        liquidations=liquidations,
        accumulated=accumulate_residuals(residuals, r),
        positions=tuple(positions),
    )


def simulate_residuals(
    params: ModelParams,
    prices: np.ndarray,
    check: bool = False,
    sanity: tuple[float, float] | None = JUMP_SANITY_RANGE,
) -> np.ndarray:
    """Vectorized residuals for a batch of paths, shape ``(paths, n)``.

    ``prices`` has shape ``(paths, n + 1)``. Same arithmetic as
    ``simulate_hedge`` with the lattice built once per period.
    """
    prices = np.asarray(prices, dtype=float)
    if prices.ndim != 2 or prices.shape[1] != params.n + 1:
        raise SimulationError(f"expected prices of shape (paths, {params.n + 1})")
    if np.any(prices <= 0) or not np.all(np.isfinite(prices)):
        raise SimulationError("prices must be finite and positive")
    u, d, r, n, K = params.u, params.d, params.r, params.n, params.K
    xi = prices[:, 1:] / prices[:, :-1]
    _warn_on_jumps(xi, sanity)
    b = bond_path(params)

    out = np.empty((prices.shape[0], n))
    for k in range(1, n + 1):
        s_prev, s_now = prices[:, k - 1], prices[:, k]
        if k == n:
            g = lambda s: payoff(s, K)  # noqa: E731
        else:
            w, a = lattice(u, d, r, n - k)
            g = lambda s, w=w, a=a: _call_on_lattice(w, a, K, s)  # noqa: E731
        g_down, g_up, g_now = g(s_prev * d), g(s_prev * u), g(s_now)
        gamma = (g_up - g_down) / (s_prev * (u - d))
        beta = (u * g_down - d * g_up) / ((1.0 + r) * b[k - 1] * (u - d))
        delta = gamma * s_now + beta * b[k] - g_now
        if not np.all(np.isfinite(delta)):
            raise SimulationError("non-finite residual", period=k)
        if check:
            x = xi[:, k - 1]
            closed = (u - x) / (u - d) * g_down + (x - d) / (u - d) * g_up - g_now
            gap = np.abs(closed - delta)
            if np.any(gap > RESIDUAL_TOL):
                raise SimulationError(
                    f"residual routes disagree by {gap.max():.3e}", period=k
                )
        out[:, k - 1] = delta
    return out
