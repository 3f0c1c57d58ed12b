"""Binomial pricing kernel for a European call with up/down jump factors.

``option_value`` prices the call on a recombining two-point lattice,
``no_arbitrage_interval`` gives the bracket of arbitrage-free prices when the
lattice factors are read as the true jump bounds.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

MAX_STEPS = 10_000


class DomainError(ValueError):
    """Parameters or arguments outside the model's valid domain."""


@dataclass(frozen=True, slots=True)
class ModelParams:
    u: float  # up-jump factor per period
    d: float  # down-jump factor per period
    r: float  # risk-free rate per period
    n: int  # periods to expiration
    s0: float
    K: float
    b0: float = 1.0

    def __post_init__(self) -> None:
        vals = (self.u, self.d, self.r, self.s0, self.K, self.b0)
        if not all(math.isfinite(v) for v in vals):
            raise DomainError(f"non-finite parameter in {self!r}")
        if int(self.n) != self.n or self.n < 1:
            raise DomainError(f"n must be a positive integer, got {self.n!r}")
        if self.r < 0:
            raise DomainError(f"r must be >= 0, got {self.r}")
        if not (0.0 < self.d < 1.0 + self.r < self.u):
            raise DomainError(
                f"need 0 < d < 1+r < u, got u={self.u}, d={self.d}, r={self.r}"
            )
        if self.s0 <= 0 or self.K <= 0 or self.b0 <= 0:
            raise DomainError("s0, K and b0 must be positive")

    def with_jumps(self, u: float, d: float) -> ModelParams:
        return replace(self, u=u, d=d)


@dataclass(frozen=True, slots=True)
class OptionTerms:
    """Everything in ``ModelParams`` except the lattice factors."""

    n: int
    s0: float
    K: float
    r: float = 0.0
    b0: float = 1.0

    def with_jumps(self, u: float, d: float) -> ModelParams:
        return ModelParams(u=u, d=d, r=self.r, n=self.n, s0=self.s0, K=self.K, b0=self.b0)


@dataclass(frozen=True, slots=True)
class PriceInterval:
    lower: float
    upper: float

    def __post_init__(self) -> None:
        if not (0.0 <= self.lower <= self.upper):
            raise DomainError(f"invalid interval [{self.lower}, {self.upper}]")

    def contains(self, x: float, tol: float = 0.0) -> bool:
        # closed membership; the boundary factors attain both ends
        return self.lower - tol <= x <= self.upper + tol


def risk_neutral_p(params: ModelParams) -> float:
    return _risk_neutral_p(params.u, params.d, params.r)


def _risk_neutral_p(u, d, r):
    if np.any(np.asarray(u) <= np.asarray(d)):
        raise DomainError("need u > d")
    p = ((1.0 + r) - d) / (u - d)
    if np.any((p <= 0.0) | (p >= 1.0)):
        raise DomainError(f"1+r must lie strictly between d and u (p={p})")
    return p


def lattice(u, d, r: float, m: int):
    """Discounted risk-neutral weights and terminal growth factors for ``m`` steps.

    Broadcasts over array-valued ``u`` and ``d``; the trailing axis indexes the
    number of up moves ``j = 0..m``. Returns ``(weights, factors)`` where
    ``weights[j] = (1+r)^-m C(m,j) p^j (1-p)^(m-j)`` and
    ``factors[j] = u^j d^(m-j)``.

    The binomial weights come from the term ratio
    ``C(m,j+1)/C(m,j) * p/(1-p) = (m-j)/(j+1) * p/(1-p)`` accumulated in log
    space, so large ``m`` neither overflows nor underflows the whole row.
    """
    if m < 0 or m > MAX_STEPS:
        raise DomainError(f"steps to expiry must be in [0, {MAX_STEPS}], got {m}")
    u = np.asarray(u, dtype=float)[..., None]
    d = np.asarray(d, dtype=float)[..., None]
    p = _risk_neutral_p(u, d, r)
    j = np.arange(m + 1, dtype=float)
    log_odds = np.log(p) - np.log1p(-p)
    log_ratio = np.log((m - j[:-1]) / (j[:-1] + 1.0)) + log_odds
    log_w0 = m * np.log1p(-p) - m * math.log1p(r)
    log_w = np.concatenate(
        [log_w0, log_w0 + np.cumsum(log_ratio, axis=-1)], axis=-1
    )
    with np.errstate(over="ignore", under="ignore"):
        factors = np.exp(j * np.log(u) + (m - j) * np.log(d))
        weights = np.exp(log_w)
    return weights, factors


def _call_on_lattice(weights, factors, K: float, s):
    """Sum of ``weights * (s * factors - K)_+`` over the trailing axis."""
    s = np.asarray(s, dtype=float)[..., None]
    # factors may overflow to inf where the weight has underflowed to 0
    with np.errstate(invalid="ignore", under="ignore", over="ignore"):
        payoff = np.maximum(s * factors - K, 0.0)
        terms = np.where(weights > 0.0, weights * payoff, 0.0)
    return terms.sum(axis=-1)


def payoff(s, K: float):
    return np.maximum(np.asarray(s, dtype=float) - K, 0.0)


def option_value(params: ModelParams, k: int, s):
    """Lattice value ``g_k(s)`` of the call with ``n - k`` periods left.

    ``s`` may be a scalar or an array; at ``k == n`` the payoff is returned.
    """
    if not 0 <= k <= params.n:
        raise DomainError(f"period index {k} outside [0, {params.n}]")
    if np.any(np.asarray(s) <= 0):
        raise DomainError("stock price must be positive")
    m = params.n - k
    if m == 0:
        out = payoff(s, params.K)
    else:
        w, a = lattice(params.u, params.d, params.r, m)
        out = _call_on_lattice(w, a, params.K, s)
    return float(out) if np.ndim(out) == 0 else out


def intrinsic_lower_bound(params: ModelParams, k: int, s) -> float:
    m = params.n - k
    grow = (1.0 + params.r) ** m
    return float(np.maximum(s * grow - params.K, 0.0) / grow)


def no_arbitrage_interval(params: ModelParams, k: int, s: float) -> PriceInterval:
    """Arbitrage-free price bracket with ``params.u``/``params.d`` as the jump bounds."""
    if not 0 <= k <= params.n:
        raise DomainError(f"period index {k} outside [0, {params.n}]")
    if s <= 0:
        raise DomainError("stock price must be positive")
    lower = intrinsic_lower_bound(params, k, s)
    upper = option_value(params, k, s)
    # both ends are computed independently; clip rounding noise at the top
    return PriceInterval(lower=lower, upper=max(upper, lower))
