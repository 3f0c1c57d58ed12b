"""Normalized value surface over ``(u, d)`` and its market-calibrated level set."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .pricing import DomainError, _call_on_lattice, lattice

LEVEL_TOL = 1e-8
WIDTH_TOL = 1e-12
MAX_BISECTIONS = 200


class EmptyContourError(ValueError):
    """No grid column reaches the requested price level."""


@dataclass(frozen=True)
class SurfaceSpec:
    n: int
    R: float  # moneyness K / s0
    r: float = 0.0
    u_max: float = 1.10
    d_min: float = 0.90
    eps_u: float = 1e-6
    eps_d: float = 1e-6

    def __post_init__(self) -> None:
        if self.n < 1 or self.R <= 0 or self.r < 0:
            raise DomainError("need n >= 1, R > 0, r >= 0")
        if self.eps_u <= 0 or self.eps_d <= 0:
            raise DomainError("range offsets must be positive")
        if not (0.0 < self.d_min < self.d_max < 1.0 + self.r < self.u_min < self.u_max):
            raise DomainError(
                f"invalid ranges: d in [{self.d_min}, {self.d_max}), "
                f"u in ({self.u_min}, {self.u_max}]"
            )

    @property
    def u_min(self) -> float:
        return 1.0 + self.r + self.eps_u

    @property
    def d_max(self) -> float:
        return 1.0 + self.r - self.eps_d

    def in_range(self, u, d) -> bool:
        u, d = np.asarray(u), np.asarray(d)
        return bool(
            np.all((u >= self.u_min) & (u <= self.u_max))
            and np.all((d >= self.d_min) & (d <= self.d_max))
        )


@dataclass(frozen=True)
class Contour:
    level: float
    points: np.ndarray  # shape (m, 2), columns u and d, increasing u
    tolerance: float  # max |c0 - level| over points

    @property
    def u(self) -> np.ndarray:
        return self.points[:, 0]

    @property
    def d(self) -> np.ndarray:
        return self.points[:, 1]

    def __len__(self) -> int:
        return len(self.points)


def _surface(spec: SurfaceSpec, u, d):
    w, a = lattice(u, d, spec.r, spec.n)
    return _call_on_lattice(w, a, spec.R, 1.0)


def lower_bound(spec: SurfaceSpec) -> float:
    """Normalized no-arbitrage lower price bound ``(1 - R (1+r)^-n)_+``."""
    return max(1.0 - spec.R / (1.0 + spec.r) ** spec.n, 0.0)


def surface_value(spec: SurfaceSpec, u, d):
    """Discounted call value per unit of spot, ``g_0(u, d, s0) / s0``.

    Broadcasts over array-valued ``u`` and ``d``.
    """
    if not spec.in_range(u, d):
        raise DomainError(f"(u, d) outside the surface ranges of {spec}")
    out = _surface(spec, u, d)
    return float(out) if np.ndim(out) == 0 else out


def solve_d(spec: SurfaceSpec, u, level: float):
    """Root in ``d`` of ``c0(u, d) = level`` for each ``u`` (NaN where not bracketed).

    ``c0`` is decreasing in ``d`` at fixed ``u``, so each column is solved by
    bisection on ``[d_min, d_max]`` down to a bracket of width ``WIDTH_TOL``.
    """
    u = np.atleast_1d(np.asarray(u, dtype=float))
    lo = np.full_like(u, spec.d_min)
    hi = np.full_like(u, spec.d_max)
    ok = (_surface(spec, u, lo) >= level) & (_surface(spec, u, hi) <= level)
    for _ in range(MAX_BISECTIONS):
        mid = 0.5 * (lo + hi)
        c_mid = _surface(spec, u, mid)
        hit = c_mid == level
        lo = np.where(hit, mid, np.where(c_mid > level, mid, lo))
        hi = np.where(hit, mid, np.where(c_mid > level, hi, mid))
        if np.all(hi - lo <= WIDTH_TOL):
            break
    return np.where(ok, 0.5 * (lo + hi), np.nan)


def extract_contour(spec: SurfaceSpec, level: float, grid_size: int = 90) -> Contour:
    """Points of the level set ``c0(u, d) = level`` on a uniform ``u`` grid.

    Grid columns whose ``d`` bracket misses ``level`` are dropped, as is any
    root that fails to price within ``LEVEL_TOL`` of the level.
    """
    if not level > 0:
        raise DomainError("level must be positive")
    if grid_size < 2:
        raise DomainError("grid_size must be at least 2")
    if level <= lower_bound(spec):
        # on or under the intrinsic bound c0 is flat in (u, d): no curve to trace
        raise EmptyContourError(f"level {level!r} is not above the intrinsic bound {lower_bound(spec)!r}")
    u = np.linspace(spec.u_min, spec.u_max, grid_size)
    d = solve_d(spec, u, level)
    found = np.isfinite(d)
    if not np.any(found):
        raise EmptyContourError(
            f"level {level!r} not attained for u in [{spec.u_min}, {spec.u_max}], "
            f"d in [{spec.d_min}, {spec.d_max}]"
        )
    u, d = u[found], d[found]
    err = np.abs(_surface(spec, u, d) - level)
    keep = err <= LEVEL_TOL
    if not np.any(keep):
        raise EmptyContourError(f"no column converged to level {level!r}")
    points = np.column_stack([u[keep], d[keep]])
    return Contour(level=float(level), points=points, tolerance=float(err[keep].max()))


def surface_grid(spec: SurfaceSpec, size: int = 25) -> np.ndarray:
    """Rows ``(u, d, c0)`` on a ``size x size`` grid covering the valid ranges."""
    u = np.linspace(spec.u_min, spec.u_max, size)
    d = np.linspace(spec.d_min, spec.d_max, size)
    uu, dd = np.meshgrid(u, d, indexing="ij")
    c = _surface(spec, uu, dd)
    return np.column_stack([uu.ravel(), dd.ravel(), c.ravel()])


def format_contour(contour: Contour) -> str:
    lines = ["u\td"]
    lines += [f"{u!r}\t{d!r}" for u, d in contour.points.tolist()]
    return "\n".join(lines) + "\n"
