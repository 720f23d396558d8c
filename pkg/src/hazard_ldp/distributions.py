"""Survival models and the two-parameter rate surface ``I(y, t)``.

Each model exposes ``survival``, ``cdf``, ``cumhaz`` and ``quantile``. The
continuous families accept scalars or numpy arrays in ``survival``/``cdf``/
``quantile``; :class:`EmpiricalStep` works on sorted sample values.
"""

from __future__ import annotations

import math
from bisect import bisect_right
from dataclasses import dataclass, field
from typing import Sequence, Union

import numpy as np

from .errors import DomainError
from .extended import neg_log
from .ratefn import Probability, ch_rate


def _check_time(t):
    t = np.asarray(t, dtype=float)
    if np.any(np.isnan(t)) or np.any(t < 0.0):
        raise DomainError(f"time must be nonnegative, got {t!r}")
    return t


def _check_unit(u):
    u = np.asarray(u, dtype=float)
    if not np.all((u > 0.0) & (u < 1.0)):
        raise DomainError(f"quantile level must lie in (0, 1), got {u!r}")
    return u


def _out(a):
    return float(a) if np.ndim(a) == 0 else a


@dataclass(frozen=True)
class Exponential:
    """Exponential waiting times with hazard ``rate``; ``H(t) = rate * t``."""

    rate: float

    def __post_init__(self):
        if not (math.isfinite(self.rate) and self.rate > 0):
            raise DomainError(f"rate must be positive, got {self.rate!r}")

    def survival(self, t):
        return _out(np.exp(-self.rate * _check_time(t)))

    def cdf(self, t):
        return _out(-np.expm1(-self.rate * _check_time(t)))

    def cumhaz(self, t):
        return _out(self.rate * _check_time(t))

    def quantile(self, u):
        return _out(-np.log1p(-_check_unit(u)) / self.rate)


@dataclass(frozen=True)
class Weibull:
    """Weibull waiting times, ``S(t) = exp(-(t/scale)^shape)``."""

    shape: float
    scale: float

    def __post_init__(self):
        for name in ("shape", "scale"):
            v = getattr(self, name)
            if not (math.isfinite(v) and v > 0):
                raise DomainError(f"{name} must be positive, got {v!r}")

    def cumhaz(self, t):
        return _out((_check_time(t) / self.scale) ** self.shape)

    def survival(self, t):
        return _out(np.exp(-np.asarray(self.cumhaz(t))))

    def cdf(self, t):
        return _out(-np.expm1(-np.asarray(self.cumhaz(t))))

    def quantile(self, u):
        return _out(self.scale * (-np.log1p(-_check_unit(u))) ** (1.0 / self.shape))


@dataclass(frozen=True)
class EmpiricalStep:
    """Step survival function of a sample: fraction of values strictly above ``t``."""

    values: tuple = field()

    def __post_init__(self):
        vals = tuple(float(v) for v in self.values)
        if not vals:
            raise DomainError("empirical distribution needs at least one value")
        if any(not (math.isfinite(v) and v > 0) for v in vals):
            raise DomainError("empirical values must be positive and finite")
        if any(b < a for a, b in zip(vals, vals[1:])):
            raise DomainError("empirical values must be sorted")
        object.__setattr__(self, "values", vals)

    @classmethod
    def from_sample(cls, sample: Sequence[float]):
        return cls(tuple(sorted(float(v) for v in sample)))

    @property
    def n(self):
        return len(self.values)

    def _count_le(self, t):
        return bisect_right(self.values, t)

    def survival(self, t):
        t = float(_check_time(t))
        return (self.n - self._count_le(t)) / self.n

    def cdf(self, t):
        t = float(_check_time(t))
        return self._count_le(t) / self.n

    def cumhaz(self, t):
        return neg_log(self.survival(t))

    def quantile(self, u):
        """``inf{t : F(t) >= u}``, i.e. the ``ceil(u n)``-th order statistic."""
        u = _check_unit(u)
        n = self.n
        k = np.clip(np.ceil(u * n), 1, n)
        # guard the ceiling against rounding in u * n
        k = np.where((k > 1) & ((k - 1) / n >= u), k - 1, k)
        k = np.where((k < n) & (k / n < u), k + 1, k)
        return _out(np.asarray(self.values)[k.astype(np.int64) - 1])


DistributionSpec = Union[Exponential, Weibull, EmpiricalStep]


def survival(spec: DistributionSpec, t):
    return spec.survival(t)


def cdf(spec: DistributionSpec, t):
    return spec.cdf(t)


def cumhaz(spec: DistributionSpec, t):
    """``H(t) = -ln S(t)``; ``+inf`` once the survival function reaches zero."""
    return spec.cumhaz(t)


def quantile(spec: DistributionSpec, u):
    return spec.quantile(u)


@dataclass(frozen=True)
class RateSurfaceGrid:
    """Rate values ``I(y, t) = ch_rate(S(t), y)`` on a rectangular grid.

    ``values[i, j]`` belongs to ``(t[i], y[j])``; ``ch[i]`` is ``H(t[i])``.
    """

    t: np.ndarray
    y: np.ndarray
    values: np.ndarray
    ch: np.ndarray


def _check_grid(name, grid, lower_open):
    g = np.asarray(grid, dtype=float)
    if g.ndim != 1 or g.size == 0:
        raise DomainError(f"{name}-grid must be a nonempty sequence")
    if np.any(np.diff(g) <= 0):
        raise DomainError(f"{name}-grid must be strictly increasing")
    if lower_open and g[0] <= 0:
        raise DomainError(f"{name}-grid values must be positive")
    if not lower_open and g[0] < 0:
        raise DomainError(f"{name}-grid values must be nonnegative")
    if not np.all(np.isfinite(g)):
        raise DomainError(f"{name}-grid values must be finite")
    return g


def rate_surface(spec: DistributionSpec, t_grid, y_grid) -> RateSurfaceGrid:
    """Evaluate ``ch_rate(S(t), y)`` over ``t_grid x y_grid``.

    Every grid time must have ``0 < S(t) < 1``; degenerate times are rejected.
    """
    t = _check_grid("t", t_grid, lower_open=True)
    y = _check_grid("y", y_grid, lower_open=False)
    values = np.empty((t.size, y.size))
    ch = np.empty(t.size)
    for i, ti in enumerate(t):
        s = float(spec.survival(ti))
        try:
            p = Probability(s)
        except DomainError:
            raise DomainError(f"S(t) = {s!r} at t = {ti!r} is degenerate; need 0 < S(t) < 1") from None
        ch[i] = float(spec.cumhaz(ti))
        values[i] = [ch_rate(p, yj) for yj in y]
    return RateSurfaceGrid(t, y, values, ch)
