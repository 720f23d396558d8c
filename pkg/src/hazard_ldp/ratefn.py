"""Large-deviation rate functions of the empirical cumulative hazard.

Three parameterizations of the same function are exposed:

* :func:`bernoulli_rate` -- relative entropy ``KL(Ber(x) || Ber(p))``, the rate
  of the empirical survival fraction.
* :func:`ch_rate` -- rate of the empirical cumulative hazard ``H_n = -ln S_n``,
  obtained by contraction through ``y = -ln x``.
* :func:`centered_rate` -- ``ch_rate`` shifted so its zero sits at the origin,
  ``J_p(z) = ch_rate(p, z - ln p)``.

Also included are the derivatives of the centered rate in ``p``, its power
series form and the symmetry defect ``|J_p(-z) - J_p(z)|``. All functions are
pure and accept either a :class:`Probability` or a float in ``(0, 1)``.
"""

from __future__ import annotations

import math
import numbers
from dataclasses import dataclass
from typing import Sequence

from .errors import DomainError
from .extended import INF, log_ratio, xlog_ratio

SERIES_RTOL = 1e-15
SERIES_MAX_TERMS = 10**6


class Probability(float):
    """A tail probability strictly inside ``(0, 1)``.

    Validation happens once, here; functions taking a ``Probability`` do not
    re-check it. Constructing from an existing instance is free.
    """

    __slots__ = ()

    def __new__(cls, value):
        if isinstance(value, Probability):
            return value
        v = float(value)
        if not 0.0 < v < 1.0:
            raise DomainError(f"probability must lie in the open interval (0, 1), got {value!r}")
        return super().__new__(cls, v)

    @classmethod
    def from_hazard(cls, h):
        """The tail probability ``exp(-h)`` whose cumulative hazard is ``h``."""
        return cls(math.exp(-h))

    @property
    def hazard(self):
        """``-ln p``, the minimizer of :func:`ch_rate`."""
        return -math.log(self)

    def __repr__(self):
        return f"Probability({float(self)!r})"


def _check_real(name, v):
    if isinstance(v, bool) or not isinstance(v, numbers.Real):
        raise DomainError(f"{name} must be a real number, got {v!r}")
    v = float(v)
    if math.isnan(v):
        raise DomainError(f"{name} must not be NaN")
    return v


def bernoulli_rate(p, x):
    """Relative entropy of ``Ber(x)`` with respect to ``Ber(p)``.

    ``x ln(x/p) + (1-x) ln((1-x)/(1-p))`` with ``0 ln 0 = 0``; finite on the
    whole closed interval ``x in [0, 1]``.
    """
    p = Probability(p)
    x = _check_real("x", x)
    if not 0.0 <= x <= 1.0:
        raise DomainError(f"x must lie in [0, 1], got {x!r}")
    q = 1.0 - p
    first = xlog_ratio(x, x, p, x - p)
    second = xlog_ratio(1.0 - x, 1.0 - x, q, p - x)
    return max(first + second, 0.0)


def _ch_rate(p, log_p, y):
    # y in (0, inf); x = e^{-y} is the success fraction, u = y + ln p the
    # centered offset so that x ln(x/p) = -u x exactly.
    x = math.exp(-y)
    one_minus_x = -math.expm1(-y)
    u = y + log_p
    first = -u * x
    second = one_minus_x * log_ratio(one_minus_x, 1.0 - p, -p * math.expm1(-u))
    return max(first + second, 0.0)


def ch_rate(p, y):
    """Rate function of the empirical cumulative hazard at level ``y``.

    Equal to ``bernoulli_rate(p, exp(-y))`` on ``y in [0, inf]``; vanishes only
    at ``y = -ln p`` and tends to ``-ln(1-p)`` as ``y -> inf``.
    """
    p = Probability(p)
    y = _check_real("y", y)
    if y < 0.0:
        raise DomainError(f"y must be nonnegative, got {y!r}")
    if y == INF:
        return -math.log1p(-p)
    if y == 0.0:
        return -math.log(p)
    return _ch_rate(p, math.log(p), y)


def centered_rate(p, z):
    """``J_p(z) = ch_rate(p, z - ln p)`` for ``z in [ln p, inf]``; ``J_p(0) = 0``."""
    p = Probability(p)
    z = _check_real("z", z)
    log_p = math.log(p)
    if z < log_p:
        raise DomainError(f"z must be at least ln p = {log_p!r}, got {z!r}")
    return ch_rate(p, z - log_p)


def _check_centered_domain(p, z):
    p = Probability(p)
    z = _check_real("z", z)
    log_p = math.log(p)
    if z < log_p:
        raise DomainError(f"z must be at least ln p = {log_p!r}, got {z!r}")
    return p, z, log_p


def centered_rate_dp(p, z):
    """First derivative of :func:`centered_rate` with respect to ``p``.

    Diverges to ``+inf`` at the left domain edge ``z = ln p``.
    """
    p, z, log_p = _check_centered_domain(p, z)
    if z == INF:
        return 1.0 / (1.0 - p)
    if z == log_p:
        return INF
    e = math.exp(-z)
    one_minus_pe = -math.expm1(log_p - z)
    log_term = log_ratio(one_minus_pe, 1.0 - p, -p * math.expm1(-z))
    return -z * e - math.expm1(-z) / (1.0 - p) - e * log_term


def centered_rate_dp2(p, z):
    """Second derivative of :func:`centered_rate` with respect to ``p``.

    ``exp(-z)(exp(z)-1)^2 / ((1-p)^2 (exp(z)-p))``, evaluated in the
    overflow-free form ``(1-e^{-z})^2 / ((1-p)^2 (1-p e^{-z}))``.
    """
    p, z, log_p = _check_centered_domain(p, z)
    if z == log_p:
        return INF
    num = math.expm1(-z) ** 2
    den = (1.0 - p) ** 2 * -math.expm1(log_p - z)
    return num / den


def centered_rate_dp_at_zero(z):
    """Limit of :func:`centered_rate_dp` as ``p -> 0``: ``1 - (1+z) e^{-z}``."""
    z = _check_real("z", z)
    if math.isinf(z):
        raise DomainError("z must be finite")
    if z < -700.0:
        # (1+z) e^{-z} overflows; the value is astronomically large
        return INF
    return -math.expm1(-z) - z * math.exp(-z)


def _series_terms(x, truncation):
    # terms x^{k-1} / (k^2 - k) for k = 2, 3, ...
    terms = []
    power = x
    partial = 0.0
    k = 2
    limit = SERIES_MAX_TERMS if truncation is None else truncation
    while k <= limit:
        term = power / (k * k - k)
        terms.append(term)
        partial += term
        if truncation is None and abs(term) < SERIES_RTOL * (1.0 + abs(partial)):
            break
        power *= x
        k += 1
    return math.fsum(terms)


def centered_rate_series(p, z, truncation=None):
    """Power-series evaluation of :func:`centered_rate`, valid for ``p e^{-z} < 1``.

    ``truncation`` is the last summation index ``K``; when omitted, terms are
    added until one falls below ``1e-15 * (1 + |partial sum|)`` (at most
    ``10**6`` terms).
    """
    p = Probability(p)
    z = _check_real("z", z)
    if truncation is not None and (isinstance(truncation, bool) or int(truncation) != truncation or truncation < 1):
        raise DomainError(f"truncation must be a positive integer, got {truncation!r}")
    x = p * math.exp(-z) if z != INF else 0.0
    if not x < 1.0:
        raise DomainError(f"series requires p*exp(-z) < 1, got {x!r}")
    log_q = math.log1p(-p)
    if x == 0.0:
        return -log_q
    s = _series_terms(x, None if truncation is None else int(truncation))
    return x * (-z + log_q - 1.0 + s) - log_q


def power_series_identity_residual(x, truncation):
    """``(1-x) ln(1-x) - (-x + sum_{k=2}^{K} x^k / (k^2 - k))`` for ``|x| < 1``."""
    x = _check_real("x", x)
    if not abs(x) < 1.0:
        raise DomainError(f"|x| must be < 1, got {x!r}")
    if isinstance(truncation, bool) or int(truncation) != truncation or truncation < 1:
        raise DomainError(f"truncation must be a positive integer, got {truncation!r}")
    lhs = (1.0 - x) * math.log1p(-x)
    parts = [-x]
    power = x
    for k in range(2, int(truncation) + 1):
        power *= x
        parts.append(power / (k * k - k))
    return lhs - math.fsum(parts)


def symmetry_defect_exact(p, z):
    """``|J_p(-z) - J_p(z)|`` for ``0 < z <= -ln p``."""
    p = Probability(p)
    z = _check_real("z", z)
    h = -math.log(p)
    if not 0.0 < z <= h:
        raise DomainError(f"z must lie in (0, -ln p] = (0, {h!r}], got {z!r}")
    return abs(centered_rate(p, -z) - centered_rate(p, z))


def symmetry_defect_approx(p, z):
    """Second-order approximation of :func:`symmetry_defect_exact`.

    ``2p(z cosh z + sinh z ln((1-p)/e)) + p^2 sinh 2z``; the dropped terms are
    ``2 p^k sinh(kz) / (k^2 - k)`` for ``k >= 3``. Defined on ``0 < z < -ln p``.
    """
    p = Probability(p)
    z = _check_real("z", z)
    h = -math.log(p)
    if not 0.0 < z < h:
        raise DomainError(f"z must lie in (0, -ln p) = (0, {h!r}), got {z!r}")
    shift = math.log1p(-p) - 1.0
    return 2.0 * p * (z * math.cosh(z) + math.sinh(z) * shift) + p * p * math.sinh(2.0 * z)


@dataclass(frozen=True)
class RateCurve:
    """Sampled graph of :func:`ch_rate` (``kind="ch"``) or :func:`centered_rate`."""

    p: Probability
    abscissas: tuple
    ordinates: tuple
    kind: str = "ch"

    def __post_init__(self):
        if len(self.abscissas) != len(self.ordinates):
            raise DomainError("abscissas and ordinates differ in length")
        if any(b <= a for a, b in zip(self.abscissas, self.abscissas[1:])):
            raise DomainError("abscissas must be strictly increasing")
        if any(not v >= 0.0 for v in self.ordinates):
            raise DomainError("rate values must be nonnegative")

    @property
    def minimizer(self):
        """Exact location of the zero: ``-ln p`` or ``0`` for the centered form."""
        return self.p.hazard if self.kind == "ch" else 0.0

    def argmin(self):
        """Abscissa of the smallest sampled ordinate (first one on ties)."""
        i = min(range(len(self.ordinates)), key=self.ordinates.__getitem__)
        return self.abscissas[i]

    def __len__(self):
        return len(self.abscissas)


def rate_curve(p, ys: Sequence[float]) -> RateCurve:
    p = Probability(p)
    return RateCurve(p, tuple(float(y) for y in ys), tuple(ch_rate(p, y) for y in ys), "ch")


def centered_rate_curve(p, zs: Sequence[float]) -> RateCurve:
    p = Probability(p)
    return RateCurve(p, tuple(float(z) for z in zs), tuple(centered_rate(p, z) for z in zs), "centered")
