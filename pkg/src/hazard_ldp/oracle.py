"""Exact finite-sample law of the empirical cumulative hazard.

For a fixed threshold with tail probability ``p``, ``n * S_n`` is
``Binomial(n, p)`` and ``H_n = -ln(k/n)`` takes the value ``+inf`` when
``k = 0``. Everything here is computed from that law in log space, which makes
it an exact (up to rounding) reference for the asymptotic rate functions.
"""

from __future__ import annotations

import math
import threading
from functools import lru_cache
from dataclasses import dataclass
from typing import Iterable, List

import numpy as np

from .errors import DomainError, SizeError
from .estimator import _raw_to_unit, cumhaz_from_count, philox
from .extended import INF
from .ratefn import Probability, bernoulli_rate, centered_rate, ch_rate

MAX_N = 10**6


class _LogFactorials:
    """``ln k!`` for ``k <= MAX_N`` as an unevaluated sum ``hi + lo``.

    Built by compensated (Neumaier) cumulative summation of ``ln k``; grows on
    demand and is shared read-only afterwards.
    """

    def __init__(self):
        self._lock = threading.Lock()
        self.hi = np.zeros(1)
        self.lo = np.zeros(1)

    def ensure(self, n):
        if n < self.hi.size:
            return
        with self._lock:
            start = self.hi.size
            if n < start:
                return
            size = max(n + 1, min(2 * start, MAX_N + 1))
            hi = np.empty(size)
            lo = np.empty(size)
            hi[:start] = self.hi
            lo[:start] = self.lo
            s, c = float(self.hi[-1]), float(self.lo[-1])
            for k in range(start, size):
                v = math.log(k)
                t = s + v
                if abs(s) >= abs(v):
                    c += (s - t) + v
                else:
                    c += (v - t) + s
                s = t
                hi[k] = s
                lo[k] = c
            self.lo = lo
            self.hi = hi

    def log_binom(self, n):
        """``ln C(n, k)`` for ``k = 0..n``."""
        self.ensure(n)
        k = np.arange(n + 1)
        hi, lo = self.hi, self.lo
        return (hi[n] - hi[k] - hi[n - k]) + (lo[n] - lo[k] - lo[n - k])


_LOG_FACTORIALS = _LogFactorials()


def _check_n(n, cap=MAX_N):
    if isinstance(n, bool) or int(n) != n or n < 1:
        raise DomainError(f"n must be a positive integer, got {n!r}")
    if n > cap:
        raise SizeError(f"n = {n} exceeds the supported maximum {cap}")
    return int(n)


@dataclass(frozen=True, eq=False)
class HnLaw:
    """Law of ``H_n``: atom ``k`` has value ``-ln(k/n)`` and log-mass ``log_probs[k]``."""

    n: int
    p: Probability
    values: np.ndarray
    log_probs: np.ndarray

    @property
    def atoms(self):
        return list(zip(self.values.tolist(), self.log_probs.tolist()))

    @property
    def probs(self):
        return np.exp(self.log_probs)

    def tail_log_prob(self, k_min):
        """``ln P(n S_n >= k_min)``."""
        return _log_sum(self.log_probs[max(k_min, 0):])


@lru_cache(maxsize=64)
def _atom_values(n):
    # same scalar path as the estimator, so event membership agrees bit for bit
    values = np.array([cumhaz_from_count(k, n) for k in range(n + 1)])
    values.flags.writeable = False
    return values


def hn_law(n: int, p) -> HnLaw:
    n = _check_n(n)
    p = Probability(p)
    k = np.arange(n + 1)
    log_probs = _LOG_FACTORIALS.log_binom(n) + k * math.log(p) + (n - k) * math.log1p(-p)
    return HnLaw(n, p, _atom_values(n), log_probs)


def _log_sum(log_terms) -> float:
    """``ln(sum(exp(log_terms)))``, adding ascending magnitudes exactly via fsum."""
    lt = np.sort(np.asarray(log_terms, dtype=float))
    lt = lt[lt > -INF]
    if lt.size == 0:
        return -INF
    m = float(lt[-1])
    total = m + math.log(math.fsum(np.exp(lt - m).tolist()))
    if total > 0.0:
        # mass of the full space can exceed 1 only by rounding
        if total > 1e-10:
            raise ArithmeticError(f"log-probability {total!r} is positive")
        total = 0.0
    return total


@dataclass(frozen=True)
class AtLeast:
    """Event ``H_n >= level``; always contains the ``+inf`` atom."""

    level: float

    def contains(self, v):
        return np.asarray(v) >= self.level

    def infimum_rate(self, p):
        p = Probability(p)
        if self.level <= p.hazard:
            return 0.0
        return ch_rate(p, self.level)


@dataclass(frozen=True)
class AtMost:
    """Event ``H_n <= level``."""

    level: float

    def contains(self, v):
        return np.asarray(v) <= self.level

    def infimum_rate(self, p):
        p = Probability(p)
        if self.level < 0.0:
            return INF
        if self.level >= p.hazard:
            return 0.0
        return ch_rate(p, self.level)


@dataclass(frozen=True)
class Outside:
    """Event ``H_n <= low`` or ``H_n >= high``."""

    low: float
    high: float

    def __post_init__(self):
        if not self.low < self.high:
            raise DomainError(f"Outside needs low < high, got {self.low!r}, {self.high!r}")

    def contains(self, v):
        v = np.asarray(v)
        return (v <= self.low) | (v >= self.high)

    def infimum_rate(self, p):
        return min(AtMost(self.low).infimum_rate(p), AtLeast(self.high).infimum_rate(p))


DeviationEvent = (AtLeast, AtMost, Outside)


def parse_event(text: str):
    """Parse ``atleast:Y``, ``atmost:Y`` or ``outside:LO,HI`` (``inf`` allowed)."""
    kind, _, rest = text.partition(":")
    kind = kind.strip().lower().replace("_", "").replace("-", "")
    try:
        args = [float(a) for a in rest.split(",")] if rest.strip() else []
    except ValueError:
        raise DomainError(f"cannot parse event thresholds in {text!r}") from None
    if any(math.isnan(a) for a in args):
        raise DomainError(f"event thresholds must not be NaN: {text!r}")
    if kind == "atleast" and len(args) == 1:
        return AtLeast(args[0])
    if kind == "atmost" and len(args) == 1:
        return AtMost(args[0])
    if kind == "outside" and len(args) == 2:
        return Outside(args[0], args[1])
    raise DomainError(f"unrecognized event {text!r}; use atleast:Y, atmost:Y or outside:LO,HI")


def event_prob(law: HnLaw, event):
    """Exact ``(P(H_n in event), ln P(H_n in event))``."""
    mask = event.contains(law.values)
    log_prob = _log_sum(law.log_probs[mask])
    return min(math.exp(log_prob), 1.0), log_prob


@dataclass(frozen=True)
class LdpCheckRow:
    n: int
    exact_log_prob: float
    empirical_rate: float
    limit_rate: float
    gap: float


def ldp_convergence(p, event, n_list: Iterable[int]) -> List[LdpCheckRow]:
    """Compare ``-(1/n) ln P(H_n in event)`` with the infimum of ``ch_rate``.

    The event must not contain the minimizer ``-ln p`` and must be nonempty,
    so that the limit rate is positive and finite.
    """
    p = Probability(p)
    limit = event.infimum_rate(p)
    if limit == 0.0:
        raise DomainError(f"event {event!r} contains the cumulative hazard -ln p = {p.hazard!r}")
    if limit == INF:
        raise DomainError(f"event {event!r} is empty on [0, inf]")
    rows = []
    for n in n_list:
        n = _check_n(n)
        _, log_prob = event_prob(hn_law(n, p), event)
        rate = -log_prob / n
        rows.append(LdpCheckRow(n, log_prob, rate, limit, rate - limit))
    return rows


@dataclass(frozen=True)
class OverUnderReport:
    n: int
    p: float
    delta: float
    prob_over: float
    prob_under: float
    log_ratio_rate: float
    limit: float


def over_under_report(n: int, p, delta: float) -> OverUnderReport:
    """Exact probabilities of over- and underestimating ``H = -ln p`` by ``delta``.

    ``log_ratio_rate = (1/n) ln(prob_over / prob_under)`` tends to
    ``centered_rate(p, -delta) - centered_rate(p, delta)``.
    """
    n = _check_n(n)
    p = Probability(p)
    h = p.hazard
    delta = float(delta)
    if not 0.0 < delta < h:
        raise DomainError(f"delta must lie in (0, -ln p) = (0, {h!r}), got {delta!r}")
    law = hn_law(n, p)
    over, log_over = event_prob(law, AtLeast(h + delta))
    under, log_under = event_prob(law, AtMost(h - delta))
    return OverUnderReport(
        n=n,
        p=float(p),
        delta=delta,
        prob_over=over,
        prob_under=under,
        log_ratio_rate=(log_over - log_under) / n,
        limit=centered_rate(p, -delta) - centered_rate(p, delta),
    )


def _atom_index(n, x):
    # smallest k with k/n >= x, snapping n*x to an integer when within rounding
    nx = n * x
    r = round(nx)
    if abs(nx - r) <= 1e-9 * max(1.0, nx):
        return int(r)
    return math.ceil(nx)


def chernoff_check(n: int, p, x: float):
    """``(ln P(S_n >= x), -n * bernoulli_rate(p, x))`` for ``p < x <= 1``.

    The first never exceeds the second; when ``n x`` is an integer the gap is
    at most ``ln(n + 1)``.
    """
    n = _check_n(n)
    p = Probability(p)
    x = float(x)
    if not p < x <= 1.0:
        raise DomainError(f"x must lie in (p, 1] = ({float(p)!r}, 1], got {x!r}")
    exact = hn_law(n, p).tail_log_prob(_atom_index(n, x))
    return exact, -n * bernoulli_rate(p, x)


def monte_carlo_event_freq(spec, threshold: float, n: int, event, trials: int, seed: int, chunk: int = 8192) -> float:
    """Fraction of ``trials`` simulated batches whose ``H_n`` lands in ``event``.

    Batches are consecutive blocks of ``n`` draws from one Philox stream keyed
    by ``seed``, so the result is a pure function of the arguments.
    """
    n = _check_n(n)
    if isinstance(trials, bool) or int(trials) != trials or trials < 1:
        raise DomainError(f"trials must be a positive integer, got {trials!r}")
    threshold = float(threshold)
    if not threshold > 0.0:
        raise DomainError(f"threshold must be positive, got {threshold!r}")
    member = event.contains(_atom_values(n))
    bitgen = philox(seed)
    hits = 0
    done = 0
    while done < trials:
        m = min(chunk, trials - done)
        u = _raw_to_unit(bitgen.random_raw(m * n))
        x = np.asarray(spec.quantile(u)).reshape(m, n)
        k = np.count_nonzero(x > threshold, axis=1)
        hits += int(np.count_nonzero(member[k]))
        done += m
    return hits / trials
