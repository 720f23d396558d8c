"""Empirical survival fraction and empirical cumulative hazard at a threshold.

Samples are generated by inverse-CDF transform of uniforms drawn from a
Philox counter-based generator keyed directly by the 64-bit seed, so the
same ``(spec, n, seed)`` gives bit-identical batches everywhere.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import DomainError, InputError
from .extended import neg_log

_TWO_POW_52 = float(2**52)


@dataclass(frozen=True)
class SampleBatch:
    """Positive waiting times; ``seed`` is ``None`` for user-supplied data."""

    values: tuple
    seed: Optional[int] = None

    def __post_init__(self):
        vals = tuple(float(v) for v in self.values)
        if not vals:
            raise DomainError("a sample batch needs at least one value")
        if any(not v > 0.0 for v in vals):
            raise DomainError("waiting times must be strictly positive")
        object.__setattr__(self, "values", vals)

    def __len__(self):
        return len(self.values)


@dataclass(frozen=True)
class ThresholdSummary:
    """Number of the ``n`` waiting times strictly above ``threshold``."""

    threshold: float
    n: int
    successes: int

    def __post_init__(self):
        if self.n < 1:
            raise DomainError(f"n must be positive, got {self.n!r}")
        if not 0 <= self.successes <= self.n:
            raise DomainError(f"successes must lie in [0, {self.n}], got {self.successes!r}")


def summarize(batch: SampleBatch, threshold: float) -> ThresholdSummary:
    """Count values strictly greater than ``threshold``; ties count as failures."""
    threshold = float(threshold)
    if not threshold > 0.0:
        raise DomainError(f"threshold must be positive, got {threshold!r}")
    k = sum(1 for v in batch.values if v > threshold)
    return ThresholdSummary(threshold, len(batch.values), k)


def empirical_survival(summary: ThresholdSummary) -> float:
    return summary.successes / summary.n


def cumhaz_from_count(successes: int, n: int) -> float:
    """``-ln(successes / n)``; ``inf`` when nothing survives the threshold."""
    return neg_log(successes / n)


def empirical_cumhaz(summary: ThresholdSummary) -> float:
    return cumhaz_from_count(summary.successes, summary.n)


def uniform_stream(seed: int, size: int) -> np.ndarray:
    """``size`` uniforms in the open interval (0, 1) from ``Philox(key=seed)``.

    Each uniform is ``(m + 1/2) / 2**52`` with ``m`` the top 52 bits of one raw
    64-bit Philox output; both ends of (0, 1) are excluded exactly.
    """
    bitgen = np.random.Philox(key=_check_seed(seed))
    return _raw_to_unit(bitgen.random_raw(size))


def _raw_to_unit(raw):
    return ((raw >> np.uint64(12)).astype(np.float64) + 0.5) / _TWO_POW_52


def _check_seed(seed):
    if isinstance(seed, bool) or int(seed) != seed or not 0 <= seed < 2**64:
        raise DomainError(f"seed must be an unsigned 64-bit integer, got {seed!r}")
    return int(seed)


def philox(seed: int) -> np.random.Philox:
    return np.random.Philox(key=_check_seed(seed))


def sample(spec, n: int, seed: int) -> SampleBatch:
    """Draw ``n`` waiting times from ``spec`` by inverse-CDF sampling."""
    if isinstance(n, bool) or int(n) != n or n < 1:
        raise DomainError(f"n must be a positive integer, got {n!r}")
    u = uniform_stream(seed, int(n))
    x = np.atleast_1d(spec.quantile(u))
    return SampleBatch(tuple(x.tolist()), int(seed))


def read_waiting_times(path) -> SampleBatch:
    """Load a single-column CSV with header ``waiting_time``.

    Raises :class:`InputError` naming the offending line on bad input.
    """
    values = []
    try:
        fh = open(path, newline="")
    except OSError as exc:
        raise InputError(f"cannot open file: {exc.strerror}", path) from None
    with fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None or [h.strip() for h in header] != ["waiting_time"]:
            raise InputError("expected header 'waiting_time'", path, 1)
        for row in reader:
            line = reader.line_num
            if not row or all(not c.strip() for c in row):
                continue
            if len(row) != 1:
                raise InputError(f"expected one column, got {len(row)}", path, line)
            try:
                v = float(row[0])
            except ValueError:
                raise InputError(f"not a number: {row[0]!r}", path, line) from None
            if not (math.isfinite(v) and v > 0.0):
                raise InputError(f"waiting time must be positive, got {row[0].strip()!r}", path, line)
            values.append(v)
    if not values:
        raise InputError("no waiting times found", path)
    return SampleBatch(tuple(values))
