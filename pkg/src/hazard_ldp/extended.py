"""Extended-real conventions: ``ln(0) = -inf``, ``0 ln 0 = 0``, ``exp(-inf) = 0``.

Extended reals are carried as plain Python floats, with ``math.inf`` as the
distinguished infinite value. The helpers below branch on exact zeros so the
conventions never depend on floating-point accidents.
"""

import math

INF = math.inf


def log_ext(x):
    """Natural log on ``[0, inf]`` with ``log_ext(0) == -inf``."""
    if x == 0.0:
        return -INF
    return math.log(x)


def neg_log(x):
    """``-ln(x)`` on ``[0, 1]``, returning ``+inf`` at 0 and ``0.0`` at 1."""
    if x == 0.0:
        return INF
    if x == 1.0:
        return 0.0
    return -math.log(x)


def log_ratio(num, den, diff):
    """``ln(num / den)`` given ``diff == num - den`` computed accurately.

    Uses ``log1p`` when the ratio is near one so that rates near their zero
    keep full absolute precision.
    """
    if num == 0.0:
        return -INF
    if abs(diff) <= 0.5 * den:
        return math.log1p(diff / den)
    return math.log(num) - math.log(den)


def xlog_ratio(x, num, den, diff):
    """``x * ln(num / den)`` with ``0 * ln(0) = 0``."""
    if x == 0.0:
        return 0.0
    return x * log_ratio(num, den, diff)


def format_ext(x):
    """Render a float losslessly; ``inf`` for the infinite value."""
    if x == INF:
        return "inf"
    if x == -INF:
        return "-inf"
    return format(x, ".17g")


def parse_ext(text):
    text = text.strip()
    if text in ("inf", "+inf"):
        return INF
    if text == "-inf":
        return -INF
    return float(text)
