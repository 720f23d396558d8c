"""Large-deviation rate functions of the empirical cumulative hazard.

The asymptotic rate functions live in :mod:`hazard_ldp.ratefn`; the exact
binomial law of the estimator, used to check them at finite ``n``, lives in
:mod:`hazard_ldp.oracle`.
"""

from .errors import DomainError, InputError, SizeError
from .ratefn import (
    Probability,
    bernoulli_rate,
    centered_rate,
    centered_rate_dp,
    centered_rate_dp2,
    centered_rate_dp_at_zero,
    centered_rate_series,
    ch_rate,
    power_series_identity_residual,
    symmetry_defect_approx,
    symmetry_defect_exact,
)

__version__ = "0.1.0"
