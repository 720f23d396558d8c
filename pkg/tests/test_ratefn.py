import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hazard_ldp.errors import DomainError
from hazard_ldp.ratefn import (
    Probability,
    RateCurve,
    bernoulli_rate,
    centered_rate,
    centered_rate_curve,
    centered_rate_dp,
    centered_rate_dp2,
    centered_rate_dp_at_zero,
    centered_rate_series,
    ch_rate,
    power_series_identity_residual,
    rate_curve,
    symmetry_defect_approx,
    symmetry_defect_exact,
)

from . import oracles

E1 = math.exp(-1)
P_GRID = [round(0.05 * i, 2) for i in range(1, 20)]
FD_EDGE_MARGIN = 0.1

# Frozen from the 50-digit oracle in tests/oracles.py.
BERN_HALF_QUARTER = 0.13081203594113695913
CH_E1_Y2 = 0.13553104507415219610
CH_E1_INF = 0.45867514538708189102
J_HALF_PLUS = 0.07954150586530130326
J_HALF_MINUS = 0.22843075792607921189
DP2_HALF_HALF = 0.88882111587326802182
DEFECT_E1_Z1 = 0.86446895492584780390


probabilities = st.floats(min_value=1e-6, max_value=1 - 1e-6)


def test_frozen_values_match_oracle():
    assert float(oracles.bern(0.5, 0.25)) == pytest.approx(BERN_HALF_QUARTER, abs=1e-18)
    assert float(oracles.ch(E1, 2)) == pytest.approx(CH_E1_Y2, abs=1e-15)
    assert float(oracles.centered(0.5, 0.5)) == pytest.approx(J_HALF_PLUS, abs=1e-15)
    assert float(oracles.centered(0.5, -0.5)) == pytest.approx(J_HALF_MINUS, abs=1e-15)
    assert float(oracles.dp2_fd(0.5, 0.5)) == pytest.approx(DP2_HALF_HALF, rel=1e-8)


class TestProbability:
    @pytest.mark.parametrize("bad", [0, 1, -0.1, 1.5, float("nan"), float("inf")])
    def test_rejects_outside_open_interval(self, bad):
        with pytest.raises(DomainError):
            Probability(bad)

    def test_idempotent_and_hazard(self):
        p = Probability(0.25)
        assert Probability(p) is p
        assert p.hazard == pytest.approx(math.log(4))
        assert Probability.from_hazard(1.0) == pytest.approx(E1, rel=1e-16)

    def test_functions_validate_raw_floats(self):
        with pytest.raises(DomainError):
            ch_rate(1.0, 0.5)


class TestBernoulliRate:
    def test_minimum(self):
        assert bernoulli_rate(0.5, 0.5) == 0.0

    def test_boundaries_use_zero_log_zero(self):
        assert bernoulli_rate(0.5, 0.0) == pytest.approx(math.log(2), abs=1e-16)
        assert bernoulli_rate(0.3, 1.0) == pytest.approx(-math.log(0.3), abs=1e-15)

    def test_quarter(self):
        assert bernoulli_rate(0.5, 0.25) == pytest.approx(BERN_HALF_QUARTER, abs=1e-15)

    @pytest.mark.parametrize("x", [-0.01, 1.01, float("nan")])
    def test_domain(self, x):
        with pytest.raises(DomainError):
            bernoulli_rate(0.5, x)

    @given(probabilities, st.floats(min_value=0.0, max_value=1.0))
    def test_nonnegative_zero_only_at_p(self, p, x):
        r = bernoulli_rate(p, x)
        assert r >= 0.0
        if abs(x - p) > 1e-3:
            assert r > 0.0

    @settings(max_examples=60)
    @given(st.floats(min_value=0.01, max_value=0.99), st.floats(min_value=0.0, max_value=1.0))
    def test_against_high_precision(self, p, x):
        assert bernoulli_rate(p, x) == pytest.approx(float(oracles.bern(p, x)), abs=1e-14)


class TestChRate:
    def test_zero_at_hazard(self):
        assert ch_rate(E1, 1.0) == pytest.approx(0.0, abs=1e-16)

    def test_infinite_level(self):
        assert ch_rate(E1, math.inf) == pytest.approx(CH_E1_INF, abs=1e-16)

    def test_y2(self):
        assert ch_rate(E1, 2.0) == pytest.approx(CH_E1_Y2, abs=1e-15)

    def test_y0_is_minus_log_p(self):
        assert ch_rate(E1, 0.0) == pytest.approx(1.0, abs=1e-16)

    def test_domain(self):
        with pytest.raises(DomainError):
            ch_rate(0.5, -1e-9)

    def test_contraction_identity_grid(self):
        ys = np.arange(0, 201) * 0.05
        worst = max(abs(ch_rate(p, y) - bernoulli_rate(p, math.exp(-y))) for p in P_GRID for y in ys)
        assert worst <= 1e-12

    def test_unique_zero(self):
        for p in P_GRID:
            h = -math.log(p)
            assert ch_rate(p, h) <= 1e-12
            for y in np.arange(0, 401) * 0.025:
                if abs(y - h) >= 1e-3:
                    assert ch_rate(p, y) > 0.0

    def test_unimodal(self):
        for p in (0.05, 0.4, 0.9):
            h = -math.log(p)
            ys = np.linspace(0, 8, 801)
            r = np.array([ch_rate(p, y) for y in ys])
            left, right = r[ys < h], r[ys > h]
            assert np.all(np.diff(left) < 0) and np.all(np.diff(right) > 0)

    @settings(max_examples=60)
    @given(st.floats(min_value=0.01, max_value=0.99), st.floats(min_value=0.0, max_value=30.0))
    def test_against_high_precision(self, p, y):
        assert ch_rate(p, y) == pytest.approx(float(oracles.ch(p, y)), abs=1e-13)


class TestCenteredRate:
    @pytest.mark.parametrize("p", [0.01, 0.3, 0.5, 0.99])
    def test_zero_at_origin(self, p):
        assert centered_rate(p, 0.0) == 0.0

    def test_values(self):
        assert centered_rate(0.5, 0.5) == pytest.approx(J_HALF_PLUS, abs=1e-15)
        assert centered_rate(0.5, -0.5) == pytest.approx(J_HALF_MINUS, abs=1e-15)

    def test_left_boundary_and_domain(self):
        p = 0.2
        assert centered_rate(p, math.log(p)) == pytest.approx(-math.log(p), abs=1e-15)
        with pytest.raises(DomainError):
            centered_rate(p, math.log(p) - 1e-9)

    def test_centering_identity(self):
        worst = 0.0
        for p in P_GRID:
            for z in np.linspace(math.log(p), 8, 97):
                worst = max(worst, abs(centered_rate(p, z) - ch_rate(p, z - math.log(p))))
        assert worst <= 1e-12

    def test_monotone_in_p(self):
        for z in (-1.0, -0.5, -0.1, 0.1, 0.5, 1.0):
            vals = [centered_rate(p, z) for p in P_GRID if z >= math.log(p)]
            assert all(b > a for a, b in zip(vals, vals[1:]))

    def test_asymmetry_grid(self):
        for p in P_GRID:
            h = -math.log(p)
            for z in np.linspace(0, h, 52)[1:-1]:
                assert centered_rate(p, z) < centered_rate(p, -z)

    @given(probabilities, st.floats(min_value=0.0, max_value=1.0, exclude_min=True, exclude_max=True))
    def test_asymmetry_property(self, p, frac):
        z = frac * -math.log(p)
        if z > 1e-6:
            assert centered_rate(p, z) < centered_rate(p, -z)


class TestDerivatives:
    def test_dp_limit_at_p0(self):
        expected = 1 - 2 / math.e
        assert centered_rate_dp_at_zero(1.0) == pytest.approx(expected, rel=1e-14)
        assert centered_rate_dp(1e-12, 1.0) == pytest.approx(expected, rel=1e-10)

    def test_dp_at_origin(self):
        assert centered_rate_dp(0.5, 0.0) == 0.0

    def test_dp_matches_fd_oracle(self):
        for p, z in [(0.5, 0.5), (0.2, -1.0), (0.8, 0.1), (0.05, 2.0)]:
            assert centered_rate_dp(p, z) == pytest.approx(float(oracles.dp_fd(p, z)), rel=1e-9)

    def test_dp_float_central_difference(self):
        h = 1e-4
        fd = (centered_rate(0.5 + h, 0.5) - centered_rate(0.5 - h, 0.5)) / (2 * h)
        assert centered_rate_dp(0.5, 0.5) == pytest.approx(fd, rel=1e-6)

    def test_dp_fd_grid(self):
        h = 1e-4
        for p in P_GRID:
            for z in (-1.0, -0.5, -0.1, 0.1, 0.5, 1.0):
                if z - math.log(p) < FD_EDGE_MARGIN or 1 - p < FD_EDGE_MARGIN:
                    continue
                fd = (centered_rate(p + h, z) - centered_rate(p - h, z)) / (2 * h)
                assert centered_rate_dp(p, z) == pytest.approx(fd, rel=1e-6)

    def test_dp2(self):
        assert centered_rate_dp2(0.5, 0.0) == 0.0
        assert centered_rate_dp2(0.5, 0.5) == pytest.approx(DP2_HALF_HALF, rel=1e-14)

    def test_dp2_positive_and_fd(self):
        h = 1e-4
        for p in P_GRID:
            for z in (-1.0, -0.5, -0.1, 0.1, 0.5, 1.0):
                if z < math.log(p + h):
                    continue
                d2 = centered_rate_dp2(p, z)
                assert d2 > 0
                fd = (centered_rate(p + h, z) - 2 * centered_rate(p, z) + centered_rate(p - h, z)) / h**2
                assert fd > 0
                # the h**2 truncation term blows up near z = ln p and p = 1
                if z - math.log(p) >= FD_EDGE_MARGIN and 1 - p >= FD_EDGE_MARGIN:
                    assert d2 == pytest.approx(fd, rel=1e-6)

    def test_dp_at_zero_values(self):
        assert centered_rate_dp_at_zero(0.0) == 0.0
        assert centered_rate_dp_at_zero(-0.5) == pytest.approx(1 - 0.5 * math.exp(0.5), rel=1e-14)
        for z in (-3, -1, -1e-3, 1e-3, 1, 5):
            assert centered_rate_dp_at_zero(z) > 0

    def test_boundary_limits(self):
        p = 0.3
        assert centered_rate_dp(p, math.log(p)) == math.inf
        assert centered_rate_dp2(p, math.log(p)) == math.inf
        assert centered_rate_dp(p, math.inf) == pytest.approx(1 / 0.7)
        assert centered_rate_dp2(p, math.inf) == pytest.approx(1 / 0.49)
        # one-sided difference just inside the left edge grows without bound
        z = math.log(p) + 1e-9
        assert centered_rate_dp(p, z) > centered_rate_dp(p, z + 1e-3)

    def test_domain(self):
        with pytest.raises(DomainError):
            centered_rate_dp(0.5, -1.0)
        with pytest.raises(DomainError):
            centered_rate_dp2(0.5, -1.0)
        with pytest.raises(DomainError):
            centered_rate_dp_at_zero(math.inf)


class TestSeries:
    def test_matches_closed_form(self):
        assert centered_rate_series(0.5, 0.5, 60) == pytest.approx(centered_rate(0.5, 0.5), abs=1e-10)
        assert centered_rate_series(0.5, 0.0, 60) == pytest.approx(0.0, abs=1e-12)

    def test_validity_boundary(self):
        with pytest.raises(DomainError):
            centered_rate_series(0.9, -0.2, 1000)
        with pytest.raises(DomainError):
            centered_rate_series(0.5, math.log(0.5))

    def test_adaptive_matches_where_valid(self):
        for p in P_GRID:
            for z in np.linspace(math.log(p / 0.9), 6, 40):
                assert centered_rate_series(p, z) == pytest.approx(centered_rate(p, z), abs=1e-10)
                assert centered_rate_series(p, z, 200) == pytest.approx(centered_rate(p, z), abs=1e-10)

    def test_truncation_error_shrinks(self):
        errs = [abs(centered_rate_series(0.5, -0.4, k) - centered_rate(0.5, -0.4)) for k in (2, 5, 10, 20, 40)]
        assert all(b < a for a, b in zip(errs, errs[1:]))

    def test_identity_residual(self):
        assert power_series_identity_residual(0.0, 7) == 0.0
        assert abs(power_series_identity_residual(0.5, 50)) < 1e-12
        assert abs(power_series_identity_residual(-0.5, 50)) < 1e-12
        for x in np.linspace(-0.9, 0.9, 37):
            assert abs(power_series_identity_residual(x, 200)) <= 1e-10
        with pytest.raises(DomainError):
            power_series_identity_residual(1.0, 10)

    @given(st.floats(min_value=-0.95, max_value=0.95), st.integers(min_value=2, max_value=30))
    def test_residual_within_tail_bound(self, x, k):
        tail = sum(abs(x) ** j / (j * j - j) for j in range(k + 1, k + 2000))
        assert abs(power_series_identity_residual(x, k)) <= tail + 1e-15


class TestSymmetryDefect:
    def test_values(self):
        assert symmetry_defect_exact(0.5, 0.5) == pytest.approx(J_HALF_MINUS - J_HALF_PLUS, abs=1e-15)
        assert symmetry_defect_exact(E1, 1.0) == pytest.approx(DEFECT_E1_Z1, abs=1e-14)
        assert symmetry_defect_exact(0.5, 1e-8) < 1e-12

    def test_right_end_is_closed_for_exact_only(self):
        h = -math.log(0.5)
        symmetry_defect_exact(0.5, h)
        with pytest.raises(DomainError):
            symmetry_defect_approx(0.5, h)
        with pytest.raises(DomainError):
            symmetry_defect_exact(0.5, 0.0)

    def test_approx_error_bound(self):
        p, z = 0.2, 1.0
        exact = float(oracles.defect_exact(p, z))
        assert symmetry_defect_exact(p, z) == pytest.approx(exact, abs=1e-14)
        assert abs(symmetry_defect_approx(p, z) - exact) <= p**3 * math.sinh(3 * z)

    def test_approx_vanishes_with_p(self):
        assert abs(symmetry_defect_approx(1e-12, 0.5)) < 1e-11

    def test_approx_error_scales_like_p_cubed(self):
        e1 = abs(symmetry_defect_approx(0.1, 0.8) - symmetry_defect_exact(0.1, 0.8))
        e2 = abs(symmetry_defect_approx(0.05, 0.8) - symmetry_defect_exact(0.05, 0.8))
        assert 4 <= e1 / e2 <= 16

    def test_series_form_of_defect(self):
        # the defect equals the full hyperbolic series, not just its second-order part
        p, z = 0.25, 0.7
        full = 2 * p * (z * math.cosh(z) + math.sinh(z) * (math.log1p(-p) - 1)) + math.fsum(
            2 * p**k * math.sinh(k * z) / (k * k - k) for k in range(2, 400)
        )
        assert full == pytest.approx(symmetry_defect_exact(p, z), abs=1e-13)


class TestRateCurve:
    def test_argmin_and_zero(self):
        ys = [i * 0.01 for i in range(401)]
        curve = rate_curve(E1, ys)
        assert curve.argmin() == 1.0
        assert min(curve.ordinates) <= 1e-12
        assert curve.minimizer == pytest.approx(1.0)

    def test_centered(self):
        curve = centered_rate_curve(0.4, [-0.5, 0.0, 0.5])
        assert curve.argmin() == 0.0 and curve.minimizer == 0.0

    def test_invariants(self):
        with pytest.raises(DomainError):
            RateCurve(Probability(0.5), (1.0, 0.5), (0.1, 0.2))
        with pytest.raises(DomainError):
            RateCurve(Probability(0.5), (0.5,), (-0.1,))
