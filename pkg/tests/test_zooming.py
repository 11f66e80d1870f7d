import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from zoomax import (
    ContractionSeq,
    HyperbolicParams,
    ShiftSpace,
    SymbolicPoint,
    WeightedShiftMetric,
    check_bounded_distortion,
    detect_hyperbolic_times,
    hyperbolic_frequency,
    is_hyperbolic_time,
    iterate,
    local_expansion_bounds,
    make_expanding_circle,
    truncated_distance,
    verify_preball_contraction,
)
from zoomax.errors import AmbiguityError, InvalidInputError, SingularityError
from zoomax.zooming import branch_itinerary

from .bruteforce import brute_force_hyperbolic_times

QUAD_PARAMS = HyperbolicParams(sigma=0.9, epsilon=0.1, beta=1.0)


class TestTruncatedDistance:
    def test_below_radius(self):
        assert truncated_distance(0.35, [0.4], 0.1) == pytest.approx(0.05)

    def test_above_radius_is_one(self):
        assert truncated_distance(0.9, [0.4], 0.1) == 1.0

    def test_empty_set_is_one(self):
        assert truncated_distance(0.9, [], 0.1) == 1.0

    @given(dist=st.floats(0, 2), delta=st.floats(1e-6, 1.5))
    @settings(max_examples=100, deadline=None)
    def test_piecewise_formula(self, dist, delta):
        got = truncated_distance(dist, [0.0], delta)
        assert got == (dist if dist < delta else 1.0)

    def test_bad_radius(self):
        with pytest.raises(InvalidInputError):
            truncated_distance(0.1, [0.0], 0.0)


class TestDetection:
    def test_doubling_at_the_rate(self, doubling):
        record = detect_hyperbolic_times(doubling, 0.37, HyperbolicParams(sigma=0.5), 100)
        assert record.indices == tuple(range(1, 101))
        assert record.frequency == 1.0

    def test_doubling_below_the_rate(self, doubling):
        record = detect_hyperbolic_times(doubling, 0.37, HyperbolicParams(sigma=0.4), 100)
        assert record.indices == ()

    def test_matches_brute_force_on_quadratic(self, chebyshev, rng):
        for _ in range(20):
            x0 = float(rng.uniform(-1.95, 1.95))
            fast = detect_hyperbolic_times(chebyshev.map, x0, QUAD_PARAMS, 200).indices
            slow = brute_force_hyperbolic_times(chebyshev.map, x0, QUAD_PARAMS, 200)
            assert fast == slow

    def test_single_time_reverification(self, chebyshev, rng):
        x0 = float(rng.uniform(-1.9, 1.9))
        record = detect_hyperbolic_times(chebyshev.map, x0, QUAD_PARAMS, 80)
        for n in record.indices[:5]:
            assert is_hyperbolic_time(chebyshev.map, x0, n, QUAD_PARAMS)

    def test_concatenation(self, chebyshev, rng):
        checked = 0
        for _ in range(50):
            x0 = float(rng.uniform(-1.9, 1.9))
            rec = detect_hyperbolic_times(chebyshev.map, x0, QUAD_PARAMS, 120)
            for n in rec.indices[:3]:
                fx = iterate(chebyshev.map, x0, n).points[-1]
                rec2 = detect_hyperbolic_times(chebyshev.map, fx, QUAD_PARAMS, 40)
                for m in rec2.indices[:3]:
                    assert (n + m) in detect_hyperbolic_times(
                        chebyshev.map, x0, QUAD_PARAMS, n + m
                    ).indices
                    checked += 1
        assert checked >= 100

    def test_sigma_monotonicity_without_critical_set(self, doubling, tripling):
        # With an empty critical set the recurrence condition is vacuous and
        # detection is monotone in sigma.
        for model, x in ((doubling, 0.137), (tripling, 0.58)):
            small = detect_hyperbolic_times(model, x, HyperbolicParams(sigma=0.45), 150)
            large = detect_hyperbolic_times(model, x, HyperbolicParams(sigma=0.75), 150)
            assert set(small.indices) <= set(large.indices)

    def test_zero_horizon_rejected(self, doubling):
        with pytest.raises(InvalidInputError):
            detect_hyperbolic_times(doubling, 0.1, HyperbolicParams(sigma=0.5), 0)


class TestFrequency:
    def test_doubling_all_points(self, doubling, rng):
        sample = rng.uniform(0, 1, 10)
        stats = hyperbolic_frequency(doubling, sample, HyperbolicParams(sigma=0.5), 50)
        assert stats.minimum == stats.maximum == 1.0

    def test_statistics_order(self, chebyshev, rng):
        sample = rng.uniform(-1.9, 1.9, 8)
        stats = hyperbolic_frequency(chebyshev.map, sample, QUAD_PARAMS, 100)
        assert stats.minimum <= stats.mean <= stats.maximum

    def test_zero_horizon_rejected(self, doubling):
        with pytest.raises(InvalidInputError):
            hyperbolic_frequency(doubling, [0.1], HyperbolicParams(sigma=0.5), 0)

    def test_empty_sample_rejected(self, doubling):
        with pytest.raises(InvalidInputError):
            hyperbolic_frequency(doubling, [], HyperbolicParams(sigma=0.5), 10)


class TestPreball:
    def test_doubling_exact_halving(self, doubling):
        seq = ContractionSeq.exponential(math.log(2))
        report = verify_preball_contraction(doubling, 0.347, 5, seq, pair_sample=64)
        assert report.passed
        # Pullback halves distances exactly, so the margins sit at equality.
        assert abs(report.worst_margin) < 1e-9

    def test_doubling_strict_margin_at_half_rate(self, doubling):
        seq = ContractionSeq.exponential(0.5 * math.log(2))
        report = verify_preball_contraction(doubling, 0.347, 5, seq, pair_sample=64)
        assert report.passed
        assert report.worst_margin > 0

    def test_quadratic_at_detected_time(self, chebyshev, rng):
        seq = ContractionSeq.exponential(0.5 * math.log(1 / 0.9))
        found = 0
        for _ in range(6):
            x0 = float(rng.uniform(-1.9, 1.9))
            rec = detect_hyperbolic_times(chebyshev.map, x0, QUAD_PARAMS, 60)
            usable = [n for n in rec.indices if 5 <= n <= 24]
            if not usable:
                continue
            report = verify_preball_contraction(
                chebyshev.map, x0, usable[-1], seq, pair_sample=96, delta=0.05
            )
            assert report.passed
            found += 1
        assert found >= 3

    def test_ambiguous_itinerary(self, doubling):
        with pytest.raises(AmbiguityError):
            branch_itinerary(doubling, 0.5 + 1e-10, 3)


class TestDistortion:
    def test_doubling_constant_jacobian(self, doubling):
        report = check_bounded_distortion(doubling, 0.347, 5, pair_sample=128)
        assert report.rho_hat == 0.0

    def test_tripling_constant_jacobian(self, tripling):
        report = check_bounded_distortion(tripling, 0.21, 4, pair_sample=128)
        assert report.rho_hat == 0.0

    def test_quadratic_finite_and_stable(self, chebyshev):
        x0 = 1.2345
        rec = detect_hyperbolic_times(chebyshev.map, x0, QUAD_PARAMS, 60)
        n = [m for m in rec.indices if 5 <= m <= 20][-1]
        small = check_bounded_distortion(chebyshev.map, x0, n, pair_sample=200, delta=0.05)
        large = check_bounded_distortion(chebyshev.map, x0, n, pair_sample=400, delta=0.05)
        assert 0 < small.rho_hat < math.inf
        assert large.rho_hat <= small.rho_hat * 1.1
        assert small.rho_hat <= large.rho_hat * 1.1


class TestLocalExpansion:
    def test_standard_shift_is_conformal_with_rate_two(self, rng):
        metric = WeightedShiftMetric.geometric(0.5)
        space = ShiftSpace(metric, length=64)
        word = tuple(int(b) for b in rng.integers(0, 2, 64))
        p = SymbolicPoint(word=word)
        bounds = local_expansion_bounds(
            space, p, [2.0**-k for k in range(3, 13)], samples_per_radius=16
        )
        assert bounds.d_minus == pytest.approx(2.0, abs=1e-9)
        assert bounds.d_plus == pytest.approx(2.0, abs=1e-9)

    def test_doubling_on_circle(self, doubling):
        bounds = local_expansion_bounds(
            doubling, 0.3, [10.0**-k for k in range(2, 7)], samples_per_radius=16
        )
        assert bounds.d_minus == pytest.approx(2.0, abs=1e-6)
        assert bounds.d_plus == pytest.approx(2.0, abs=1e-6)

    def test_quadratic_critical_point_degenerates(self, chebyshev):
        bounds = local_expansion_bounds(
            chebyshev.map, 0.0, [10.0**-k for k in range(1, 7)], samples_per_radius=16
        )
        ratios = [hi for _, _, hi in bounds.per_radius]
        assert ratios[-1] < ratios[0]
        assert bounds.d_plus < 1e-5

    def test_radii_must_decrease(self, doubling):
        with pytest.raises(InvalidInputError):
            local_expansion_bounds(doubling, 0.3, [0.1, 0.1])
