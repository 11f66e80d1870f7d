import math

import numpy as np
import pytest

from zoomax import (
    VianaParams,
    collet_eckmann_check,
    expansion_outside_check,
    iterate,
    make_expanding_circle,
    make_quadratic,
    make_viana,
    slow_recurrence_check,
    viana_step,
)
from zoomax.dynamics import circle_distance
from zoomax.errors import InvalidInputError
from zoomax.families import find_invariant_strip, viana_strip_violations


class TestExpandingCircle:
    def test_doubling_is_degree_two(self, doubling):
        assert doubling.degree == 2
        assert doubling.name == "doubling"
        assert doubling.critical_set == ()

    def test_derivative_convention(self, doubling):
        # Inverse-norm products are (1/d)^n for the degree-d family.
        from zoomax import derivative_product

        assert derivative_product(doubling, 0.123, 6) == pytest.approx(2.0**-6)

    def test_metric_expansion_factor(self, rng):
        for d in (2, 3, 5):
            model = make_expanding_circle(d)
            delta = 1 / (4 * d)
            for _ in range(200):
                a = float(rng.uniform())
                b = (a + rng.uniform(-delta, delta)) % 1.0
                lhs = circle_distance(model.step(a), model.step(b))
                assert lhs == pytest.approx(d * circle_distance(a, b), abs=1e-12)

    def test_degree_must_be_at_least_two(self):
        with pytest.raises(InvalidInputError):
            make_expanding_circle(1)


class TestQuadraticFamily:
    def test_invariant_interval(self, chebyshev, rng):
        # Orbit of the critical value stays inside [-a, a].
        orbit = iterate(chebyshev.map, chebyshev.map.step(0.0), 500)
        assert all(-2.0 - 1e-12 <= p <= 2.0 + 1e-12 for p in orbit.points)

    def test_core_estimate(self):
        fam = make_quadratic(1.8)
        lo, hi = fam.core
        assert lo == pytest.approx(1.8 - 1.8**2)
        assert hi == pytest.approx(1.8)
        orbit = iterate(fam.map, fam.map.step(0.0), 300)
        assert all(lo - 1e-9 <= p <= hi + 1e-9 for p in orbit.points)

    def test_parameter_range(self):
        with pytest.raises(InvalidInputError):
            make_quadratic(2.5)


class TestColletEckmann:
    def test_chebyshev_at_log_four(self, chebyshev):
        report = collet_eckmann_check(chebyshev, math.log(4), 50)
        assert report.passed
        assert abs(report.margin) <= 1e-10

    def test_rate_too_large_fails_at_one(self, chebyshev):
        report = collet_eckmann_check(chebyshev, 1.5, 50)
        assert not report.passed
        assert report.first_failure == 1
        # 4 < e^1.5 ~ 4.4817
        assert math.exp(1.5) == pytest.approx(4.4817, abs=1e-4)

    def test_zero_horizon_rejected(self, chebyshev):
        with pytest.raises(InvalidInputError):
            collet_eckmann_check(chebyshev, 0.5, 0)


class TestSlowRecurrence:
    def test_empty_critical_set_vacuous(self, doubling):
        report = slow_recurrence_check(doubling, 0.3, 0.5, 100)
        assert report.passed
        assert "vacuous" in report.note

    def test_fixed_orbit_far_from_critical(self, chebyshev):
        report = slow_recurrence_check(chebyshev.map, 2.0, 0.5, 200)
        assert report.passed
        assert report.margin > 1.0

    def test_hitting_critical_point_fails(self, chebyshev):
        # sqrt(2) maps to 0 in one step; distance 0 < exp(-sigma).
        report = slow_recurrence_check(chebyshev.map, math.sqrt(2.0), 0.5, 10)
        assert not report.passed
        assert report.first_failure == 1


class TestExpansionOutside:
    def test_fixed_point_orbit_passes(self, chebyshev):
        report = expansion_outside_check(
            chebyshev, -2.0, delta=0.1, kappa=1.0, beta_rate=math.log(2), horizon=50
        )
        assert report.passed
        assert report.segments_checked == 1
        assert report.segments_skipped == 0

    def test_window_steps_are_skipped(self, chebyshev):
        # An orbit through the window splits into excursions.
        report = expansion_outside_check(
            chebyshev, 0.05, delta=0.1, kappa=0.5, beta_rate=0.1, horizon=30
        )
        assert report.segments_skipped >= 1

    def test_vacuous_when_no_segment_qualifies(self, chebyshev):
        report = expansion_outside_check(
            chebyshev, 0.0, delta=2.5, kappa=1.0, beta_rate=0.1, horizon=5
        )
        assert report.passed
        assert report.segments_checked == 0
        assert "vacuous" in report.note


class TestViana:
    def test_step_examples(self):
        params = VianaParams()
        assert viana_step((0.0, 0.0), params) == pytest.approx((0.0, 1.8))
        theta, x = viana_step((0.25, 1.0), params)
        assert theta == pytest.approx(0.0, abs=1e-12)
        assert x == pytest.approx(0.81)

    def test_invariant_strip_contains_image(self):
        lo, hi = find_invariant_strip(1.8, 0.01)
        a_max = 1.8 + 0.01
        a_min = 1.8 - 0.01
        assert a_max < hi
        assert a_min - max(lo * lo, hi * hi) > lo

    def test_base_marginal_is_expanding_circle(self, rng):
        params = VianaParams()
        base = make_expanding_circle(params.d)
        for _ in range(100):
            theta = float(rng.uniform())
            x = float(rng.uniform(-1.0, 1.0))
            assert viana_step((theta, x), params)[0] == pytest.approx(
                base.step(theta), abs=1e-12
            )

    def test_orbits_stay_in_strip(self):
        params = VianaParams()
        assert viana_strip_violations(params, n_points=100, steps=10_000) == 0

    def test_degree_floor(self):
        with pytest.raises(InvalidInputError):
            VianaParams(d=8)

    def test_critical_distance_is_fiber_coordinate(self):
        vmap = make_viana(VianaParams())
        assert vmap.dist_to_critical((0.3, -0.25)) == pytest.approx(0.25)
