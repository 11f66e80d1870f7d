import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from zoomax import (
    birkhoff_sum,
    covering_time,
    derivative_product,
    iterate,
    make_expanding_circle,
    make_potential,
    make_quadratic,
    make_viana,
    preimages,
    viana_step,
    VianaParams,
)
from zoomax.dynamics import AdicGrid, circle_distance
from zoomax.errors import BudgetError, DomainError, InvalidInputError, SingularityError

from .bruteforce import brute_force_birkhoff


class TestIterate:
    def test_doubling_two_cycle(self, doubling):
        orbit = iterate(doubling, 1 / 3, 2)
        assert orbit.length == 2
        assert orbit.points[0] == pytest.approx(1 / 3, abs=1e-15)
        assert orbit.points[1] == pytest.approx(2 / 3, abs=1e-15)
        assert orbit.points[2] == pytest.approx(1 / 3, abs=1e-12)

    def test_zero_steps(self, doubling):
        orbit = iterate(doubling, 0.37, 0)
        assert orbit.points == (0.37,)

    def test_viana_first_step(self):
        params = VianaParams(a0=1.8, alpha_v=0.01, d=16)
        vmap = make_viana(params)
        orbit = iterate(vmap, (0.0, 0.0), 1)
        assert orbit.points[1][0] == pytest.approx(0.0, abs=1e-15)
        assert orbit.points[1][1] == pytest.approx(1.8, abs=1e-15)

    def test_viana_step_arithmetic(self):
        params = VianaParams(a0=1.8, alpha_v=0.01, d=16)
        theta, x = viana_step((0.25, 1.0), params)
        assert theta == pytest.approx(0.0, abs=1e-12)
        assert x == pytest.approx(0.81, abs=1e-12)

    def test_outside_domain(self, chebyshev):
        with pytest.raises(DomainError):
            iterate(chebyshev.map, 5.0, 1)

    def test_negative_steps(self, doubling):
        with pytest.raises(InvalidInputError):
            iterate(doubling, 0.1, -1)


class TestBirkhoffSum:
    def test_constant_potential(self, doubling):
        phi = make_potential("one-minus-cos", doubling)
        const = type(phi)(name="c", eval=lambda x: 0.0 * x + 1.7)
        assert birkhoff_sum(doubling, const, 0.2, 9) == pytest.approx(9 * 1.7)

    def test_zero_steps_is_zero(self, doubling):
        phi = make_potential("sin", doubling)
        assert birkhoff_sum(doubling, phi, 0.9, 0) == 0.0

    def test_doubling_sin_third(self, doubling):
        phi = make_potential("sin", doubling)
        assert birkhoff_sum(doubling, phi, 1 / 3, 2) == pytest.approx(0.0, abs=1e-12)

    @given(
        x=st.floats(0, 1, exclude_max=True),
        m=st.integers(0, 32),
        n=st.integers(0, 32),
    )
    @settings(max_examples=60, deadline=None)
    def test_cocycle_property(self, x, m, n):
        doubling = make_expanding_circle(2)
        phi = make_potential("mixed", doubling)
        lhs = birkhoff_sum(doubling, phi, x, m + n)
        fx = iterate(doubling, x, m).points[-1]
        rhs = birkhoff_sum(doubling, phi, x, m) + birkhoff_sum(doubling, phi, fx, n)
        assert lhs == pytest.approx(rhs, abs=1e-10)

    def test_agrees_with_naive(self, tripling):
        phi = make_potential("cos", tripling)
        assert birkhoff_sum(tripling, phi, 0.21, 17) == pytest.approx(
            brute_force_birkhoff(tripling, phi, 0.21, 17), abs=1e-12
        )


class TestPreimages:
    def test_doubling_at_zero(self, doubling):
        assert preimages(doubling, 0.0, 1) == [0.0, 0.5]

    def test_doubling_at_third(self, doubling):
        got = preimages(doubling, 1 / 3, 1)
        assert got[0] == pytest.approx(1 / 6, abs=1e-15)
        assert got[1] == pytest.approx(2 / 3, abs=1e-15)

    @pytest.mark.parametrize("n", [1, 3, 7])
    def test_cardinality_and_roundtrip(self, doubling, n, rng):
        x = float(rng.uniform())
        leaves = preimages(doubling, x, n)
        assert len(leaves) == 2**n
        for y in leaves:
            assert circle_distance(iterate(doubling, y, n).points[-1], x) < 1e-10

    def test_budget(self, doubling):
        with pytest.raises(BudgetError):
            preimages(doubling, 0.1, 30)

    def test_branch_round_trip(self, doubling, tripling, chebyshev, rng):
        for model in (doubling, tripling, chebyshev.map):
            pts = rng.uniform(
                model.domain.lo if model.domain.kind == "interval" else 0.0,
                model.domain.hi if model.domain.kind == "interval" else 1.0,
                200,
            )
            for x in pts:
                for branch in model.branches:
                    if not branch.valid(x):
                        continue
                    y = model.domain.reduce(float(branch.apply(x)))
                    assert model.domain.distance(model.step(y), x) < 1e-12


class TestDerivativeProduct:
    def test_doubling_powers(self, doubling):
        for n in (1, 5, 12):
            assert derivative_product(doubling, 0.3, n) == pytest.approx(0.5**n)

    def test_quadratic_fixed_point(self, chebyshev):
        # -2 is fixed with |Q'| = 4.
        for n in (1, 4, 9):
            assert derivative_product(chebyshev.map, -2.0, n) == pytest.approx(
                4.0**-n, rel=1e-12
            )

    def test_critical_point_raises(self, chebyshev):
        with pytest.raises(SingularityError) as err:
            derivative_product(chebyshev.map, 0.0, 1)
        assert err.value.index == 0

    @given(x=st.floats(0, 1, exclude_max=True), m=st.integers(1, 16), n=st.integers(1, 16))
    @settings(max_examples=40, deadline=None)
    def test_multiplicative(self, x, m, n):
        tripling = make_expanding_circle(3)
        p_all = derivative_product(tripling, x, m + n)
        fx = iterate(tripling, x, m).points[-1]
        split = derivative_product(tripling, x, m) * derivative_product(tripling, fx, n)
        assert p_all == pytest.approx(split, rel=1e-10)


class TestCoveringTime:
    def test_doubling_eighth(self, doubling):
        assert covering_time(doubling, (0.0, 0.125)) == 3
        assert covering_time(doubling, (0.3, 0.3 + 0.125)) == 3

    def test_tripling_ninth(self, tripling):
        assert covering_time(tripling, (0.2, 0.2 + 1 / 9)) == 2

    def test_full_circle(self, doubling):
        assert covering_time(doubling, (0.0, 1.0)) == 0

    def test_empty_region(self, doubling):
        with pytest.raises(InvalidInputError):
            covering_time(doubling, (0.5, 0.5))


class TestMapModelInvariants:
    def test_declared_degree_matches_branches(self, doubling, tripling):
        for model in (doubling, tripling):
            assert model.degree == len(model.branches)

    def test_critical_points_degenerate(self, chebyshev):
        for c in chebyshev.map.critical_set:
            assert abs(chebyshev.map.derivative(c)) < 1e-9

    def test_circle_reduction(self, doubling):
        orbit = iterate(doubling, 0.9, 5)
        assert all(0.0 <= p < 1.0 for p in orbit.points)

    def test_adic_grid_forward_closure(self):
        grid = AdicGrid(2, 6)
        pts = grid.points
        forwarded = (2 * pts) % 1.0
        k = np.arange(grid.size)
        assert np.array_equal(forwarded, pts[grid.forward_index(k)])
