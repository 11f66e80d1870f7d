import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from zoomax import ContractionSeq, tail_sum, validate_contraction
from zoomax.errors import CapabilityError, InvalidInputError

GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0


class TestValidate:
    def test_geometric_is_valid(self):
        report = validate_contraction(ContractionSeq.exponential(math.log(2)), n_max=64)
        assert report.is_valid
        # sum_{n>=1} 2^-n = 1 up to the certified tail
        assert report.partial_sum + report.tail_bound == pytest.approx(1.0, abs=1e-12)

    @pytest.mark.parametrize("rate", [0.1, 1.0, 5.0])
    def test_exponential_family(self, rate):
        assert validate_contraction(ContractionSeq.exponential(rate), n_max=64).is_valid

    def test_inverse_squares_valid(self):
        assert validate_contraction(ContractionSeq.power(2, 1), n_max=64).is_valid

    def test_small_shift_fails_at_one_one(self):
        report = validate_contraction(ContractionSeq.power(2, 0.5), n_max=4)
        assert not report.is_valid
        assert report.supermultiplicative.counterexample == (1, 1)
        # a_1^2 = (1.5)^-4 ~ 0.19753 > a_2 = (2.5)^-2 = 0.16
        a1 = 1.5**-2
        assert a1 * a1 == pytest.approx(0.19753, abs=5e-6)
        assert 2.5**-2 == pytest.approx(0.16)

    @pytest.mark.parametrize(
        "b,expect_valid", [(GOLDEN - 0.01, False), (GOLDEN + 0.01, True)]
    )
    def test_golden_ratio_boundary(self, b, expect_valid):
        report = validate_contraction(ContractionSeq.power(2, b), n_max=64)
        assert report.is_valid == expect_valid
        if not expect_valid:
            assert report.supermultiplicative.counterexample == (1, 1)

    def test_table_out_of_range_coefficient(self):
        seq = ContractionSeq.from_table([0.5, 1.2, 0.1])
        with pytest.raises(InvalidInputError):
            validate_contraction(seq, n_max=3)

    def test_general_kind_sampled(self):
        seq = ContractionSeq.general(lambda n, r: 0.5**n * r, horizon=16)
        report = validate_contraction(seq, n_max=16)
        assert report.is_valid
        assert report.sampled_only

    def test_fekete_consequence(self):
        # Valid sequences satisfy a_n >= a_1**n (iterated supermultiplicativity).
        for seq in (
            ContractionSeq.exponential(0.7),
            ContractionSeq.power(2, 1),
            ContractionSeq.power(1.5, GOLDEN + 0.05),
        ):
            report = validate_contraction(seq, n_max=48)
            assert report.is_valid
            a1 = seq.coeff(1)
            for n in range(1, 49):
                assert seq.coeff(n) >= a1**n * (1 - 1e-12)


class TestTailSum:
    def test_geometric_alpha_one(self):
        ts = tail_sum(ContractionSeq.exponential(math.log(2)), 1.0)
        assert not ts.diverges
        assert ts.value == pytest.approx(2.0, abs=1e-12)

    def test_basel(self):
        ts = tail_sum(ContractionSeq.power(2, 1), 1.0)
        assert not ts.diverges
        assert abs(ts.value - math.pi**2 / 6) <= 1e-8
        assert ts.radius <= 1e-8

    def test_p_series_divergence(self):
        ts = tail_sum(ContractionSeq.power(2, 1), 0.25)
        assert ts.diverges

    def test_table_has_no_closed_tail(self):
        with pytest.raises(CapabilityError):
            tail_sum(ContractionSeq.from_table([0.5, 0.25]), 1.0)

    @given(
        alphas=st.lists(
            st.floats(0.55, 1.0), min_size=2, max_size=2, unique=True
        )
    )
    @settings(max_examples=30, deadline=None)
    def test_monotone_in_alpha(self, alphas):
        lo, hi = sorted(alphas)
        seq = ContractionSeq.power(2, 1)
        assert float(tail_sum(seq, hi)) <= float(tail_sum(seq, lo)) + 1e-9

    def test_exponential_monotone_in_alpha(self):
        seq = ContractionSeq.exponential(0.3)
        values = [tail_sum(seq, a).value for a in (0.25, 0.5, 0.75, 1.0)]
        assert values == sorted(values, reverse=True)


class TestCoefficients:
    def test_index_zero_is_one(self):
        assert ContractionSeq.exponential(1.0).coeff(0) == 1.0
        assert ContractionSeq.power(2, 1).coeff(0) == 1.0

    def test_exponential_materialization(self):
        seq = ContractionSeq.exponential(0.25)
        for n in (1, 2, 10):
            assert seq.coeff(n) == pytest.approx(math.exp(-0.25 * n))

    def test_alpha_scales_radius(self):
        seq = ContractionSeq.power(2, 1)
        assert seq.alpha(3, 0.5) == pytest.approx(seq.coeff(3) * 0.5)
