import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from hypothesis.extra import numpy as hnp

from subsetsim import (FailureSpec, MarginalSpec, Sample, ValidationError,
                       analytic_failure_probability, indicator,
                       linear_sum_model, standardize,
                       threshold_for_probability)
from subsetsim.randmath import RandomStream


@pytest.fixture
def spec2d():
    return FailureSpec(linear_sum_model(2), 9.0)


class TestIndicator:
    def test_failure_point(self, spec2d):
        assert indicator(spec2d, Sample(np.array([5.0, 5.0]))) == 1

    def test_safe_point(self, spec2d):
        assert indicator(spec2d, Sample(np.array([0.0, 0.0]))) == 0

    def test_boundary_is_safe(self, spec2d):
        # strict inequality: a response exactly at y* is not a failure
        assert indicator(spec2d, Sample(np.array([4.0, 5.0]), response=9.0)) == 0

    def test_uses_cached_response(self, spec2d):
        sample = Sample(np.array([0.0, 0.0]), response=100.0)
        assert indicator(spec2d, sample) == 1

    @given(st.floats(-5, 5), st.floats(-5, 5))
    def test_monotone_in_threshold(self, response, shift):
        spec_low = FailureSpec(linear_sum_model(1), -10.0)
        spec_high = FailureSpec(linear_sum_model(1), -10.0 + abs(shift))
        sample = Sample(np.array([response]), response=response)
        assert indicator(spec_high, sample) <= indicator(spec_low, sample)


class TestStandardize:
    def test_means_map_to_origin(self):
        marginals = MarginalSpec([3.0, -1.0, 7.0], [2.0, 0.5, 4.0])
        assert np.array_equal(standardize([3.0, -1.0, 7.0], marginals),
                              np.zeros(3))

    def test_worked_example(self):
        marginals = MarginalSpec([1.0, 2.0], [2.0, 4.0])
        assert np.array_equal(standardize([3.0, 10.0], marginals),
                              np.array([1.0, 2.0]))

    @given(hnp.arrays(np.float64, 4, elements=st.floats(-100, 100)))
    def test_roundtrip(self, x):
        marginals = MarginalSpec([1.5, -2.0, 0.0, 10.0], [2.0, 0.25, 1.0, 8.0])
        z = standardize(x, marginals)
        back = z * marginals.stds + marginals.means
        assert np.allclose(back, x, rtol=0, atol=1e-9)

    def test_dimension_mismatch(self):
        marginals = MarginalSpec([0.0, 0.0], [1.0, 1.0])
        with pytest.raises(ValidationError):
            standardize([1.0, 2.0, 3.0], marginals)

    def test_nonpositive_sigma_rejected(self):
        with pytest.raises(ValidationError):
            MarginalSpec([0.0], [0.0])

    def test_correlated_inputs_rejected(self):
        with pytest.raises(ValidationError, match="correlated"):
            MarginalSpec([0.0, 0.0], np.eye(2))


class TestLinearSumModel:
    def test_two_dimensional(self):
        assert linear_sum_model(2).evaluate(np.array([4.0, 5.0])) == 9.0

    def test_high_dimensional_zero(self):
        assert linear_sum_model(1000).evaluate(np.zeros(1000)) == 0.0

    def test_high_dimensional_constant(self):
        value = linear_sum_model(1000).evaluate(np.full(1000, 0.2))
        assert value == pytest.approx(200.0, rel=1e-12)

    def test_zero_dimension_rejected(self):
        with pytest.raises(ValidationError):
            linear_sum_model(0)

    @given(st.permutations(list(range(5))))
    def test_permutation_invariant(self, perm):
        # mathematically exact; float summation order admits ulp drift
        model = linear_sum_model(5)
        x = np.array([0.3, -1.2, 2.5, 0.0, -0.7])
        assert model.evaluate(x[list(perm)]) == pytest.approx(model.evaluate(x), rel=1e-12)

    def test_batch_matches_single_bitwise(self):
        # level-0 batch evaluation and per-point chain evaluation must agree
        # exactly, or cached responses would drift between code paths
        model = linear_sum_model(17)
        points = RandomStream(5).standard_normal((64, 17))
        batch = model.evaluate_batch(points)
        single = np.array([model.evaluate(row) for row in points])
        assert np.array_equal(batch, single)


class TestAnalyticProbability:
    def test_two_dimensional_paper_value(self):
        assert analytic_failure_probability(2, 9.0) == pytest.approx(1.0e-10, rel=0.05)

    def test_thousand_dimensional_paper_value(self):
        assert analytic_failure_probability(1000, 200.0) == pytest.approx(1.27e-10, rel=0.01)

    @pytest.mark.parametrize("d", [1, 2, 10, 1000])
    def test_zero_threshold_is_half(self, d):
        assert analytic_failure_probability(d, 0.0) == 0.5

    def test_strictly_decreasing_in_threshold(self):
        # y/sqrt(3) kept above -8 so the survival function stays below 1.0
        values = [analytic_failure_probability(3, y) for y in np.linspace(-13, 40, 107)]
        assert all(b < a for a, b in zip(values, values[1:]))

    @pytest.mark.parametrize("p", np.logspace(-12, np.log10(0.5), 25))
    @pytest.mark.parametrize("d", [1, 2, 1000])
    def test_roundtrip_with_threshold(self, d, p):
        y = threshold_for_probability(d, p)
        assert analytic_failure_probability(d, y) == pytest.approx(p, rel=1e-6)


class TestThresholdForProbability:
    def test_two_dimensional_paper_inverse(self):
        assert threshold_for_probability(2, 1e-10) == pytest.approx(9.0, abs=0.01)

    def test_median_threshold_is_zero(self):
        assert threshold_for_probability(1, 0.5) == 0.0

    def test_thousand_dimensional_paper_inverse(self):
        assert threshold_for_probability(1000, 1.27e-10) == pytest.approx(200.0, abs=0.05)

    @pytest.mark.parametrize("p", [0.0, 1.0, -0.5, 2.0])
    def test_domain(self, p):
        with pytest.raises(ValidationError):
            threshold_for_probability(2, p)
