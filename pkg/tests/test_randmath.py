import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from subsetsim import (RandomStream, ValidationError, draw_standard_normal,
                       draw_uniform, normal_cdf, normal_pdf, normal_quantile,
                       normal_sf)
from subsetsim.randmath import standard_normal_chunks

from conftest import ks_critical, ks_statistic


class TestNormalFunctions:
    def test_pdf_normalizing_constant(self):
        # 1/sqrt(2*pi), analytically forced
        assert normal_pdf(0.0) == pytest.approx(0.3989422804014327, rel=1e-15)

    def test_pdf_at_one(self):
        # frozen from an arbitrary-precision evaluation of the closed form
        assert normal_pdf(1.0) == pytest.approx(0.24197072451914335, rel=1e-14)

    @given(st.floats(-30.0, 30.0))
    def test_pdf_even_and_positive(self, x):
        assert normal_pdf(x) > 0.0
        assert normal_pdf(x) == normal_pdf(-x)

    def test_cdf_median(self):
        assert normal_cdf(0.0) == 0.5
        assert normal_sf(0.0) == 0.5

    @pytest.mark.parametrize("x", np.linspace(-8.0, 8.0, 81))
    def test_reflection_identity(self, x):
        assert abs(normal_cdf(-x) - (1.0 - normal_cdf(x))) <= 1e-14

    def test_cdf_strictly_increasing(self):
        # [-8, 8]: beyond ~8.3 the CDF saturates at 1.0 in float64
        grid = np.linspace(-8.0, 8.0, 241)
        values = [normal_cdf(x) for x in grid]
        assert all(b > a for a, b in zip(values, values[1:]))

    def test_sf_strictly_decreasing_into_deep_tail(self):
        grid = np.linspace(-8.0, 37.0, 451)
        values = [normal_sf(x) for x in grid]
        assert all(b < a for a, b in zip(values, values[1:]))

    def test_sf_matches_high_precision(self, mp):
        for x in [0.0, 0.37, 1.0, 2.5, 4.0, 6.32455532, 8.0, 12.0, 20.0, 37.0]:
            exact = float(mp.erfc(mp.mpf(x) / mp.sqrt(2)) / 2)
            assert normal_sf(x) == pytest.approx(exact, rel=1e-12)

    def test_tail_value_two_dimensional_threshold(self):
        # upper tail at 9/sqrt(2) corresponds to a 1e-10 failure probability
        assert normal_sf(9.0 / np.sqrt(2.0)) == pytest.approx(1.0e-10, rel=0.05)

    def test_tail_value_thousand_dimensional_threshold(self):
        assert normal_sf(200.0 / np.sqrt(1000.0)) == pytest.approx(1.27e-10, rel=0.01)

    def test_tail_does_not_underflow_below_37(self):
        for x in np.linspace(0.0, 37.0, 75):
            scaled = normal_sf(x) * np.exp(min(x * x / 2.0, 700.0))
            assert np.isfinite(scaled) and scaled > 0.0

    def test_quantile_median(self):
        assert normal_quantile(0.5) == 0.0

    @pytest.mark.parametrize("q", np.logspace(-12, -0.31, 45))
    def test_quantile_roundtrip_lower(self, q):
        assert abs(normal_cdf(normal_quantile(q)) - q) <= 1e-9 * q

    @pytest.mark.parametrize("q", 1.0 - np.logspace(-12, -0.31, 45))
    def test_quantile_roundtrip_upper(self, q):
        assert abs(normal_cdf(normal_quantile(q)) - q) <= 1e-9 * q

    @pytest.mark.parametrize("x", np.linspace(-8.0, 5.0, 27))
    def test_quantile_inverts_cdf_pointwise(self, x):
        # above x ~ 5.5 the roundtrip through the CDF *value* is limited by
        # float64 resolution near 1 (spacing 2^-53 maps to ~1e-8 in x at
        # x=6); upper-tail work goes through the survival function instead
        assert abs(normal_quantile(normal_cdf(x)) - x) <= 1e-9

    @pytest.mark.parametrize("x", np.linspace(1.0, 8.0, 15))
    def test_quantile_inverts_sf_pointwise(self, x):
        assert abs(-normal_quantile(normal_sf(x)) - x) <= 1e-9

    def test_quantile_resolves_rare_event_threshold(self):
        # sqrt(2) * quantile(1 - 1e-10) is the d=2 threshold, roughly 9
        assert np.sqrt(2.0) * normal_quantile(1.0 - 1e-10) == pytest.approx(9.0, abs=0.01)

    @pytest.mark.parametrize("q", [0.0, 1.0, -0.25, 1.5])
    def test_quantile_domain(self, q):
        with pytest.raises(ValidationError):
            normal_quantile(q)


class TestRandomStream:
    def test_same_seed_same_sequence(self):
        a = RandomStream(42).standard_normal(256)
        b = RandomStream(42).standard_normal(256)
        assert np.array_equal(a, b)

    def test_draws_advance_the_stream(self):
        stream = RandomStream(42)
        first = draw_standard_normal(stream)
        second = draw_standard_normal(stream)
        assert first != second

    def test_substream_deterministic(self):
        a = RandomStream(7).substream(3, 1).standard_normal(64)
        b = RandomStream(7).substream(3, 1).standard_normal(64)
        assert np.array_equal(a, b)

    def test_substreams_distinct(self):
        root = RandomStream(7)
        draws = [
            root.substream(0).standard_normal(32),
            root.substream(1).standard_normal(32),
            root.substream(0, 1).standard_normal(32),
            root.substream(1, 0).standard_normal(32),
            root.substream("dmc", 0).standard_normal(32),
            RandomStream(7).standard_normal(32),
        ]
        for i in range(len(draws)):
            for j in range(i + 1, len(draws)):
                assert not np.array_equal(draws[i], draws[j])

    def test_substream_independent_of_consumption(self):
        fresh = RandomStream(11).substream(5).standard_normal(16)
        used = RandomStream(11)
        used.standard_normal(1000)
        assert np.array_equal(used.substream(5).standard_normal(16), fresh)

    def test_seed_validation(self):
        with pytest.raises(ValidationError):
            RandomStream(-1)
        with pytest.raises(ValidationError):
            RandomStream(2 ** 64)
        with pytest.raises(ValidationError):
            RandomStream(1.5)

    def test_label_validation(self):
        with pytest.raises(ValidationError):
            RandomStream(0).substream(-3)
        with pytest.raises(ValidationError):
            RandomStream(0).substream()

    def test_uniform_bounds_and_error(self):
        stream = RandomStream(0)
        values = stream.uniform(2.0, 5.0, size=1000)
        assert np.all((values >= 2.0) & (values < 5.0))
        with pytest.raises(ValidationError):
            draw_uniform(stream, 1.0, 1.0)
        with pytest.raises(ValidationError):
            draw_uniform(stream, 3.0, 2.0)

    def test_normal_moments_at_scale(self):
        draws = RandomStream(123).standard_normal(1_000_000)
        assert abs(draws.mean()) <= 0.01
        assert abs(draws.var(ddof=1) - 1.0) <= 0.02

    def test_uniform_ks_at_scale(self):
        draws = np.sort(RandomStream(321).random(1_000_000))
        assert ks_statistic(draws, draws) <= ks_critical(1_000_000, alpha=0.01)

    def test_chunked_sampler_matches_flat_draws(self):
        flat = RandomStream(9).standard_normal((1000, 3))
        blocks = list(standard_normal_chunks(RandomStream(9), 1000, 3,
                                             chunk_elements=256))
        assert np.array_equal(np.vstack(blocks), flat)
