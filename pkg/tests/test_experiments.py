import numpy as np
import pytest

from subsetsim import (FailureSpec, SsConfig, SweepSpec, ValidationError,
                       analytic_failure_probability, level_trace,
                       linear_sum_model, replicate_ss, sweep_compare)


@pytest.fixture(scope="module")
def small_spec():
    return FailureSpec(linear_sum_model(2), 4.0)


@pytest.fixture(scope="module")
def small_config():
    return SsConfig(level_probability=0.1, samples_per_level=500)


class TestReplicateSs:
    def test_single_replicate_summary(self, small_spec, small_config):
        estimates, summary = replicate_ss(small_spec, small_config, 1, 7)
        assert summary.replicates == 1 and summary.exclusions == 0
        assert summary.mean == estimates[0].p_hat
        assert summary.std == 0.0
        assert summary.mean_total_samples == estimates[0].total_samples

    def test_batches_reproducible(self, small_spec, small_config):
        _, a = replicate_ss(small_spec, small_config, 6, 42)
        _, b = replicate_ss(small_spec, small_config, 6, 42)
        assert a == b

    def test_replicates_differ_from_each_other(self, small_spec, small_config):
        estimates, summary = replicate_ss(small_spec, small_config, 6, 42)
        p_hats = {e.p_hat for e in estimates}
        assert len(p_hats) > 1
        assert summary.cov > 0.0

    def test_mean_tracks_truth(self, small_spec, small_config):
        estimates, summary = replicate_ss(small_spec, small_config, 30, 0)
        truth = analytic_failure_probability(2, 4.0)
        standard_error = summary.std / np.sqrt(30)
        assert abs(summary.mean - truth) <= 4.0 * standard_error

    def test_budget_failures_recorded_not_raised(self, small_spec):
        config = SsConfig(samples_per_level=500, max_levels=1)
        estimates, summary = replicate_ss(small_spec, config, 4, 0)
        assert estimates == [None] * 4
        assert summary.exclusions == 4
        assert np.isnan(summary.mean)

    def test_rejects_bad_replicates(self, small_spec, small_config):
        with pytest.raises(ValidationError):
            replicate_ss(small_spec, small_config, 0, 0)


@pytest.fixture(scope="module")
def rows():
    sweep = SweepSpec(dim=2, thresholds=[0.0, 2.0, 4.0], replicates=5,
                      config=SsConfig(samples_per_level=400))
    return sweep_compare(sweep, 0)


class TestSweepCompare:

    def test_rows_in_grid_order(self, rows):
        assert [row.y_star for row in rows] == [0.0, 2.0, 4.0]

    def test_truth_column(self, rows):
        assert rows[0].p_true == 0.5
        for row in rows:
            assert row.p_true == analytic_failure_probability(2, row.y_star)

    def test_easy_rows_agree_between_methods(self, rows):
        easy = rows[0]
        assert easy.ss_mean == pytest.approx(easy.p_true, rel=0.2)
        assert easy.dmc_mean == pytest.approx(easy.p_true, rel=0.2)

    def test_matched_budget_feeds_theory_column(self, rows):
        for row in rows:
            budget = int(np.ceil(row.ss_mean_total_samples))
            expected = np.sqrt((1 - row.p_true) / (budget * row.p_true))
            assert row.dmc_cov_theory == pytest.approx(expected, rel=1e-12)

    def test_replicates_and_exclusions_recorded(self, rows):
        for row in rows:
            assert row.replicates == 5
            assert row.exclusions == 0

    def test_deterministic(self):
        sweep = SweepSpec(dim=2, thresholds=[1.0], replicates=3,
                          config=SsConfig(samples_per_level=300))
        assert sweep_compare(sweep, 9) == sweep_compare(sweep, 9)

    def test_explicit_dmc_budget(self):
        sweep = SweepSpec(dim=1, thresholds=[0.0], replicates=2,
                          config=SsConfig(samples_per_level=300),
                          dmc_budget=5000)
        row = sweep_compare(sweep, 0)[0]
        assert row.dmc_cov_theory == pytest.approx(np.sqrt(0.5 / (5000 * 0.5)))

    def test_empty_grid_rejected(self):
        with pytest.raises(ValidationError):
            SweepSpec(dim=2, thresholds=[], replicates=2,
                      config=SsConfig(samples_per_level=300))


class TestLevelTrace:
    def test_reduction_trace_has_single_level(self):
        spec = FailureSpec(linear_sum_model(1), 0.0)
        estimate = level_trace(spec, SsConfig(samples_per_level=300), seed=0)
        assert estimate.n_levels == 0
        assert len(estimate.level_records) == 1
        assert estimate.thresholds.size == 0

    def test_trace_reproducible_and_complete(self, small_spec, small_config):
        a = level_trace(small_spec, small_config, seed=3)
        b = level_trace(small_spec, small_config, seed=3)
        assert a.p_hat == b.p_hat
        assert len(a.level_records) == a.n_levels + 1
        for rec_a, rec_b in zip(a.level_records, b.level_records):
            assert np.array_equal(rec_a.sorted_responses, rec_b.sorted_responses)

    def test_trace_seed_overrides_config_seed(self, small_spec):
        config = SsConfig(samples_per_level=500, seed=123)
        traced = level_trace(small_spec, config, seed=3)
        direct = level_trace(small_spec, SsConfig(samples_per_level=500), seed=3)
        assert traced.p_hat == direct.p_hat
