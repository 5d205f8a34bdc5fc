"""Reproduction harness: replicated runs, threshold sweeps, level traces.

Every replicate derives its own substream from the master seed by index, so
batch results are independent of execution order and reproducible from the
(seed, config) pair alone.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import List, Optional, Sequence, Tuple, Union

import numpy as np

from .dmc import DmcEstimate, dmc_estimate, theoretical_cov
from .errors import BudgetExceededError, ValidationError
from .model import FailureSpec, analytic_failure_probability, linear_sum_model
from .randmath import RandomStream
from .subsim import SsConfig, SsEstimate, run_subset_simulation

__all__ = [
    "ReplicateSummary",
    "RunSummary",
    "SweepSpec",
    "level_trace",
    "replicate_ss",
    "sweep_compare",
]

# substream namespaces inside one sweep row
_SS_LANE = 0
_DMC_LANE = 1


@dataclass(frozen=True)
class SweepSpec:
    """A threshold sweep: grid of y* values, replicates, config template.

    ``dmc_budget`` is an explicit per-run DMC sample count, or None to match
    the average total sample count of the SS replicates row by row.
    """

    dim: int
    thresholds: Sequence[float]
    replicates: int
    config: SsConfig
    dmc_budget: Optional[int] = None

    def __post_init__(self):
        if len(self.thresholds) == 0:
            raise ValidationError("sweep threshold grid must be non-empty")
        if self.replicates < 1:
            raise ValidationError(f"replicates must be >= 1; got {self.replicates}")


@dataclass(frozen=True)
class ReplicateSummary:
    """Statistics over the successful replicates of one batch."""

    replicates: int
    exclusions: int
    mean: float
    std: float
    cov: float
    mean_total_samples: float
    mean_levels: float


@dataclass(frozen=True)
class RunSummary:
    """One sweep row: truth, SS statistics, and matched-budget DMC statistics."""

    y_star: float
    p_true: float
    ss_mean: float
    ss_std: float
    ss_cov: float
    ss_mean_total_samples: float
    dmc_mean: float
    dmc_cov: float
    dmc_cov_theory: float
    replicates: int
    exclusions: int


def _spread_stats(values: np.ndarray) -> Tuple[float, float, float]:
    """(mean, sample std, cov); std is 0 for a single value, cov nan at mean 0."""
    if values.size == 0:
        return float("nan"), float("nan"), float("nan")
    mean = float(np.mean(values))
    std = 0.0 if values.size == 1 else float(np.std(values, ddof=1))
    cov = std / mean if mean != 0.0 else float("nan")
    return mean, std, cov


def replicate_ss(
    spec: FailureSpec,
    config: SsConfig,
    replicates: int,
    master_seed: int,
) -> Tuple[List[Optional[SsEstimate]], ReplicateSummary]:
    """Run ``replicates`` independent SS estimates with per-index substreams.

    Budget-exceeded runs are recorded as None and excluded from the summary
    statistics without aborting the batch.
    """
    if replicates < 1:
        raise ValidationError(f"replicates must be >= 1; got {replicates}")
    master = RandomStream(master_seed)
    estimates: List[Optional[SsEstimate]] = []
    for index in range(replicates):
        try:
            estimates.append(
                run_subset_simulation(spec, config, master.substream(index))
            )
        except BudgetExceededError:
            estimates.append(None)
    successes = [e for e in estimates if e is not None]
    p_hats = np.array([e.p_hat for e in successes], dtype=np.float64)
    mean, std, cov = _spread_stats(p_hats)
    summary = ReplicateSummary(
        replicates=replicates,
        exclusions=replicates - len(successes),
        mean=mean,
        std=std,
        cov=cov,
        mean_total_samples=(
            float(np.mean([e.total_samples for e in successes]))
            if successes else float("nan")
        ),
        mean_levels=(
            float(np.mean([e.n_levels for e in successes]))
            if successes else float("nan")
        ),
    )
    return estimates, summary


def _replicate_dmc(
    spec: FailureSpec, n_samples: int, replicates: int, master: RandomStream,
    row: int,
) -> List[DmcEstimate]:
    return [
        dmc_estimate(spec, n_samples, master.substream(row, _DMC_LANE, index))
        for index in range(replicates)
    ]


def sweep_compare(sweep: SweepSpec, master_seed: int) -> List[RunSummary]:
    """SS-vs-DMC comparison over the threshold grid, rows in grid order."""
    master = RandomStream(master_seed)
    model = linear_sum_model(sweep.dim)
    rows: List[RunSummary] = []
    for row_index, y_star in enumerate(sweep.thresholds):
        spec = FailureSpec(model, float(y_star))
        p_true = analytic_failure_probability(sweep.dim, float(y_star))

        ss_estimates: List[Optional[SsEstimate]] = []
        for index in range(sweep.replicates):
            try:
                ss_estimates.append(run_subset_simulation(
                    spec, sweep.config,
                    master.substream(row_index, _SS_LANE, index),
                ))
            except BudgetExceededError:
                ss_estimates.append(None)
        successes = [e for e in ss_estimates if e is not None]
        ss_mean, ss_std, ss_cov = _spread_stats(
            np.array([e.p_hat for e in successes], dtype=np.float64))
        mean_total = (
            float(np.mean([e.total_samples for e in successes]))
            if successes else float("nan")
        )

        if sweep.dmc_budget is not None:
            budget = sweep.dmc_budget
        else:
            budget = int(math.ceil(mean_total)) if successes else sweep.config.samples_per_level
        dmc_runs = _replicate_dmc(spec, budget, sweep.replicates, master, row_index)
        dmc_mean, _, dmc_cov = _spread_stats(
            np.array([e.p_hat for e in dmc_runs], dtype=np.float64))

        rows.append(RunSummary(
            y_star=float(y_star),
            p_true=p_true,
            ss_mean=ss_mean,
            ss_std=ss_std,
            ss_cov=ss_cov,
            ss_mean_total_samples=mean_total,
            dmc_mean=dmc_mean,
            dmc_cov=dmc_cov,
            dmc_cov_theory=theoretical_cov(p_true, budget),
            replicates=sweep.replicates,
            exclusions=len(ss_estimates) - len(successes),
        ))
    return rows


def level_trace(spec: FailureSpec, config: SsConfig, seed: int) -> SsEstimate:
    """One fixed-seed run whose records carry the full per-level response curves."""
    return run_subset_simulation(spec, replace(config, seed=seed))
