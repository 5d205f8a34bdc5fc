"""Rare-event failure probability estimation via Subset Simulation.

The package provides a seeded random/special-function layer (randmath), the
performance-model abstraction (model), a Direct Monte Carlo baseline (dmc),
the Modified Metropolis transition kernel (mma), the adaptive multi-level
driver (subsim), a reproduction harness (experiments), and a command-line
interface (cli).
"""

__version__ = "0.1.0"

from ._kernels import backend_name
from .dmc import DmcEstimate, dmc_estimate, dmc_required_samples
from .errors import BudgetExceededError, ThresholdTieWarning, ValidationError
from .experiments import (ReplicateSummary, RunSummary, SweepSpec,
                          level_trace, replicate_ss, sweep_compare)
from .mma import MmaStats, ProposalSpec, adapt_spread, mma_step, run_chain
from .model import (FailureSpec, MarginalSpec, PerformanceModel, Sample,
                    analytic_failure_probability, indicator, linear_sum_model,
                    standardize, threshold_for_probability)
from .randmath import (RandomStream, draw_standard_normal, draw_uniform,
                       normal_cdf, normal_pdf, normal_quantile, normal_sf)
from .subsim import (LevelRecord, SsConfig, SsEstimate, expected_levels,
                     run_subset_simulation, select_threshold)

__all__ = [
    "BudgetExceededError",
    "DmcEstimate",
    "FailureSpec",
    "LevelRecord",
    "MarginalSpec",
    "MmaStats",
    "PerformanceModel",
    "ProposalSpec",
    "RandomStream",
    "ReplicateSummary",
    "RunSummary",
    "Sample",
    "SsConfig",
    "SsEstimate",
    "SweepSpec",
    "ThresholdTieWarning",
    "ValidationError",
    "adapt_spread",
    "analytic_failure_probability",
    "backend_name",
    "dmc_estimate",
    "dmc_required_samples",
    "draw_standard_normal",
    "draw_uniform",
    "expected_levels",
    "indicator",
    "level_trace",
    "linear_sum_model",
    "mma_step",
    "normal_cdf",
    "normal_pdf",
    "normal_quantile",
    "normal_sf",
    "replicate_ss",
    "run_chain",
    "run_subset_simulation",
    "select_threshold",
    "standardize",
    "sweep_compare",
    "threshold_for_probability",
]
