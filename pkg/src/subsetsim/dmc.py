"""Direct Monte Carlo failure-probability estimator and its exact theory.

Serves both as the baseline method and as the level-0 cross-check for the
subset-simulation driver: both consume draws through the same chunked
sampler, so a subset run that stops at level 0 reproduces the DMC estimate
draw for draw.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import ValidationError
from .model import FailureSpec
from .randmath import RandomStream, standard_normal_chunks

__all__ = ["DmcEstimate", "dmc_estimate", "dmc_required_samples", "theoretical_cov"]


def theoretical_cov(p_f: float, n_samples: int) -> float:
    """Exact c.o.v. of the DMC estimator: sqrt((1 - p) / (N p))."""
    return math.sqrt((1.0 - p_f) / (n_samples * p_f))


@dataclass(frozen=True)
class DmcEstimate:
    """DMC estimate with its budget and the estimator's own accuracy theory.

    ``theoretical_cov`` is None when no failures were observed — the
    estimate is reported as exactly zero rather than carrying an infinite
    coefficient of variation.
    """

    p_hat: float
    n_samples: int
    n_failures: int
    theoretical_cov: Optional[float]
    evaluations_used: int


def dmc_estimate(spec: FailureSpec, n_samples: int, stream: RandomStream) -> DmcEstimate:
    """Estimate the failure probability from n i.i.d. standard-Gaussian samples.

    Samples are streamed in fixed-size chunks (nothing of size N x d is
    retained), one response evaluation per sample.
    """
    if n_samples < 1:
        raise ValidationError(f"n_samples must be >= 1; got {n_samples}")
    model = spec.model
    y_star = spec.critical_threshold
    n_failures = 0
    for block in standard_normal_chunks(stream, n_samples, model.dim):
        responses = model.evaluate_batch(block)
        n_failures += int(np.count_nonzero(responses > y_star))
    p_hat = n_failures / n_samples
    cov = theoretical_cov(p_hat, n_samples) if n_failures > 0 else None
    return DmcEstimate(
        p_hat=p_hat,
        n_samples=n_samples,
        n_failures=n_failures,
        theoretical_cov=cov,
        evaluations_used=n_samples,
    )


def dmc_required_samples(p_f: float, target_cov: float) -> int:
    """Smallest N whose theoretical DMC c.o.v. does not exceed ``target_cov``."""
    if not 0.0 < p_f < 1.0:
        raise ValidationError(f"p_f must be in (0, 1); got {p_f!r}")
    if not target_cov > 0.0:
        raise ValidationError(f"target_cov must be > 0; got {target_cov!r}")
    n = max(1, math.ceil((1.0 - p_f) / (p_f * target_cov * target_cov)) - 2)
    while theoretical_cov(p_f, n) > target_cov:
        n += 1
    return n
