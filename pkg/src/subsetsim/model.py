"""Performance functions, failure-domain membership, and input standardization.

Failure is the strict exceedance g(x) > y*. All samplers operate in
standard-Gaussian input space; physical inputs with independent Gaussian
marginals enter through ``standardize``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from .errors import ValidationError
from .randmath import normal_quantile, normal_sf

__all__ = [
    "FailureSpec",
    "MarginalSpec",
    "PerformanceModel",
    "Sample",
    "analytic_failure_probability",
    "indicator",
    "linear_sum_model",
    "standardize",
    "threshold_for_probability",
]


@dataclass(frozen=True)
class PerformanceModel:
    """Deterministic map from a d-vector of inputs to the scalar response.

    ``batch_func`` optionally vectorizes evaluation over the rows of an
    (n, d) matrix; ``kernel_id`` marks built-in models the compiled kernels
    know how to drive without a Python round-trip per call.
    """

    dim: int
    func: Callable[[np.ndarray], float]
    description: str = ""
    batch_func: Optional[Callable[[np.ndarray], np.ndarray]] = None
    kernel_id: Optional[str] = None

    def __post_init__(self):
        if self.dim < 1:
            raise ValidationError(f"model dimension must be >= 1; got {self.dim}")

    def evaluate(self, x: np.ndarray) -> float:
        """Response g(x) for a single input point."""
        return float(self.func(x))

    def evaluate_batch(self, points: np.ndarray) -> np.ndarray:
        """Responses for each row of an (n, dim) matrix."""
        if self.batch_func is not None:
            return np.asarray(self.batch_func(points), dtype=np.float64)
        return np.array([self.func(row) for row in points], dtype=np.float64)


@dataclass(frozen=True)
class FailureSpec:
    """A performance model together with its critical threshold y*."""

    model: PerformanceModel
    critical_threshold: float


@dataclass
class Sample:
    """A point in standard-Gaussian input space with its cached response."""

    point: np.ndarray
    response: Optional[float] = None

    def ensure_response(self, model: PerformanceModel) -> float:
        if self.response is None:
            self.response = model.evaluate(self.point)
        return self.response


@dataclass(frozen=True)
class MarginalSpec:
    """Independent per-coordinate Gaussian marginals (mean, standard deviation).

    Dependent inputs (Rosenblatt/Nataf style transforms) are out of scope and
    rejected outright: means/stds must be one-dimensional.
    """

    means: np.ndarray
    stds: np.ndarray

    def __init__(self, means, stds):
        means = np.asarray(means, dtype=np.float64)
        stds = np.asarray(stds, dtype=np.float64)
        if means.ndim != 1 or stds.ndim != 1:
            raise ValidationError(
                "marginals must be 1-D per-coordinate arrays; correlated "
                "(matrix-valued) input models are not supported"
            )
        if means.shape != stds.shape:
            raise ValidationError(
                f"means and stds must match; got {means.shape} vs {stds.shape}"
            )
        if not np.all(stds > 0.0):
            raise ValidationError("all marginal standard deviations must be > 0")
        object.__setattr__(self, "means", means)
        object.__setattr__(self, "stds", stds)

    @property
    def dim(self) -> int:
        return self.means.shape[0]


def indicator(spec: FailureSpec, sample: Sample) -> int:
    """1 if the sample lies in the failure domain (strict g > y*), else 0."""
    response = sample.ensure_response(spec.model)
    return 1 if response > spec.critical_threshold else 0


def standardize(x_physical: np.ndarray, marginals: MarginalSpec) -> np.ndarray:
    """Map physical coordinates to standard-Gaussian space: (x - mu) / sigma."""
    x = np.asarray(x_physical, dtype=np.float64)
    if x.shape != (marginals.dim,):
        raise ValidationError(
            f"input has shape {x.shape}, marginals expect ({marginals.dim},)"
        )
    return (x - marginals.means) / marginals.stds


class _LinearSum:
    """Coordinate-sum response; picklable so harness workers can ship models."""

    def __call__(self, x: np.ndarray) -> float:
        return float(np.sum(x))


class _LinearSumBatch:
    def __call__(self, points: np.ndarray) -> np.ndarray:
        return points.sum(axis=1)


def linear_sum_model(d: int) -> PerformanceModel:
    """The linear performance function g(x) = sum of coordinates."""
    if d < 1:
        raise ValidationError(f"linear_sum_model requires d >= 1; got {d}")
    return PerformanceModel(
        dim=d,
        func=_LinearSum(),
        description=f"linear_sum(d={d})",
        batch_func=_LinearSumBatch(),
        kernel_id="linear_sum",
    )


def analytic_failure_probability(d: int, y_star: float) -> float:
    """Exact failure probability of the linear-sum model: P(sum > y*).

    The coordinate sum is N(0, d), so the probability is the upper tail of
    the standard normal at y*/sqrt(d), evaluated through the survival
    function to keep relative accuracy at 1e-10 scales.
    """
    if d < 1:
        raise ValidationError(f"dimension must be >= 1; got {d}")
    return normal_sf(y_star / math.sqrt(d))


def threshold_for_probability(d: int, p_target: float) -> float:
    """Critical threshold giving the linear-sum model failure probability p.

    Evaluated as -sqrt(d) * quantile(p) — the reflection keeps the
    computation in the lower tail, where small probabilities are
    representable with full relative precision.
    """
    if d < 1:
        raise ValidationError(f"dimension must be >= 1; got {d}")
    if not 0.0 < p_target < 1.0:
        raise ValidationError(f"p_target must be in (0, 1); got {p_target!r}")
    return -math.sqrt(d) * normal_quantile(p_target)
