"""Modified Metropolis transition kernel for conditional-level sampling.

Each transition proposes per coordinate from a symmetric univariate
distribution, accepts or rejects each coordinate against the standard-normal
marginal density ratio, and then accepts the assembled candidate only if it
stays inside the current intermediate failure domain. A candidate identical
to the current point never triggers a response evaluation.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, List, Optional, Union

import numpy as np

from ._kernels import GAUSSIAN, UNIFORM, run_chain_kernel
from .errors import ValidationError
from .model import FailureSpec, Sample
from .randmath import RandomStream

__all__ = [
    "MmaStats",
    "ProposalSpec",
    "adapt_spread",
    "mma_step",
    "run_chain",
]

_KINDS = {"gaussian": GAUSSIAN, "uniform": UNIFORM}

# Spread adaptation: target band for the candidate acceptance rate, the
# multiplicative update factors, and hard caps on the spread.
ACCEPTANCE_BAND = (0.3, 0.5)
SHRINK_FACTOR = 0.7
GROW_FACTOR = 1.3
SPREAD_LIMITS = (1e-3, 1e3)


@dataclass(frozen=True)
class ProposalSpec:
    """Symmetric univariate proposal: Gaussian sigma or uniform half-width.

    ``spread`` is a scalar broadcast to every coordinate or a length-d array;
    symmetry q(eta|x) = q(x|eta) holds by construction for both kinds.
    """

    kind: str = "gaussian"
    spread: Union[float, np.ndarray] = 1.0

    def __post_init__(self):
        if self.kind not in _KINDS:
            raise ValidationError(
                f"proposal kind must be one of {sorted(_KINDS)}; got {self.kind!r}"
            )
        spread = np.asarray(self.spread, dtype=np.float64)
        if not np.all(spread > 0.0):
            raise ValidationError("proposal spread must be positive in every coordinate")

    @property
    def kind_code(self) -> int:
        return _KINDS[self.kind]

    def spread_vector(self, dim: int) -> np.ndarray:
        spread = np.asarray(self.spread, dtype=np.float64)
        if spread.ndim == 0:
            return np.full(dim, float(spread))
        if spread.shape != (dim,):
            raise ValidationError(
                f"proposal spread has shape {spread.shape}, expected scalar or ({dim},)"
            )
        return spread.copy()

    def with_spread(self, spread) -> "ProposalSpec":
        return ProposalSpec(kind=self.kind, spread=spread)


@dataclass
class MmaStats:
    """Counters for coordinate-level and candidate-level accept/reject.

    ``candidate_accept_count`` counts transitions where the chain actually
    moved (the assembled candidate differed from the current point and passed
    the domain check); repeated samples of either origin count as rejections,
    which is the quantity the spread controller has to watch.
    """

    coordinate_proposals: int = 0
    coordinate_acceptances: int = 0
    candidate_accept_count: int = 0
    chain_steps: int = 0

    def update(self, proposals, acceptances, candidate_accepts, steps):
        self.coordinate_proposals += int(proposals)
        self.coordinate_acceptances += int(acceptances)
        self.candidate_accept_count += int(candidate_accepts)
        self.chain_steps += int(steps)

    def merged(self, other: "MmaStats") -> "MmaStats":
        return MmaStats(
            self.coordinate_proposals + other.coordinate_proposals,
            self.coordinate_acceptances + other.coordinate_acceptances,
            self.candidate_accept_count + other.candidate_accept_count,
            self.chain_steps + other.chain_steps,
        )

    @property
    def candidate_acceptance_rate(self) -> float:
        if self.chain_steps == 0:
            return float("nan")
        return self.candidate_accept_count / self.chain_steps

    @property
    def coordinate_acceptance_rate(self) -> float:
        if self.coordinate_proposals == 0:
            return float("nan")
        return self.coordinate_acceptances / self.coordinate_proposals


def run_chain(
    seed_sample: Sample,
    chain_length: int,
    spec: FailureSpec,
    level_threshold: float,
    proposal: ProposalSpec,
    stream: RandomStream,
    stats: MmaStats,
    marginal_logpdf: Optional[Callable[[np.ndarray], np.ndarray]] = None,
) -> List[Sample]:
    """Run one chain of ``chain_length`` samples, seed included as element 0.

    Every returned sample satisfies the level membership g > level_threshold.
    ``marginal_logpdf`` swaps the standard-normal target marginals for a
    custom independent marginal (vectorized log-density over coordinates).
    """
    if chain_length < 1:
        raise ValidationError(f"chain_length must be >= 1; got {chain_length}")
    d = spec.model.dim
    point = np.asarray(seed_sample.point, dtype=np.float64)
    if point.shape != (d,):
        raise ValidationError(f"seed point has shape {point.shape}, expected ({d},)")
    response = seed_sample.ensure_response(spec.model)
    if not response > level_threshold:
        raise RuntimeError(
            "internal invariant violated: chain seed lies outside the "
            f"intermediate failure domain (g={response!r} <= {level_threshold!r})"
        )

    points, responses, evaluations, proposals, coord_accepts, cand_accepts = (
        run_chain_kernel(
            stream, point, response, chain_length - 1, level_threshold,
            proposal.kind_code, proposal.spread_vector(d), spec.model,
            marginal_logpdf,
        )
    )
    stats.update(proposals, coord_accepts, cand_accepts, chain_length - 1)
    return [Sample(points[i], float(responses[i])) for i in range(chain_length)]


def mma_step(
    current: Sample,
    spec: FailureSpec,
    level_threshold: float,
    proposal: ProposalSpec,
    stream: RandomStream,
    stats: MmaStats,
    marginal_logpdf: Optional[Callable[[np.ndarray], np.ndarray]] = None,
) -> Sample:
    """One Modified Metropolis transition from ``current``.

    Exactly one response evaluation when the candidate differs from the
    current point, zero otherwise.
    """
    chain = run_chain(current, 2, spec, level_threshold, proposal, stream,
                      stats, marginal_logpdf)
    return chain[1]


def adapt_spread(stats: MmaStats, proposal: ProposalSpec) -> ProposalSpec:
    """Between-level spread controller targeting the 30-50% acceptance band.

    Below the band the spread shrinks by 0.7x, above it grows by 1.3x,
    inside it is returned unchanged; the result is capped to [1e-3, 1e3].
    """
    if stats.chain_steps <= 0:
        raise ValidationError("adapt_spread requires at least one recorded chain step")
    rate = stats.candidate_acceptance_rate
    low, high = ACCEPTANCE_BAND
    if low <= rate <= high:
        return proposal
    factor = SHRINK_FACTOR if rate < low else GROW_FACTOR
    spread = np.asarray(proposal.spread, dtype=np.float64) * factor
    spread = np.clip(spread, SPREAD_LIMITS[0], SPREAD_LIMITS[1])
    if spread.ndim == 0:
        spread = float(spread)
    return proposal.with_spread(spread)
