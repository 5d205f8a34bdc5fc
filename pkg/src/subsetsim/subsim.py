"""Subset Simulation driver: adaptive levels, chain scheduling, estimator.

Level 0 is a Direct Monte Carlo probe. Each subsequent level relaxes the
critical threshold to the midpoint of the np-th and (np+1)-th largest
responses, reuses the exceeding samples as chain seeds (they are already
distributed per the level's conditional law), and refills the level to n
samples with Modified Metropolis chains. The run stops as soon as at least
np samples of the current level lie in the target failure domain.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple

import numpy as np

from ._kernels import run_chain_kernel
from .errors import BudgetExceededError, ThresholdTieWarning, ValidationError
from .mma import MmaStats, ProposalSpec, adapt_spread
from .model import FailureSpec, Sample
from .randmath import RandomStream, standard_normal_chunks

__all__ = [
    "LevelRecord",
    "SsConfig",
    "SsEstimate",
    "expected_levels",
    "run_subset_simulation",
    "select_threshold",
]

_INTEGRALITY_TOL = 1e-9


@dataclass(frozen=True)
class SsConfig:
    """Run parameters: level probability p, per-level sample count n, proposal.

    n*p and 1/p must be integers so that each level has an integral seed
    count and an integral chain length per seed.
    """

    level_probability: float = 0.1
    samples_per_level: int = 1000
    proposal: ProposalSpec = field(default_factory=ProposalSpec)
    adapt: bool = False
    max_levels: int = 50
    seed: int = 0
    keep_samples: bool = False

    def validate(self) -> Tuple[int, int]:
        """Check invariants; return (seeds per level, chain length per seed)."""
        p = self.level_probability
        n = self.samples_per_level
        if not 0.0 < p < 1.0:
            raise ValidationError(f"level probability must be in (0, 1); got p={p}")
        if n < 1:
            raise ValidationError(f"samples per level must be >= 1; got n={n}")
        n_seeds = round(n * p)
        if n_seeds < 1 or abs(n * p - n_seeds) > _INTEGRALITY_TOL:
            raise ValidationError(
                f"n*p must be a positive integer; got n={n}, p={p} (n*p={n * p})"
            )
        inv_p = round(1.0 / p)
        if abs(1.0 / p - inv_p) > _INTEGRALITY_TOL:
            raise ValidationError(
                f"1/p must be a positive integer; got p={p} (1/p={1.0 / p})"
            )
        if n_seeds >= n:
            raise ValidationError(
                f"n*p must be smaller than n; got n={n}, p={p}"
            )
        if self.max_levels < 1:
            raise ValidationError(f"max_levels must be >= 1; got {self.max_levels}")
        return n_seeds, inv_p


@dataclass
class LevelRecord:
    """Everything retained about one level of a run.

    ``threshold`` is the threshold defining the level's conditional domain
    (-inf for the unconditional level 0); ``n_failures`` counts responses
    strictly above the *target* threshold; ``strict_exceedance_fraction`` is
    the realized fraction of this level's samples strictly above the next
    level's threshold (None on the final level) — it equals p except when
    repeated chain samples tie at the selection quantile, which is flagged.
    ``acceptance_stats`` is absent at level 0, whose samples are i.i.d.
    rather than chain output.
    """

    level: int
    threshold: float
    samples: Optional[List[Sample]]
    sorted_responses: np.ndarray
    n_failures: int
    acceptance_stats: Optional[MmaStats]
    evaluations_used: int
    strict_exceedance_fraction: Optional[float] = None
    tie_at_selection: bool = False


@dataclass
class SsEstimate:
    """Final estimate with per-level records and budget accounting.

    Every level reuses exactly np seeds (the top-np samples in stable
    descending response order), so ``total_samples`` satisfies the identity
    N = n + L(n - np) on every run and p_hat = p^L * n_F(L)/n exactly.
    """

    p_hat: float
    n_levels: int
    level_records: List[LevelRecord]
    thresholds: np.ndarray
    total_samples: int
    total_evaluations: int
    conditional_probabilities: Tuple[float, ...]
    final_fraction: float
    n_failures: int
    tie_flagged: bool
    config: SsConfig


def _selection_midpoint(sorted_responses: np.ndarray, n_seeds: int) -> Tuple[float, bool]:
    upper = float(sorted_responses[n_seeds - 1])
    lower = float(sorted_responses[n_seeds])
    return 0.5 * (upper + lower), upper == lower


def select_threshold(sorted_responses: Sequence[float], p: float) -> float:
    """Midpoint of the np-th and (np+1)-th largest responses.

    With distinct order statistics, exactly np responses strictly exceed the
    returned threshold. Ties at the quantile raise ThresholdTieWarning; the
    caller is expected to recount the actual exceedances.
    """
    responses = np.asarray(sorted_responses, dtype=np.float64)
    n = responses.shape[0]
    if n < 2:
        raise ValidationError("threshold selection needs at least two responses")
    if np.any(np.diff(responses) > 0.0):
        raise ValidationError("responses must be sorted in non-increasing order")
    n_seeds = round(n * p)
    if n_seeds < 1 or n_seeds >= n or abs(n * p - n_seeds) > _INTEGRALITY_TOL:
        raise ValidationError(
            f"n*p must be an integer in [1, n); got n={n}, p={p}"
        )
    threshold, tie = _selection_midpoint(responses, n_seeds)
    if tie:
        warnings.warn(
            f"tied responses at the selection quantile (value {threshold}); "
            "the realized conditional probability will differ from p",
            ThresholdTieWarning,
            stacklevel=2,
        )
    return threshold


def expected_levels(p_f: float, p: float) -> int:
    """Planning heuristic: number of conditional levels to reach p_f."""
    if not 0.0 < p_f < 1.0:
        raise ValidationError(f"p_f must be in (0, 1); got {p_f!r}")
    if not 0.0 < p < 1.0:
        raise ValidationError(f"p must be in (0, 1); got {p!r}")
    return int(math.floor(math.log(p_f) / math.log(p)))


def _sample_level0(spec: FailureSpec, n: int, stream: RandomStream):
    model = spec.model
    points = np.empty((n, model.dim), dtype=np.float64)
    responses = np.empty(n, dtype=np.float64)
    row = 0
    for block in standard_normal_chunks(stream, n, model.dim):
        rows = block.shape[0]
        points[row:row + rows] = block
        responses[row:row + rows] = model.evaluate_batch(block)
        row += rows
    return points, responses


def run_subset_simulation(
    spec: FailureSpec,
    config: SsConfig,
    stream: Optional[RandomStream] = None,
) -> SsEstimate:
    """Run Subset Simulation for ``spec`` under ``config``.

    ``stream`` overrides the stream derived from config.seed (the experiment
    harness passes replicate substreams); chains at level l consume
    substreams keyed (l, chain index), so results do not depend on chain
    execution order. Repeated chain samples occasionally tie at the selection
    quantile; the run then still seeds the next level with the top-np samples
    in stable order (the adjacent boundary seed sits exactly on the new
    threshold), keeping the budget identity and the p^L product exact, and
    flags the estimate via ``tie_flagged``.
    """
    n_seeds, chain_length = config.validate()
    n = config.samples_per_level
    p = config.level_probability
    y_star = spec.critical_threshold
    model = spec.model
    root = stream if stream is not None else RandomStream(config.seed)
    proposal = config.proposal

    points, responses = _sample_level0(spec, n, root)
    level = 0
    level_stats: Optional[MmaStats] = None
    level_evals = n
    total_evaluations = n
    prev_threshold = float("-inf")
    records: List[LevelRecord] = []
    tie_flagged = False

    while True:
        n_failures = int(np.count_nonzero(responses > y_star))
        order = np.argsort(-responses, kind="stable")
        sorted_responses = responses[order]
        kept = None
        if config.keep_samples:
            kept = [Sample(points[i], float(responses[i])) for i in range(n)]
        record = LevelRecord(
            level=level,
            threshold=prev_threshold,
            samples=kept,
            sorted_responses=sorted_responses,
            n_failures=n_failures,
            acceptance_stats=level_stats,
            evaluations_used=level_evals,
        )
        records.append(record)

        if n_failures / n >= p:
            break
        if level >= config.max_levels:
            raise BudgetExceededError(
                f"no stop after {config.max_levels} conditional levels "
                f"(last threshold {prev_threshold}, target {y_star}); "
                "raise max_levels or check that the model can exceed y*",
                records,
            )

        next_threshold, tie = _selection_midpoint(sorted_responses, n_seeds)
        if tie:
            # Repeated chain samples can tie at the quantile; the run keeps
            # the nominal np positional seeds so the budget identity and the
            # p^L product stay exact, and flags the level for diagnostics.
            tie_flagged = True
            record.tie_at_selection = True
            warnings.warn(
                f"tied responses at the level-{level} selection quantile "
                f"(value {next_threshold}); keeping np positional seeds",
                ThresholdTieWarning,
                stacklevel=2,
            )
        if not next_threshold > prev_threshold:
            raise BudgetExceededError(
                f"thresholds failed to increase at level {level} "
                f"({next_threshold} <= {prev_threshold}); "
                "the response distribution has plateaued below y*",
                records,
            )
        record.strict_exceedance_fraction = (
            int(np.count_nonzero(responses > next_threshold)) / n
        )

        # top-np samples in stable descending order seed the next level's
        # chains; each chain contributes 1/p samples, seed included
        seed_rows = order[:n_seeds]
        new_points = np.empty((n, model.dim), dtype=np.float64)
        new_responses = np.empty(n, dtype=np.float64)
        stats = MmaStats()
        evals = 0
        spread = proposal.spread_vector(model.dim)
        row = 0
        for chain_index in range(n_seeds):
            chain_stream = root.substream(level + 1, chain_index)
            pts, resp, ev, props, coord_acc, cand_acc = run_chain_kernel(
                chain_stream,
                points[seed_rows[chain_index]],
                responses[seed_rows[chain_index]],
                chain_length - 1,
                next_threshold,
                proposal.kind_code,
                spread,
                model,
            )
            new_points[row:row + chain_length] = pts
            new_responses[row:row + chain_length] = resp
            row += chain_length
            evals += ev
            stats.update(props, coord_acc, cand_acc, chain_length - 1)

        if config.adapt:
            proposal = adapt_spread(stats, proposal)

        points, responses = new_points, new_responses
        prev_threshold = next_threshold
        level += 1
        level_stats = stats
        level_evals = evals
        total_evaluations += evals

    final_fraction = n_failures / n
    n_levels = level
    p_hat = (p ** n_levels) * final_fraction

    thresholds = np.array([rec.threshold for rec in records[1:]], dtype=np.float64)
    return SsEstimate(
        p_hat=p_hat,
        n_levels=n_levels,
        level_records=records,
        thresholds=thresholds,
        total_samples=n + n_levels * (n - n_seeds),
        total_evaluations=total_evaluations,
        conditional_probabilities=(p,) * n_levels,
        final_fraction=final_fraction,
        n_failures=n_failures,
        tie_flagged=tie_flagged,
        config=config,
    )
