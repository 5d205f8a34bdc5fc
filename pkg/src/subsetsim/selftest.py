"""Built-in invariant checks behind the `subsetsim selftest` command.

Fast structural checks only: the statistical reproduction suite lives in the
test tree. Each check prints one line; the command exits nonzero if any fail.
"""

from __future__ import annotations

import math
import traceback

import numpy as np

from ._kernels import BACKEND, backend_name, run_chain_kernel
from .dmc import dmc_estimate
from .mma import MmaStats, ProposalSpec, run_chain
from .model import FailureSpec, Sample, linear_sum_model
from .randmath import RandomStream, normal_cdf, normal_pdf, normal_quantile, normal_sf
from .subsim import SsConfig, run_subset_simulation


def _check_normal_functions():
    grid = np.linspace(-8.0, 8.0, 321)
    for x in grid:
        assert abs(normal_cdf(-x) - (1.0 - normal_cdf(x))) <= 1e-14
        assert normal_pdf(x) > 0.0
        assert normal_pdf(x) == normal_pdf(-x)
    for q in np.logspace(-12, math.log10(0.5), 40):
        z = normal_quantile(q)
        assert abs(normal_cdf(z) - q) <= 1e-9 * q
    assert normal_sf(37.0) > 0.0


def _check_stream_determinism():
    a = RandomStream(123).standard_normal(64)
    b = RandomStream(123).standard_normal(64)
    assert np.array_equal(a, b)
    c = RandomStream(123).substream(1, 2).standard_normal(64)
    d = RandomStream(123).substream(1, 2).standard_normal(64)
    assert np.array_equal(c, d)
    assert not np.array_equal(a, c)


def _check_kernel_parity():
    if BACKEND != "compiled":
        return "skipped (compiled kernel not built)"
    model = linear_sum_model(5)
    spread = np.ones(5)
    x0 = np.full(5, 0.4)
    y0 = model.evaluate(x0)
    results = []
    for backend in ("compiled", "fallback"):
        stream = RandomStream(7).substream(3)
        results.append(run_chain_kernel(
            stream, x0, y0, 200, 1.0, 0, spread, model, backend=backend))
    for left, right in zip(results[0], results[1]):
        if isinstance(left, np.ndarray):
            assert np.array_equal(left, right)
        else:
            assert left == right
    return None


def _check_reduction_to_dmc():
    spec = FailureSpec(linear_sum_model(1), 0.0)
    config = SsConfig(level_probability=0.1, samples_per_level=500, seed=11)
    estimate = run_subset_simulation(spec, config)
    baseline = dmc_estimate(spec, 500, RandomStream(11))
    assert estimate.n_levels == 0
    assert estimate.p_hat == baseline.p_hat


def _check_chain_membership():
    spec = FailureSpec(linear_sum_model(2), 100.0)
    threshold = 1.5
    seed_point = np.array([1.0, 1.0])
    seed = Sample(seed_point, spec.model.evaluate(seed_point))
    chain = run_chain(seed, 50, spec, threshold, ProposalSpec(),
                      RandomStream(5), MmaStats())
    assert len(chain) == 50
    assert all(s.response > threshold for s in chain)


CHECKS = [
    ("normal special functions", _check_normal_functions),
    ("random stream determinism", _check_stream_determinism),
    ("kernel backend parity", _check_kernel_parity),
    ("L=0 reduction to direct Monte Carlo", _check_reduction_to_dmc),
    ("chain level membership", _check_chain_membership),
]


def run(quick: bool = False) -> int:
    print(f"kernel backend: {backend_name()}")
    failures = 0
    for name, check in CHECKS:
        try:
            note = check()
        except Exception:
            failures += 1
            print(f"[FAIL] {name}")
            traceback.print_exc()
        else:
            suffix = f" - {note}" if note else ""
            print(f"[ok]   {name}{suffix}")
    if failures:
        print(f"{failures} of {len(CHECKS)} checks failed")
        return 1
    print(f"all {len(CHECKS)} checks passed")
    return 0
