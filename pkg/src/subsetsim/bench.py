"""Benchmark the compiled chain kernel against the numpy fallback.

Usage: python -m subsetsim.bench [--steps N] [--dims 2 1000 ...]
Both backends consume identical streams, so the benchmark doubles as a
whole-chain parity check on its workload.
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from ._kernels import BACKEND, run_chain_kernel
from .model import linear_sum_model
from .randmath import RandomStream


def _time_backend(backend: str, dim: int, steps: int, repeats: int) -> tuple:
    model = linear_sum_model(dim)
    x0 = np.zeros(dim)
    spread = np.ones(dim)
    best = float("inf")
    result = None
    for rep in range(repeats):
        stream = RandomStream(2024).substream(dim, rep)
        start = time.perf_counter()
        result = run_chain_kernel(stream, x0, 0.0, steps, float("-inf"), 0,
                                  spread, model, backend=backend)
        best = min(best, time.perf_counter() - start)
    return best, result


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--steps", type=int, default=2000)
    parser.add_argument("--dims", type=int, nargs="+", default=[2, 100, 1000])
    parser.add_argument("--repeats", type=int, default=3)
    args = parser.parse_args(argv)

    backends = ["fallback"]
    if BACKEND == "compiled":
        backends.insert(0, "compiled")
    else:
        print("compiled kernel not built; timing the fallback only")

    print(f"{'dim':>6} | " + " | ".join(f"{b:>12}" for b in backends)
          + (" | speedup" if len(backends) == 2 else ""))
    for dim in args.dims:
        times = {}
        outputs = {}
        for backend in backends:
            elapsed, result = _time_backend(backend, dim, args.steps, args.repeats)
            times[backend] = elapsed
            outputs[backend] = result
        if len(backends) == 2:
            same = all(
                np.array_equal(a, b) if isinstance(a, np.ndarray) else a == b
                for a, b in zip(outputs["compiled"], outputs["fallback"])
            )
            if not same:
                print(f"dim={dim}: BACKEND OUTPUTS DIVERGED")
                return 1
        cells = " | ".join(
            f"{args.steps / times[b]:>9.0f}/s" for b in backends)
        row = f"{dim:>6} | {cells}"
        if len(backends) == 2:
            row += f" | {times['fallback'] / times['compiled']:>6.1f}x"
        print(row)
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
