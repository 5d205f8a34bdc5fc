"""Chain-kernel backend selection: compiled extension with numpy fallback.

The compiled kernel is used when the extension built; setting the
environment variable SUBSETSIM_PURE_PYTHON=1 forces the fallback. Both
backends produce bit-identical chains for the same stream (covered by the
parity tests), so the choice affects speed only.
"""

from __future__ import annotations

import os

import numpy as np

from . import fallback
from .fallback import GAUSSIAN, UNIFORM

_FORCED_FALLBACK = os.environ.get("SUBSETSIM_PURE_PYTHON", "") not in ("", "0")

if _FORCED_FALLBACK:
    _compiled = None
else:
    try:
        from . import _chain as _compiled
    except ImportError:
        _compiled = None

BACKEND = "fallback" if _compiled is None else "compiled"


def backend_name() -> str:
    """Name of the kernel backend selected at import time."""
    return BACKEND


def run_chain_kernel(stream, x0, y0, n_steps, threshold, kind, spread, model,
                     marginal_logpdf=None, backend=None):
    """Dispatch one chain advance to the selected backend.

    ``backend`` overrides the import-time selection ("compiled"/"fallback");
    custom target marginals always take the fallback path.
    """
    if backend is None:
        backend = BACKEND
    if backend == "compiled" and _compiled is None:
        raise RuntimeError("compiled kernel requested but the extension is not built")
    x0 = np.ascontiguousarray(x0, dtype=np.float64)
    spread = np.ascontiguousarray(spread, dtype=np.float64)
    if backend == "compiled" and marginal_logpdf is None:
        return _compiled.chain_kernel(
            stream.bit_generator, x0, float(y0), int(n_steps),
            float(threshold), int(kind), spread, model)
    return fallback.chain_kernel(
        stream.generator, x0, float(y0), int(n_steps),
        float(threshold), int(kind), spread, model, marginal_logpdf)
