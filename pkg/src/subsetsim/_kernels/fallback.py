"""Pure-numpy Modified Metropolis chain kernel.

Draw sequence per transition (must stay in lockstep with the compiled
kernel): one length-d proposal fill (normal or uniform), then one length-d
exponential fill for the coordinate accept/reject. The coordinate test
"u < min(1, pdf(eta)/pdf(x))" is applied in the equivalent exponential form
"0.5*(eta^2 - x^2) < E" so both kernels decide with IEEE-exact arithmetic
on draws from the same numpy C routines, making their outputs bit-identical.
"""

from __future__ import annotations

import numpy as np

GAUSSIAN = 0
UNIFORM = 1


def chain_kernel(generator, x0, y0, n_steps, threshold, kind, spread, model,
                 marginal_logpdf=None):
    """Advance one Markov chain by ``n_steps`` transitions.

    Returns (points, responses, evaluations, coord_proposals,
    coord_acceptances, candidate_acceptances); row 0 of the outputs is the
    seed. ``marginal_logpdf`` (vectorized over coordinates) replaces the
    standard-normal target marginals when given.
    """
    d = x0.shape[0]
    points = np.empty((n_steps + 1, d), dtype=np.float64)
    responses = np.empty(n_steps + 1, dtype=np.float64)
    points[0] = x0
    responses[0] = y0

    x = np.array(x0, dtype=np.float64, copy=True)
    y = float(y0)
    evaluations = 0
    coord_acceptances = 0
    candidate_acceptances = 0

    for step in range(1, n_steps + 1):
        if kind == GAUSSIAN:
            eta = x + spread * generator.standard_normal(d)
        else:
            eta = x + spread * (2.0 * generator.random(d) - 1.0)
        exp_draws = generator.standard_exponential(d)
        if marginal_logpdf is None:
            gain = 0.5 * (eta * eta - x * x)
        else:
            gain = marginal_logpdf(x) - marginal_logpdf(eta)
        accept = gain < exp_draws
        coord_acceptances += int(np.count_nonzero(accept))
        xi = np.where(accept, eta, x)
        # a candidate identical to the current point is a repeated sample:
        # no evaluation, and it does not count as an acceptance (the adaptive
        # spread controller watches the rate of actual moves)
        if not np.array_equal(xi, x):
            y_xi = model.evaluate(xi)
            evaluations += 1
            if y_xi > threshold:
                x = xi
                y = y_xi
                candidate_acceptances += 1
        points[step] = x
        responses[step] = y

    return (points, responses, evaluations, n_steps * d,
            coord_acceptances, candidate_acceptances)
