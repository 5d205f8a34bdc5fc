#cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled Modified Metropolis chain kernel.

Mirrors _kernels.fallback.chain_kernel transition for transition: same draw
order, same exponential-form coordinate test, same numpy C random routines,
so the two kernels emit bit-identical chains. Standard-normal target
marginals only; custom marginals stay on the fallback path.
"""

import numpy as np

cimport numpy as cnp
from cpython.pycapsule cimport PyCapsule_GetPointer
from numpy.random cimport bitgen_t
from numpy.random.c_distributions cimport (
    random_standard_exponential_fill,
    random_standard_normal_fill,
    random_standard_uniform_fill,
)

cnp.import_array()

cdef int KIND_GAUSSIAN = 0


def chain_kernel(object bit_generator,
                 cnp.ndarray[cnp.float64_t, ndim=1] x0,
                 double y0,
                 Py_ssize_t n_steps,
                 double threshold,
                 int kind,
                 cnp.ndarray[cnp.float64_t, ndim=1] spread,
                 object model):
    """Advance one chain by n_steps transitions; row 0 is the seed."""
    cdef Py_ssize_t d = x0.shape[0]
    cdef cnp.ndarray[cnp.float64_t, ndim=2] points = np.empty((n_steps + 1, d))
    cdef cnp.ndarray[cnp.float64_t, ndim=1] responses = np.empty(n_steps + 1)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] noise = np.empty(d)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] exp_draws = np.empty(d)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] candidate = np.empty(d)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] x = x0.copy()

    cdef double[::1] xv = x
    cdef double[::1] nv = noise
    cdef double[::1] ev = exp_draws
    cdef double[::1] cv = candidate
    cdef double[::1] sv = spread
    cdef double[:, ::1] pv = points
    cdef double[::1] rv = responses

    cdef bitgen_t *rng = <bitgen_t *> PyCapsule_GetPointer(
        bit_generator.capsule, "BitGenerator")

    cdef double y = y0
    cdef double eta, y_xi
    cdef Py_ssize_t step, k
    cdef bint changed
    cdef long evaluations = 0
    cdef long coord_acceptances = 0
    cdef long candidate_acceptances = 0

    for k in range(d):
        pv[0, k] = xv[k]
    rv[0] = y0

    with bit_generator.lock:
        for step in range(1, n_steps + 1):
            if kind == KIND_GAUSSIAN:
                random_standard_normal_fill(rng, d, &nv[0])
            else:
                random_standard_uniform_fill(rng, d, &nv[0])
            random_standard_exponential_fill(rng, d, &ev[0])

            changed = False
            for k in range(d):
                if kind == KIND_GAUSSIAN:
                    eta = xv[k] + sv[k] * nv[k]
                else:
                    eta = xv[k] + sv[k] * (2.0 * nv[k] - 1.0)
                if 0.5 * (eta * eta - xv[k] * xv[k]) < ev[k]:
                    coord_acceptances += 1
                    cv[k] = eta
                else:
                    cv[k] = xv[k]
                if cv[k] != xv[k]:
                    changed = True

            if changed:
                # evaluate through the model so responses match the fallback
                # (np.sum is pairwise; a C-loop sum would drift by ulps)
                y_xi = <double> model.evaluate(candidate.copy())
                evaluations += 1
                if y_xi > threshold:
                    for k in range(d):
                        xv[k] = cv[k]
                    y = y_xi
                    candidate_acceptances += 1

            for k in range(d):
                pv[step, k] = xv[k]
            rv[step] = y

    return (points, responses, evaluations, <long> (n_steps * d),
            coord_acceptances, candidate_acceptances)
