# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled hot kernels: fused vMF log-sum-exp and geodesic arc minima.

Mirrors ``_pure`` exactly (same arc discretization, same log-space
accumulation) so the two backends are interchangeable.
"""

import numpy as np

cimport openmp
from cython.parallel cimport prange
from libc.math cimport INFINITY, acos, ceil, exp, log, sin


cdef double _lme_row(const double* q, const double* x, Py_ssize_t n, Py_ssize_t d,
                     double kappa) noexcept nogil:
    # streaming log-sum-exp of kappa * (q . x_j) over j
    cdef double mx = -INFINITY
    cdef double s = 0.0
    cdef double dot, v
    cdef Py_ssize_t j, k
    for j in range(n):
        dot = 0.0
        for k in range(d):
            dot += q[k] * x[j * d + k]
        v = kappa * dot
        if v <= mx:
            s += exp(v - mx)
        else:
            s = s * exp(mx - v) + 1.0
            mx = v
    return mx + log(s)


cdef double _arc_min(const double* a, const double* b, const double* x,
                     Py_ssize_t n, Py_ssize_t d, double kappa, double step,
                     int min_interior, double* q) noexcept nogil:
    cdef double dot = 0.0
    cdef Py_ssize_t k, s
    for k in range(d):
        dot += a[k] * b[k]
    if dot > 1.0:
        dot = 1.0
    if dot < -1.0:
        dot = -1.0
    cdef double theta = acos(dot)
    if theta < 1e-9:
        return INFINITY
    cdef Py_ssize_t nseg = <Py_ssize_t>ceil(theta / step)
    if nseg < min_interior + 1:
        nseg = min_interior + 1
    cdef double st = sin(theta)
    cdef double best = INFINITY
    cdef double t, sa, sb, v
    for s in range(1, nseg):
        t = <double>s / <double>nseg
        sa = sin((1.0 - t) * theta) / st
        sb = sin(t * theta) / st
        for k in range(d):
            q[k] = sa * a[k] + sb * b[k]
        v = _lme_row(q, x, n, d, kappa)
        if v < best:
            best = v
    return best


def log_mean_exp_dots(queries, points, double kappa):
    """log( (1/n) * sum_i exp(kappa * q . X_i) ) per query row."""
    q_arr = np.ascontiguousarray(queries, dtype=np.float64)
    if q_arr.ndim == 1:
        q_arr = q_arr[None, :]
    x_arr = np.ascontiguousarray(points, dtype=np.float64)
    cdef double[:, ::1] q = q_arr
    cdef double[:, ::1] x = x_arr
    cdef Py_ssize_t m = q.shape[0]
    cdef Py_ssize_t d = q.shape[1]
    cdef Py_ssize_t n = x.shape[0]
    out_arr = np.empty(m)
    cdef double[::1] out = out_arr
    cdef Py_ssize_t i
    with nogil:
        for i in prange(m, schedule="static"):
            out[i] = _lme_row(&q[i, 0], &x[0, 0], n, d, kappa)
    return out_arr - log(n)


def arc_min_log_mean_exp(arc_ends, points, edges_i, edges_j, double kappa,
                         double step, int min_interior):
    """Minimum interior log density (sans normalizing constant) per edge."""
    a_arr = np.ascontiguousarray(arc_ends, dtype=np.float64)
    x_arr = np.ascontiguousarray(points, dtype=np.float64)
    ei_arr = np.ascontiguousarray(edges_i, dtype=np.int64)
    ej_arr = np.ascontiguousarray(edges_j, dtype=np.int64)
    cdef double[:, ::1] a = a_arr
    cdef double[:, ::1] x = x_arr
    cdef long long[::1] ei = ei_arr
    cdef long long[::1] ej = ej_arr
    cdef Py_ssize_t n_edges = ei.shape[0]
    cdef Py_ssize_t d = a.shape[1]
    cdef Py_ssize_t n = x.shape[0]
    out_arr = np.empty(n_edges)
    cdef double[::1] out = out_arr
    if n_edges == 0:
        return out_arr
    cdef int nthreads = openmp.omp_get_max_threads()
    scratch_arr = np.empty((nthreads, d))
    cdef double[:, ::1] scratch = scratch_arr
    cdef Py_ssize_t e
    cdef int tid
    with nogil:
        for e in prange(n_edges, schedule="dynamic", chunksize=16):
            tid = openmp.omp_get_thread_num()
            out[e] = _arc_min(&a[ei[e], 0], &a[ej[e], 0], &x[0, 0], n, d,
                              kappa, step, min_interior, &scratch[tid, 0])
    return out_arr - log(n)
