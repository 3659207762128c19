# cython: boundscheck=False, wraparound=False, cdivision=True
# cython: language_level=3
"""Scalar extended-precision walkers for the Monte-Carlo estimators.

One tight loop per walker, x87 long doubles throughout. All randomness and
aggregation live in the Python layer; this module only consumes pre-drawn
seed points and resample pools, so runs stay reproducible.
"""

from libc.math cimport fabsl, floorl, logl

import numpy as np

ctypedef long double real_t

DEF RESAMPLE_EPS = 1e-15


def entropy_walk(double alpha, object x0, object pool, long steps, long burn):
    """Iterate every walker and accumulate -2 log|x| after the burn-in.

    Returns (per-walker sums, kept steps per walker, resamples, exhausted).
    """
    cdef real_t a = <real_t> alpha
    cdef real_t oma = 1.0 - a
    x0_arr = np.ascontiguousarray(x0, dtype=np.longdouble)
    pool_arr = np.ascontiguousarray(pool, dtype=np.longdouble)
    cdef real_t[::1] xs = x0_arr
    cdef real_t[:, ::1] pl = pool_arr
    cdef Py_ssize_t n_walk = xs.shape[0]
    cdef Py_ssize_t pool_len = pl.shape[1]
    sums_arr = np.zeros(n_walk, dtype=np.longdouble)
    cdef real_t[::1] sums = sums_arr
    cdef long resamples = 0
    cdef bint exhausted = 0
    cdef Py_ssize_t w, used
    cdef long i
    cdef real_t x, inv, d, acc
    for w in range(n_walk):
        x = xs[w]
        used = 0
        acc = 0.0
        for i in range(steps):
            if fabsl(x) < RESAMPLE_EPS:
                if used >= pool_len:
                    exhausted = 1
                    break
                x = pl[w, used]
                used += 1
                resamples += 1
            if i >= burn:
                acc += -2.0 * logl(fabsl(x))
            inv = 1.0 / fabsl(x)
            d = floorl(inv + oma)
            x = inv - d
        sums[w] = acc
    return sums_arr, steps - burn, resamples, bool(exhausted)


def domain_walk(double alpha, object x0, object pool, long steps, long keep):
    """Iterate the planar map from (x, 0) seeds and record the tail segment.

    Returns a float64 array of shape (len(x0) * keep, 2).
    """
    cdef real_t a = <real_t> alpha
    cdef real_t oma = 1.0 - a
    x0_arr = np.ascontiguousarray(x0, dtype=np.longdouble)
    pool_arr = np.ascontiguousarray(pool, dtype=np.longdouble)
    cdef real_t[::1] xs = x0_arr
    cdef real_t[:, ::1] pl = pool_arr
    cdef Py_ssize_t n_walk = xs.shape[0]
    cdef Py_ssize_t pool_len = pl.shape[1]
    out_arr = np.empty((n_walk * keep, 2), dtype=np.float64)
    cdef double[:, ::1] out = out_arr
    cdef Py_ssize_t w, used, row
    cdef long i, first_kept = steps - keep
    cdef bint positive
    cdef real_t x, y, inv, d
    for w in range(n_walk):
        x = xs[w]
        y = 0.0
        used = 0
        row = w * keep
        for i in range(steps):
            if fabsl(x) < RESAMPLE_EPS and used < pool_len:
                x = pl[w, used]
                used += 1
            positive = x > 0.0
            inv = 1.0 / fabsl(x)
            d = floorl(inv + oma)
            if positive:
                y = 1.0 / (d + y)
            else:
                y = 1.0 / (d - y)
            x = inv - d
            if i >= first_kept:
                out[row, 0] = <double> x
                out[row, 1] = <double> y
                row += 1
    return out_arr
