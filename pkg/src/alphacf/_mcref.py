"""Vectorized numpy backend for the Monte-Carlo walkers.

Mirrors the compiled kernel step for step (same operand order, same
per-walker accumulation), so both backends agree to rounding noise. This one
also carries the 64-bit path used when a config asks for plain doubles.
"""

import numpy as np

RESAMPLE_EPS = 1e-15


def _resample(x, pool, used, resamples):
    hit = np.abs(x) < RESAMPLE_EPS
    if not hit.any():
        return resamples, False
    idx = np.nonzero(hit)[0]
    exhausted = bool((used[idx] >= pool.shape[1]).any())
    if exhausted:
        idx = idx[used[idx] < pool.shape[1]]
    x[idx] = pool[idx, used[idx]]
    used[idx] += 1
    return resamples + len(idx), exhausted


def entropy_walk(alpha, x0, pool, steps, burn, dtype=np.longdouble):
    a = dtype(alpha)
    oma = dtype(1.0) - a
    x = np.array(x0, dtype=dtype)
    pool = np.asarray(pool, dtype=dtype)
    used = np.zeros(len(x), dtype=np.int64)
    sums = np.zeros(len(x), dtype=dtype)
    two = dtype(2.0)
    resamples = 0
    exhausted = False
    for i in range(steps):
        resamples, bad = _resample(x, pool, used, resamples)
        exhausted = exhausted or bad
        absx = np.abs(x)
        if i >= burn:
            sums += -two * np.log(absx)
        inv = 1.0 / absx
        d = np.floor(inv + oma)
        x = inv - d
    return sums, steps - burn, resamples, exhausted


def domain_walk(alpha, x0, pool, steps, keep, dtype=np.longdouble):
    a = dtype(alpha)
    oma = dtype(1.0) - a
    x = np.array(x0, dtype=dtype)
    pool = np.asarray(pool, dtype=dtype)
    used = np.zeros(len(x), dtype=np.int64)
    y = np.zeros(len(x), dtype=dtype)
    n_walk = len(x)
    out = np.empty((n_walk * keep, 2), dtype=np.float64)
    first_kept = steps - keep
    for i in range(steps):
        _resample(x, pool, used, 0)
        positive = x > 0.0
        inv = 1.0 / np.abs(x)
        d = np.floor(inv + oma)
        y = 1.0 / (d + np.where(positive, y, -y))
        x = inv - d
        if i >= first_kept:
            rows = np.arange(n_walk) * keep + (i - first_kept)
            out[rows, 0] = x.astype(np.float64)
            out[rows, 1] = y.astype(np.float64)
    return out
