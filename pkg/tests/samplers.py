"""Seeded integer samplers used as fitting oracles.

Inverse-CDF draws from an explicitly tabulated pmf, so the generating
distribution is known exactly and independently of the code under test.
"""

import numpy as np


def sample_pl(alpha, n, rng, cap=10**6):
    """n draws from a discrete power law p(x) ~ x**-alpha on [1, cap]."""
    xs = np.arange(1, cap + 1, dtype=float)
    p = xs**-alpha
    cdf = np.cumsum(p / p.sum())
    return (np.searchsorted(cdf, rng.random(n)) + 1).astype(np.int64)


def sample_pmf(pmf, n, rng, cap=200_000):
    """n draws from an arbitrary unnormalized pmf on [1, cap]."""
    xs = np.arange(1, cap + 1, dtype=float)
    p = pmf(xs)
    cdf = np.cumsum(p / p.sum())
    return (np.searchsorted(cdf, rng.random(n)) + 1).astype(np.int64)
