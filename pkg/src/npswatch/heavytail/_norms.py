"""Normalization sums for the alternative tail models.

Each Z is the discrete sum over x >= a of the model's unnormalized
mass, computed like the zeta kernel: NHEAD explicit terms, then an
analytic tail (incomplete gamma for the truncated power law, erfc for
the lognormal, geometric closed form for the exponential) plus
Euler-Maclaurin corrections.
"""

import math

import numpy as np
from scipy.special import gammaincc, gammaln

from . import kernels

NHEAD = kernels.NHEAD


def upper_gamma(s: float, z: float) -> float:
    """Gamma(s, z) for real s (possibly <= 0) and z > 0.

    scipy only exposes the regularized positive-shape version, so shift
    to s + m > 0 and recur back down: Gamma(s, z) = (Gamma(s+1, z)
    - z**s * exp(-z)) / s.  The subtraction only cancels badly when
    z >> |s|, where the whole quantity underflows anyway.
    """
    if z >= 700.0:
        return 0.0
    m = 0
    while s + m <= 0:
        m += 1
    g = gammaincc(s + m, z) * math.exp(gammaln(s + m))
    for j in range(m - 1, -1, -1):
        sj = s + j
        g = (g - z ** sj * math.exp(-z)) / sj
    return g


def truncated_norm(alpha: float, lam: float, a: float) -> float:
    """Z = sum_{x>=a} x**-alpha * exp(-lam*x); lam = 0 is the pure zeta."""
    if lam <= 0.0:
        return kernels.zeta(alpha, a)
    x = np.arange(a, a + NHEAD, dtype=np.float64)
    head = float(np.sum(x ** -alpha * np.exp(-lam * x)))
    n = a + NHEAD
    fn = n ** -alpha * math.exp(-lam * n) if lam * n < 700 else 0.0
    integral = lam ** (alpha - 1.0) * upper_gamma(1.0 - alpha, lam * n)
    fpn = -fn * (alpha / n + lam)
    return head + integral + 0.5 * fn - fpn / 12.0


def lognormal_norm(mu: float, sigma: float, a: float) -> float:
    """Z = sum_{x>=a} exp(-(ln x - mu)^2 / (2 sigma^2)) / x."""
    x = np.arange(a, a + NHEAD, dtype=np.float64)
    head = float(np.sum(np.exp(-((np.log(x) - mu) ** 2) / (2.0 * sigma * sigma)) / x))
    n = float(a + NHEAD)
    tail = sigma * math.sqrt(math.pi / 2.0) * math.erfc((math.log(n) - mu) / (math.sqrt(2.0) * sigma))
    fn = math.exp(-((math.log(n) - mu) ** 2) / (2.0 * sigma * sigma)) / n
    return head + tail + 0.5 * fn


def exponential_log_norm(lam: float, a: float) -> float:
    """ln Z for Z = sum_{x>=a} exp(-lam*x) = exp(-lam*a) / (1 - exp(-lam))."""
    return -lam * a - math.log(-math.expm1(-lam))
