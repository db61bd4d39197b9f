"""Pure numpy kernels for the discrete power-law machinery.

Twin of the compiled extension in ``_core.pyx``; kernels.py picks one at
import time.  Everything here is deterministic float64 math, no state.

The Hurwitz zeta normalization is computed by direct summation of
``NHEAD`` terms plus an Euler-Maclaurin tail (integral, half-term, and
Bernoulli corrections), which keeps the absolute error below 1e-10 for
every exponent the fitter can visit (s > 1, a >= 1).
"""

import numpy as np

NHEAD = 100_000
# candidate tails narrower than this are never scanned
MIN_TAIL_DEFAULT = 10
# refuse CDF grids beyond this many integers (memory guard)
GRID_CAP = 20_000_000

BACKEND = "pure"


def _zeta_tail(s: float, n: float) -> float:
    """Euler-Maclaurin completion of sum x**-s for x >= n."""
    return (
        n ** (1.0 - s) / (s - 1.0)
        + 0.5 * n ** (-s)
        + s * n ** (-s - 1.0) / 12.0
        - s * (s + 1.0) * (s + 2.0) * n ** (-s - 3.0) / 720.0
    )


def _logmoment_tail(s: float, n: float) -> float:
    """Euler-Maclaurin completion of sum ln(x) * x**-s for x >= n."""
    ln_n = np.log(n)
    sm1 = s - 1.0
    return (
        n ** -sm1 * (ln_n / sm1 + 1.0 / (sm1 * sm1))
        + 0.5 * ln_n * n ** (-s)
        + (s * ln_n - 1.0) * n ** (-s - 1.0) / 12.0
    )


def zeta(s: float, a: float) -> float:
    """Hurwitz zeta: sum over x >= a of x**-s, for s > 1."""
    k = np.arange(NHEAD, dtype=np.float64)
    head = float(np.sum((a + k) ** (-s)))
    return head + _zeta_tail(s, a + NHEAD)


def zeta_logmoment(s: float, a: float) -> tuple[float, float]:
    """(Z, M) where Z = sum x**-s and M = sum ln(x) * x**-s over x >= a.

    M/Z is the model mean of ln X, the quantity the maximum-likelihood
    score equates with the sample mean of ln x.
    """
    lx = np.log(a + np.arange(NHEAD, dtype=np.float64))
    pw = np.exp(-s * lx)
    n = a + NHEAD
    return float(pw.sum()) + _zeta_tail(s, n), float((lx * pw).sum()) + _logmoment_tail(s, n)


def mle_alpha(s_over_n: float, a: float, seed: float) -> float:
    """Exact discrete-MLE exponent: solve E_alpha[ln X] = s_over_n.

    Bracketed Illinois iteration on the decreasing score
    g(alpha) = M/Z - s_over_n; ``seed`` (the shifted-continuous
    approximation) only narrows the initial bracket.  The log grid is
    hoisted so each iteration is one exp pass plus fused reductions.
    """
    lx = np.log(a + np.arange(NHEAD, dtype=np.float64))
    buf = np.empty(NHEAD, dtype=np.float64)
    n = a + NHEAD

    def g(s: float) -> float:
        np.multiply(lx, -s, out=buf)
        np.exp(buf, out=buf)
        z = float(buf.sum()) + _zeta_tail(s, n)
        np.multiply(buf, lx, out=buf)
        m = float(buf.sum()) + _logmoment_tail(s, n)
        return m / z - s_over_n

    lo, hi = 1.0 + 1e-6, 50.0
    glo = g(lo)
    if glo <= 0.0:  # sample log-mean at or above the alpha->1 pole: clamp
        return lo
    ghi = g(hi)
    if ghi >= 0.0:
        return hi
    if lo < seed < hi:
        gs = g(seed)
        if gs > 0.0:
            lo, glo = seed, gs
        else:
            hi, ghi = seed, gs

    side = 0
    for _ in range(80):
        mid = (lo * ghi - hi * glo) / (ghi - glo)
        if not (lo < mid < hi):
            mid = 0.5 * (lo + hi)
        gm = g(mid)
        if gm > 0.0:
            if lo == mid:
                break
            lo, glo = mid, gm
            if side == 1:  # Illinois damping when the hi end goes stale
                ghi *= 0.5
            side = 1
        else:
            if hi == mid:
                break
            hi, ghi = mid, gm
            if side == -1:
                glo *= 0.5
            side = -1
        if hi - lo < 1e-10:
            break
    return 0.5 * (lo + hi)


def powerlaw_cdf_at(alpha: float, a: float, points: np.ndarray) -> np.ndarray:
    """Fitted-model CDF evaluated at integer ``points`` (ascending, >= a)."""
    vmax = float(points[-1])
    if vmax - a >= GRID_CAP:
        raise ValueError(f"value range {a}..{vmax} exceeds grid cap {GRID_CAP}")
    grid = np.arange(a, vmax + 1.0, dtype=np.float64)
    cdf = np.cumsum(grid ** (-alpha))
    cdf /= zeta(alpha, a)
    idx = (np.asarray(points, dtype=np.float64) - a).astype(np.int64)
    return cdf[idx]


def xmin_scan(uniq: np.ndarray, counts: np.ndarray, min_tail: int = MIN_TAIL_DEFAULT):
    """Fit a discrete power law at every viable candidate xmin.

    ``uniq`` are the ascending distinct sample values, ``counts`` their
    multiplicities.  A candidate is viable when its tail keeps at least
    ``min_tail`` points and at least two distinct values.  Returns five
    aligned arrays: candidate index into ``uniq``, alpha, KS distance,
    tail log-likelihood, tail size.
    """
    uniq = np.asarray(uniq, dtype=np.float64)
    counts = np.asarray(counts, dtype=np.float64)
    if uniq[-1] - uniq[0] >= GRID_CAP:
        raise ValueError(f"value range {uniq[0]}..{uniq[-1]} exceeds grid cap {GRID_CAP}")
    csum = np.cumsum(counts[::-1])[::-1]
    slog = np.cumsum((counts * np.log(uniq))[::-1])[::-1]

    idx_out, alpha_out, ks_out, ll_out, ntail_out = [], [], [], [], []
    for i in range(len(uniq) - 1):
        n_tail = csum[i]
        if n_tail < min_tail:
            continue
        a = uniq[i]
        s_over_n = slog[i] / n_tail
        # shifted-continuous approximation as the bracket seed
        denom = s_over_n - np.log(a - 0.5) if a > 0.5 else 0.0
        seed = 1.0 + 1.0 / denom if denom > 0 else 2.0
        alpha = mle_alpha(s_over_n, a, seed)
        z = zeta(alpha, a)
        grid = np.arange(a, uniq[-1] + 1.0, dtype=np.float64)
        cdf = np.cumsum(grid ** (-alpha))[(uniq[i:] - a).astype(np.int64)] / z
        ecdf = np.cumsum(counts[i:]) / n_tail
        ks = float(np.max(np.abs(ecdf - cdf)))
        ll = -alpha * slog[i] - n_tail * np.log(z)
        idx_out.append(i)
        alpha_out.append(alpha)
        ks_out.append(ks)
        ll_out.append(ll)
        ntail_out.append(n_tail)

    return (
        np.array(idx_out, dtype=np.int64),
        np.array(alpha_out, dtype=np.float64),
        np.array(ks_out, dtype=np.float64),
        np.array(ll_out, dtype=np.float64),
        np.array(ntail_out, dtype=np.float64),
    )
