# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled kernels for the power-law xmin scan.

Same contracts as ``_pure`` (see that module for the math).  Vector
transcendentals stay on numpy ufuncs into preallocated buffers; the
Illinois iteration, reductions, suffix statistics, and the KS walk run
as C loops, and the whole scan shares one log table instead of
per-candidate temporaries.
"""

from libc.math cimport exp, fabs, log, pow

import numpy as np

NHEAD = 100_000
MIN_TAIL_DEFAULT = 10
GRID_CAP = 20_000_000

BACKEND = "compiled"

cdef Py_ssize_t _NHEAD = 100_000


cdef inline double _zeta_tail(double s, double n) noexcept:
    return (pow(n, 1.0 - s) / (s - 1.0)
            + 0.5 * pow(n, -s)
            + s * pow(n, -s - 1.0) / 12.0
            - s * (s + 1.0) * (s + 2.0) * pow(n, -s - 3.0) / 720.0)


cdef inline double _logmoment_tail(double s, double n) noexcept:
    cdef double ln_n = log(n)
    cdef double sm1 = s - 1.0
    return (pow(n, -sm1) * (ln_n / sm1 + 1.0 / (sm1 * sm1))
            + 0.5 * ln_n * pow(n, -s)
            + (s * ln_n - 1.0) * pow(n, -s - 1.0) / 12.0)


def zeta(double s, double a):
    """Hurwitz zeta: sum over x >= a of x**-s, for s > 1."""
    cdef double head = 0.0
    cdef Py_ssize_t k
    # backward: ascending magnitudes keep the serial accumulation exact
    for k in range(_NHEAD - 1, -1, -1):
        head += pow(a + k, -s)
    return head + _zeta_tail(s, a + _NHEAD)


def zeta_logmoment(double s, double a):
    """(Z, M): normalization and log-moment sums over x >= a."""
    cdef double z = 0.0, m = 0.0, x, w
    cdef Py_ssize_t k
    for k in range(_NHEAD - 1, -1, -1):
        x = a + k
        w = pow(x, -s)
        z += w
        m += log(x) * w
    cdef double n = a + _NHEAD
    return z + _zeta_tail(s, n), m + _logmoment_tail(s, n)


cdef double _g_eval(double s, double s_over_n, double n,
                    object lx_arr, object buf_arr, double[::1] lx, double[::1] buf):
    """Score g(s) = E_s[ln X] - s_over_n using the hoisted log grid."""
    np.multiply(lx_arr, -s, out=buf_arr)
    np.exp(buf_arr, out=buf_arr)
    cdef double z = 0.0, m = 0.0
    cdef Py_ssize_t k
    for k in range(_NHEAD - 1, -1, -1):
        z += buf[k]
        m += buf[k] * lx[k]
    return (m + _logmoment_tail(s, n)) / (z + _zeta_tail(s, n)) - s_over_n


cdef double _mle(double s_over_n, double a, double seed, object lx_arr, object buf_arr):
    cdef double[::1] lx = lx_arr
    cdef double[::1] buf = buf_arr
    cdef double n = a + _NHEAD
    cdef double lo = 1.0 + 1e-6, hi = 50.0
    cdef double glo, ghi, gs, mid, gm
    cdef int side = 0
    cdef Py_ssize_t it

    glo = _g_eval(lo, s_over_n, n, lx_arr, buf_arr, lx, buf)
    if glo <= 0.0:
        return lo
    ghi = _g_eval(hi, s_over_n, n, lx_arr, buf_arr, lx, buf)
    if ghi >= 0.0:
        return hi
    if lo < seed < hi:
        gs = _g_eval(seed, s_over_n, n, lx_arr, buf_arr, lx, buf)
        if gs > 0.0:
            lo, glo = seed, gs
        else:
            hi, ghi = seed, gs

    for it in range(80):
        mid = (lo * ghi - hi * glo) / (ghi - glo)
        if not (lo < mid < hi):
            mid = 0.5 * (lo + hi)
        gm = _g_eval(mid, s_over_n, n, lx_arr, buf_arr, lx, buf)
        if gm > 0.0:
            if lo == mid:
                break
            lo, glo = mid, gm
            if side == 1:
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


def mle_alpha(double s_over_n, double a, double seed):
    """Exact discrete-MLE exponent (bracketed Illinois on the score)."""
    lx_arr = np.log(a + np.arange(_NHEAD, dtype=np.float64))
    buf_arr = np.empty(_NHEAD, dtype=np.float64)
    return _mle(s_over_n, a, seed, lx_arr, buf_arr)


def xmin_scan(uniq_in, counts_in, int min_tail=10):
    """Candidate-xmin scan; see _pure.xmin_scan for the contract."""
    uniq_arr = np.ascontiguousarray(uniq_in, dtype=np.float64)
    counts_arr = np.ascontiguousarray(counts_in, dtype=np.float64)
    cdef double[::1] uniq = uniq_arr
    cdef double[::1] counts = counts_arr
    cdef Py_ssize_t m = uniq.shape[0]
    cdef double a0 = uniq[0]
    cdef double vmax = uniq[m - 1]
    if vmax - a0 >= GRID_CAP:
        raise ValueError(f"value range {a0}..{vmax} exceeds grid cap {GRID_CAP}")

    csum_arr = np.empty(m, dtype=np.float64)
    slog_arr = np.empty(m, dtype=np.float64)
    cdef double[::1] csum = csum_arr
    cdef double[::1] slog = slog_arr
    cdef double cacc = 0.0, sacc = 0.0
    cdef Py_ssize_t i
    for i in range(m - 1, -1, -1):
        cacc += counts[i]
        sacc += counts[i] * log(uniq[i])
        csum[i] = cacc
        slog[i] = sacc

    # one log table serves every candidate's MLE grid and CDF walk;
    # the largest MLE grid belongs to the last viable candidate
    cdef Py_ssize_t span = <Py_ssize_t> (vmax - a0) + 1
    cdef Py_ssize_t tab_len = span
    if m >= 2:
        tab_len = <Py_ssize_t> (uniq[m - 2] - a0) + _NHEAD
    if tab_len < span:
        tab_len = span
    logtab_arr = np.log(a0 + np.arange(tab_len, dtype=np.float64))
    mlebuf_arr = np.empty(_NHEAD, dtype=np.float64)
    cdfbuf_arr = np.empty(span, dtype=np.float64)
    cdef double[::1] cdfbuf = cdfbuf_arr

    idx_out = np.empty(m, dtype=np.int64)
    alpha_out = np.empty(m, dtype=np.float64)
    ks_out = np.empty(m, dtype=np.float64)
    ll_out = np.empty(m, dtype=np.float64)
    ntail_out = np.empty(m, dtype=np.float64)
    cdef long long[::1] idx_v = idx_out
    cdef double[::1] alpha_v = alpha_out
    cdef double[::1] ks_v = ks_out
    cdef double[::1] ll_v = ll_out
    cdef double[::1] ntail_v = ntail_out

    cdef Py_ssize_t nc = 0, off, w, j, t, k
    cdef double n_tail, a, s_over_n, denom, seed, alpha, z, acc, cnt, ks, d
    cdef double[::1] mlebuf = mlebuf_arr

    for i in range(m - 1):
        n_tail = csum[i]
        if n_tail < min_tail:
            continue
        a = uniq[i]
        off = <Py_ssize_t> (a - a0)
        s_over_n = slog[i] / n_tail
        denom = s_over_n - log(a - 0.5) if a > 0.5 else 0.0
        seed = 1.0 + 1.0 / denom if denom > 0.0 else 2.0

        lx_slice = logtab_arr[off:off + _NHEAD]
        alpha = _mle(s_over_n, a, seed, lx_slice, mlebuf_arr)

        # normalization at the fitted exponent
        np.multiply(lx_slice, -alpha, out=mlebuf_arr)
        np.exp(mlebuf_arr, out=mlebuf_arr)
        z = 0.0
        for k in range(_NHEAD - 1, -1, -1):
            z += mlebuf[k]
        z += _zeta_tail(alpha, a + _NHEAD)

        # pmf over the observed range, then a fused ecdf/cdf walk
        w = <Py_ssize_t> (vmax - a) + 1
        cdf_slice = cdfbuf_arr[:w]
        np.multiply(logtab_arr[off:off + w], -alpha, out=cdf_slice)
        np.exp(cdf_slice, out=cdf_slice)
        acc = 0.0
        cnt = 0.0
        ks = 0.0
        j = i
        for t in range(w):
            acc += cdfbuf[t]
            if a + t == uniq[j]:
                cnt += counts[j]
                d = fabs(cnt / n_tail - acc / z)
                if d > ks:
                    ks = d
                j += 1
                if j == m:
                    break

        idx_v[nc] = i
        alpha_v[nc] = alpha
        ks_v[nc] = ks
        ll_v[nc] = -alpha * slog[i] - n_tail * log(z)
        ntail_v[nc] = n_tail
        nc += 1

    return (
        idx_out[:nc].copy(),
        alpha_out[:nc].copy(),
        ks_out[:nc].copy(),
        ll_out[:nc].copy(),
        ntail_out[:nc].copy(),
    )
