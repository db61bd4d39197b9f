"""Discrete heavy-tail fitting and model comparison.

The power law is fitted by exact discrete maximum likelihood at every
candidate xmin (the sorted distinct sample values), keeping the
candidate whose fitted CDF sits closest to the empirical tail CDF in
Kolmogorov-Smirnov distance.  Alternatives (lognormal, exponential,
truncated power law) are fitted on the same tail so log-likelihoods
stay commensurable, and fits are compared with a normalized
(Vuong-style) log-likelihood-ratio test.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations
from types import MappingProxyType
from typing import Iterable, Mapping, Sequence, Union

import numpy as np
from scipy.optimize import minimize, minimize_scalar

from . import _norms, kernels

MODELS = ("power_law", "lognormal", "exponential", "truncated_power_law")

MIN_POINTS = 10
# likelihood-search stops: absolute tolerance on the log-likelihood and
# an iteration cap that flags (never raises) on expiry
LL_TOL = 1e-8
MAX_ITER = 2000
# smallest admissible rate for the truncated model; keeps lambda > 0
# while staying within 1e-6 of the pure power-law likelihood
LAMBDA_FLOOR = 1e-12

INDISTINGUISHABLE_P = 0.1


class HeavyTailError(ValueError):
    """Invalid sample or fit request."""


class DegenerateSample(HeavyTailError):
    """All values equal; no tail shape to fit."""


class TooFewTailPoints(HeavyTailError):
    """Fewer than MIN_POINTS values above the requested xmin."""


@dataclass(frozen=True, eq=False)
class Sample:
    """Sorted multiset of positive integers."""

    values: np.ndarray

    @classmethod
    def from_values(cls, values: Iterable[int]) -> "Sample":
        arr = np.asarray(values if isinstance(values, np.ndarray) else list(values))
        if arr.size and not np.issubdtype(arr.dtype, np.integer):
            rounded = np.rint(arr)
            if not np.allclose(arr, rounded, rtol=0, atol=1e-9):
                raise HeavyTailError("sample values must be integers")
            arr = rounded
        arr = np.sort(arr.astype(np.int64))
        if arr.size < MIN_POINTS:
            raise TooFewTailPoints(f"need at least {MIN_POINTS} values, got {arr.size}")
        if arr.size and arr[0] < 1:
            raise HeavyTailError("sample values must be >= 1")
        arr.setflags(write=False)
        return cls(arr)

    @property
    def n(self) -> int:
        return int(self.values.size)

    def tail(self, xmin: int) -> np.ndarray:
        return self.values[self.values >= xmin]


def as_sample(values: Union[Sample, Iterable[int]]) -> Sample:
    return values if isinstance(values, Sample) else Sample.from_values(values)


@dataclass(frozen=True)
class FitResult:
    model: str
    params: Mapping[str, float]
    xmin: int
    ks_distance: float
    log_likelihood: float
    n_tail: int
    converged: bool = True


@dataclass(frozen=True)
class ScanRow:
    xmin: int
    alpha: float
    ks: float
    log_likelihood: float
    n_tail: int


@dataclass(frozen=True)
class Comparison:
    model_a: str
    model_b: str
    r: float
    p: float


@dataclass(frozen=True)
class ModelRanking:
    ranked: tuple[str, ...]
    groups: tuple[tuple[str, ...], ...]
    fits: Mapping[str, FitResult]
    comparisons: tuple[Comparison, ...]


def _compress(values: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    uniq, counts = np.unique(values, return_counts=True)
    return uniq.astype(np.float64), counts.astype(np.float64)


# ---------------------------------------------------------------------------
# log-pmf evaluation, shared by likelihoods, KS, and comparisons


def log_norm(model: str, params: Mapping[str, float], xmin: int) -> float:
    a = float(xmin)
    if model == "power_law":
        return math.log(kernels.zeta(params["alpha"], a))
    if model == "truncated_power_law":
        return math.log(_norms.truncated_norm(params["alpha"], params["lambda"], a))
    if model == "lognormal":
        return math.log(_norms.lognormal_norm(params["mu"], params["sigma"], a))
    if model == "exponential":
        return _norms.exponential_log_norm(params["lambda"], a)
    raise HeavyTailError(f"unknown model {model!r}")


def logpmf(model: str, params: Mapping[str, float], x: np.ndarray, xmin: int) -> np.ndarray:
    """Tail-conditioned log pmf at integer points x >= xmin."""
    x = np.asarray(x, dtype=np.float64)
    ln_z = log_norm(model, params, xmin)
    if model == "power_law":
        return -params["alpha"] * np.log(x) - ln_z
    if model == "truncated_power_law":
        return -params["alpha"] * np.log(x) - params["lambda"] * x - ln_z
    if model == "lognormal":
        lx = np.log(x)
        s = params["sigma"]
        return -((lx - params["mu"]) ** 2) / (2.0 * s * s) - lx - ln_z
    if model == "exponential":
        return -params["lambda"] * x - ln_z
    raise HeavyTailError(f"unknown model {model!r}")


def _ks_distance(model: str, params: Mapping[str, float], xmin: int,
                 uniq: np.ndarray, counts: np.ndarray) -> float:
    a = float(xmin)
    if uniq[-1] - a >= kernels.GRID_CAP:
        raise HeavyTailError("value range exceeds grid cap")
    grid = np.arange(a, uniq[-1] + 1.0, dtype=np.float64)
    cdf = np.cumsum(np.exp(logpmf(model, params, grid, xmin)))
    cdf_at = cdf[(uniq - a).astype(np.int64)]
    ecdf = np.cumsum(counts) / counts.sum()
    return float(np.max(np.abs(ecdf - cdf_at)))


# ---------------------------------------------------------------------------
# power law


def xmin_scan(sample: Union[Sample, Iterable[int]], min_tail: int = MIN_POINTS) -> list[ScanRow]:
    """Exact-MLE fit at every viable candidate xmin, in ascending order."""
    s = as_sample(sample)
    uniq, counts = _compress(s.values)
    if len(uniq) < 2:
        raise DegenerateSample("all sample values are equal")
    idx, alphas, ks, lls, ntails = kernels.xmin_scan(uniq, counts, min_tail)
    if len(idx) == 0:
        raise TooFewTailPoints(f"no candidate xmin keeps {min_tail} tail points")
    return [
        ScanRow(int(uniq[i]), float(al), float(k), float(ll), int(nt))
        for i, al, k, ll, nt in zip(idx, alphas, ks, lls, ntails)
    ]


def fit_power_law(sample: Union[Sample, Iterable[int]]) -> FitResult:
    """Discrete power-law fit with KS-minimizing xmin selection."""
    rows = xmin_scan(sample)
    best = min(range(len(rows)), key=lambda i: rows[i].ks)
    row = rows[best]
    return FitResult(
        model="power_law",
        params=MappingProxyType({"alpha": row.alpha}),
        xmin=row.xmin,
        ks_distance=row.ks,
        log_likelihood=row.log_likelihood,
        n_tail=row.n_tail,
    )


def power_law_at(sample: Union[Sample, Iterable[int]], xmin: int) -> FitResult:
    """Power-law fit with the exponent estimated at a fixed xmin."""
    s = as_sample(sample)
    uniq, counts, n, lx = _tail_stats(s, xmin)
    a = float(xmin)
    s_over_n = float(np.sum(counts * lx)) / n
    denom = s_over_n - math.log(a - 0.5)
    seed = 1.0 + 1.0 / denom if denom > 0 else 2.0
    alpha = kernels.mle_alpha(s_over_n, a, seed)
    params = MappingProxyType({"alpha": alpha})
    ll = float(np.sum(counts * logpmf("power_law", params, uniq, xmin)))
    return FitResult(
        model="power_law",
        params=params,
        xmin=xmin,
        ks_distance=_ks_distance("power_law", params, xmin, uniq, counts),
        log_likelihood=ll,
        n_tail=int(counts.sum()),
    )


# ---------------------------------------------------------------------------
# alternatives on the shared tail


def _tail_stats(s: Sample, xmin: int):
    tail = s.tail(xmin)
    if tail.size < MIN_POINTS:
        raise TooFewTailPoints(f"only {tail.size} values >= xmin {xmin}")
    uniq, counts = _compress(tail)
    if len(uniq) < 2:
        raise DegenerateSample("tail values are all equal")
    n = float(counts.sum())
    lx = np.log(uniq)
    return uniq, counts, n, lx


def _fit_exponential(uniq, counts, n, xmin) -> FitResult:
    a = float(xmin)
    total = float(np.sum(counts * uniq))
    mean_excess = total / n - a
    lam0 = math.log1p(1.0 / mean_excess) if mean_excess > 0 else 1.0

    def nll(u: float) -> float:
        lam = math.exp(u)
        return lam * total + n * _norms.exponential_log_norm(lam, a)

    res = minimize_scalar(
        nll,
        bounds=(math.log(lam0) - 6.0, math.log(lam0) + 6.0),
        method="bounded",
        options={"xatol": 1e-12, "maxiter": MAX_ITER},
    )
    lam = math.exp(res.x)
    return FitResult(
        model="exponential",
        params=MappingProxyType({"lambda": lam}),
        xmin=xmin,
        ks_distance=_ks_distance("exponential", {"lambda": lam}, xmin, uniq, counts),
        log_likelihood=-float(res.fun),
        n_tail=int(n),
        converged=bool(res.success),
    )


def _fit_lognormal(uniq, counts, n, lx, xmin) -> FitResult:
    a = float(xmin)
    slog = float(np.sum(counts * lx))
    mu0 = slog / n
    var0 = float(np.sum(counts * (lx - mu0) ** 2)) / n
    sigma0 = max(math.sqrt(var0), 0.05)

    def nll(p) -> float:
        mu, sigma = p
        if sigma <= 1e-3 or sigma > 50.0 or abs(mu) > 50.0:
            return 1e18
        ll = (
            -float(np.sum(counts * (lx - mu) ** 2)) / (2.0 * sigma * sigma)
            - slog
            - n * math.log(_norms.lognormal_norm(mu, sigma, a))
        )
        return -ll

    res = minimize(
        nll, [mu0, sigma0], method="Nelder-Mead",
        options={"fatol": LL_TOL, "xatol": 1e-8, "maxiter": MAX_ITER},
    )
    mu, sigma = float(res.x[0]), float(res.x[1])
    params = {"mu": mu, "sigma": sigma}
    return FitResult(
        model="lognormal",
        params=MappingProxyType(params),
        xmin=xmin,
        ks_distance=_ks_distance("lognormal", params, xmin, uniq, counts),
        log_likelihood=-float(res.fun),
        n_tail=int(n),
        converged=bool(res.success),
    )


def _fit_truncated(uniq, counts, n, lx, xmin) -> FitResult:
    a = float(xmin)
    slog = float(np.sum(counts * lx))
    total = float(np.sum(counts * uniq))
    s_over_n = slog / n
    denom = s_over_n - math.log(a - 0.5) if a > 0.5 else 0.0
    alpha_pl = kernels.mle_alpha(s_over_n, a, 1.0 + 1.0 / denom if denom > 0 else 2.0)
    ll_pl = -alpha_pl * slog - n * math.log(kernels.zeta(alpha_pl, a))

    def nll(p) -> float:
        alpha, lam = p
        if lam < 0.0 or not -10.0 < alpha < 12.0:
            return 1e18
        if lam <= 0.0 and alpha <= 1.000001:
            return 1e18
        return alpha * slog + lam * total + n * math.log(_norms.truncated_norm(alpha, lam, a))

    res = minimize(
        nll, [alpha_pl, 1e-3], method="Nelder-Mead",
        options={"fatol": LL_TOL, "xatol": 1e-8, "maxiter": MAX_ITER},
    )
    alpha, lam = float(res.x[0]), max(float(res.x[1]), LAMBDA_FLOOR)
    ll = -nll((alpha, lam))
    converged = bool(res.success)
    # nested-model guard: the truncated family contains the pure power
    # law, so its maximized likelihood may never fall below it
    if ll < ll_pl:
        alpha, lam = alpha_pl, LAMBDA_FLOOR
        ll = -nll((alpha, lam))
    params = {"alpha": alpha, "lambda": lam}
    return FitResult(
        model="truncated_power_law",
        params=MappingProxyType(params),
        xmin=xmin,
        ks_distance=_ks_distance("truncated_power_law", params, xmin, uniq, counts),
        log_likelihood=float(ll),
        n_tail=int(n),
        converged=converged,
    )


def fit_alternatives(sample: Union[Sample, Iterable[int]], xmin: int) -> dict[str, FitResult]:
    """Fit lognormal, exponential, and truncated power law on the tail
    selected by the power-law scan (shared-xmin convention)."""
    s = as_sample(sample)
    uniq, counts, n, lx = _tail_stats(s, xmin)
    return {
        "lognormal": _fit_lognormal(uniq, counts, n, lx, xmin),
        "exponential": _fit_exponential(uniq, counts, n, xmin),
        "truncated_power_law": _fit_truncated(uniq, counts, n, lx, xmin),
    }


def fit_all(sample: Union[Sample, Iterable[int]]) -> dict[str, FitResult]:
    """Power law (with xmin selection) plus the three alternatives."""
    s = as_sample(sample)
    pl = fit_power_law(s)
    fits = {"power_law": pl}
    fits.update(fit_alternatives(s, pl.xmin))
    return fits


# ---------------------------------------------------------------------------
# comparison


def compare(sample: Union[Sample, Iterable[int]], fit_a: FitResult, fit_b: FitResult) -> Comparison:
    """Normalized log-likelihood-ratio comparison over the shared tail.

    R > 0 favors ``fit_a``; the two-sided p-value treats the per-point
    log-likelihood differences as approximately normal.  Identical
    models (zero variance) compare as R = 0, p = 1.
    """
    if fit_a.xmin != fit_b.xmin:
        raise HeavyTailError(f"fits must share xmin, got {fit_a.xmin} and {fit_b.xmin}")
    s = as_sample(sample)
    tail = s.tail(fit_a.xmin)
    if tail.size == 0:
        raise TooFewTailPoints(f"no values >= xmin {fit_a.xmin}")
    uniq, counts = _compress(tail)
    n = float(counts.sum())
    d = logpmf(fit_a.model, fit_a.params, uniq, fit_a.xmin) - logpmf(
        fit_b.model, fit_b.params, uniq, fit_b.xmin
    )
    r = float(np.sum(counts * d))
    mean = r / n
    var = float(np.sum(counts * (d - mean) ** 2)) / n
    if not var > 1e-24:
        return Comparison(fit_a.model, fit_b.model, 0.0, 1.0)
    p = math.erfc(abs(r) / (math.sqrt(var) * math.sqrt(2.0 * n)))
    return Comparison(fit_a.model, fit_b.model, r, p)


def model_ordering(sample: Union[Sample, Iterable[int]]) -> ModelRanking:
    """Fit all four models on the widest shared tail and rank them.

    The shared tail starts at the smallest sample value.  The KS scan
    behind fit_power_law wanders far out on data that are not power-law
    shaped, leaving a sliver of points on which no pair of models can be
    separated, so it is unsuitable for cross-model ranking.

    Ranking is by tail log-likelihood, best first.  Adjacent models
    whose pairwise p-value exceeds 0.1 merge into one indistinguishable
    group, and within a group models with fewer parameters are listed
    first: when the data cannot tell a special case from the family
    that nests it, the simpler form wins the tie.
    """
    s = as_sample(sample)
    xmin = int(s.values[0])
    fits = {"power_law": power_law_at(s, xmin), **fit_alternatives(s, xmin)}
    comparisons = tuple(
        compare(s, fits[a], fits[b]) for a, b in combinations(MODELS, 2)
    )
    by_pair = {(c.model_a, c.model_b): c for c in comparisons}
    order = sorted(MODELS, key=lambda m: (-fits[m].log_likelihood, m))

    groups: list[list[str]] = [[order[0]]]
    for prev, cur in zip(order, order[1:]):
        c = by_pair.get((prev, cur)) or by_pair[(cur, prev)]
        if c.p > INDISTINGUISHABLE_P:
            groups[-1].append(cur)
        else:
            groups.append([cur])
    regrouped = tuple(
        tuple(sorted(g, key=lambda m: (len(fits[m].params),
                                       -fits[m].log_likelihood, m)))
        for g in groups
    )
    return ModelRanking(
        ranked=tuple(m for g in regrouped for m in g),
        groups=regrouped,
        fits=MappingProxyType(fits),
        comparisons=comparisons,
    )
