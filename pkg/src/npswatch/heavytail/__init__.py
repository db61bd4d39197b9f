"""Heavy-tailed distribution fitting for activity histograms."""

from .fit import (
    LL_TOL,
    MIN_POINTS,
    MODELS,
    Comparison,
    DegenerateSample,
    FitResult,
    HeavyTailError,
    ModelRanking,
    Sample,
    ScanRow,
    TooFewTailPoints,
    as_sample,
    compare,
    fit_all,
    fit_alternatives,
    fit_power_law,
    log_norm,
    logpmf,
    model_ordering,
    power_law_at,
    xmin_scan,
)
from .kernels import BACKEND, backend_name

__all__ = [
    "BACKEND",
    "LL_TOL",
    "MIN_POINTS",
    "MODELS",
    "Comparison",
    "DegenerateSample",
    "FitResult",
    "HeavyTailError",
    "ModelRanking",
    "Sample",
    "ScanRow",
    "TooFewTailPoints",
    "as_sample",
    "backend_name",
    "compare",
    "fit_all",
    "fit_alternatives",
    "fit_power_law",
    "log_norm",
    "logpmf",
    "model_ordering",
    "power_law_at",
    "xmin_scan",
]
