"""Scoring."""

from typing import Sequence

import numpy as np

from sparsid.errors import DataError
from . import config
from .models import RepeatStats


def rmse(yhat, y) -> float:
    """sqrt(mean((y - ŷ)²)) over equal-length series."""
    yhat = np.asarray(yhat, dtype=float).reshape(-1)
    y = np.asarray(y, dtype=float).reshape(-1)
    if len(yhat) != len(y):
        raise DataError(f"length mismatch: {len(yhat)} predictions vs {len(y)} targets")
    if len(y) == 0:
        raise DataError("cannot score an empty series")
    r = yhat - y
    return float(np.sqrt(np.mean(r * r)))


def repeat_stats(values: Sequence[float], cap: float = config.RMSE_CAP) -> RepeatStats:
    """best/mean/std over finite runs plus a mean with every run capped at ``cap``."""
    values = np.asarray(values, dtype=float)
    finite = values[np.isfinite(values)]
    nan = float("nan")
    return RepeatStats(
        best=float(finite.min()) if finite.size else nan,
        mean=float(finite.mean()) if finite.size else nan,
        std=float(finite.std()) if finite.size else nan,
        capped_mean=float(np.minimum(values, cap).mean()) if values.size else nan,
        n_runs=int(values.size),
        n_diverged=int(values.size - finite.size),
    )
