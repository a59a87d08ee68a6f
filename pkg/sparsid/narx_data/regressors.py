"""Lagged NARX regressors, data-ratio subsets and z-score normalization."""

import logging
import math
from typing import Optional, Tuple, Union

import numpy as np

from utils import seed_stream
from sparsid.errors import DataError
from .models import NormStats, RegressorDataset, SignalPair, SubsetMode

logger = logging.getLogger(__name__)


def first_row_time(n_a: int, n_b: int) -> int:
    """Earliest t whose lag window fits inside the series."""
    return max(n_a, n_b)


def lag_matrix(u: np.ndarray, y: np.ndarray, n_a: int, n_b: int, times: np.ndarray) -> np.ndarray:
    """Rows [u(t) .. u(t-n_a), y(t-1) .. y(t-n_b)] for each t in ``times``."""
    u_idx = times[:, None] - np.arange(0, n_a + 1)[None, :]
    y_idx = times[:, None] - np.arange(1, n_b + 1)[None, :]
    return np.hstack([u[u_idx], y[y_idx]])


def build_regressors(signal: SignalPair, n_a: int, n_b: int) -> RegressorDataset:
    """z(t) rows with targets y(t+1).

    For t in [max(n_a, n_b), len - 2]: N = len - max(n_a, n_b) - 1 rows.
    With u=[1,2,3], y=[10,20,30], n_a=0, n_b=1 the only row is z(1)=[2,10]
    with target y(2)=30.
    """
    if n_a < 0 or n_b < 0:
        raise DataError(f"lags must be >= 0 (n_a={n_a}, n_b={n_b})")
    t0 = first_row_time(n_a, n_b)
    n_rows = len(signal) - t0 - 1
    if n_rows < 1:
        raise DataError(
            f"series of length {len(signal)} too short for lags n_a={n_a}, n_b={n_b} "
            f"(needs at least {t0 + 2} samples)"
        )
    times = np.arange(t0, t0 + n_rows)
    rows = lag_matrix(signal.u, signal.y, n_a, n_b, times)
    return RegressorDataset(rows=rows, targets=signal.y[times + 1], n_a=n_a, n_b=n_b, times=times)


def subset_ratio(
    ds: RegressorDataset,
    ratio: float,
    mode: Union[SubsetMode, str] = SubsetMode.PREFIX,
    seed: int = 0,
) -> RegressorDataset:
    """Keep ceil(ratio * N) rows: a temporal prefix, or a seeded subset without duplicates."""
    if not (0 < ratio <= 1):
        raise DataError(f"ratio must be in (0, 1], got {ratio}")
    mode = SubsetMode(mode)
    n = len(ds)
    count = max(1, math.ceil(round(ratio * n, 9)))
    if count == n:
        return ds
    if mode == SubsetMode.PREFIX:
        index = np.arange(count)
    else:
        rng = seed_stream(seed, "subset")
        index = np.sort(rng.choice(n, size=count, replace=False))
    logger.debug(f"Subset {mode.value}: {count}/{n} rows (ratio={ratio})")
    return ds.take(index)


def normalize(ds: RegressorDataset, stats: Optional[NormStats] = None) -> Tuple[RegressorDataset, NormStats]:
    """z-score each channel; u stats come from the u lags only, y stats from y lags and targets.

    Pass ``stats`` to reuse training statistics on another dataset.
    """
    if ds.norm is not None:
        raise DataError("dataset is already normalized")
    u_block = ds.rows[:, : ds.n_a + 1]
    y_block = ds.rows[:, ds.n_a + 1:]
    if stats is None:
        y_all = np.concatenate([y_block.ravel(), ds.targets])
        std_u, std_y = float(np.std(u_block)), float(np.std(y_all))
        if std_u <= 0:
            raise DataError("input channel has zero variance; cannot normalize")
        if std_y <= 0:
            raise DataError("output channel has zero variance; cannot normalize")
        stats = NormStats(mean_u=float(np.mean(u_block)), std_u=std_u, mean_y=float(np.mean(y_all)), std_y=std_y)

    rows = np.hstack([stats.scale_u(u_block), stats.scale_y(y_block)])
    scaled = RegressorDataset(
        rows=rows, targets=stats.scale_y(ds.targets), n_a=ds.n_a, n_b=ds.n_b, times=ds.times, norm=stats,
    )
    return scaled, stats


def denormalize(values, stats: NormStats) -> np.ndarray:
    """Map normalized outputs back to raw units."""
    return stats.unscale_y(values)
