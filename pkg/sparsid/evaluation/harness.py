"""One-step-ahead prediction and free-run simulation of a trained model."""

import logging

import numpy as np

from sparsid.errors import DataError
from sparsid.mlp_core import predict
from sparsid.narx_data import SignalPair, build_regressors, normalize
from sparsid.narx_data.regressors import first_row_time
from sparsid.trainer import TrainedModel
from . import config
from .metrics import rmse
from .models import EvalMode, EvalReport

logger = logging.getLogger(__name__)


def predict_one_step(model: TrainedModel, signal: SignalPair) -> EvalReport:
    """Feed the true lagged u and y for every t and score ŷ(t+1)."""
    ds = build_regressors(signal, model.n_a, model.n_b)
    rows = normalize(ds, model.norm)[0].rows if model.norm is not None else ds.rows
    yhat = predict(model.net, rows)
    if model.norm is not None:
        yhat = model.norm.unscale_y(yhat)
    report = EvalReport(
        rmse=rmse(yhat, ds.targets), predictions=yhat, truth=ds.targets, times=ds.times + 1,
        mode=EvalMode.PREDICTION,
    )
    logger.info(f"One-step prediction on {signal.name}: rmse {report.rmse:.6g} over {len(yhat)} samples")
    return report


def simulate_free_run(model: TrainedModel, u, y_init_lags, y_true) -> EvalReport:
    """Run the model on its own outputs; only u comes from data.

    ``y_init_lags`` holds the first max(n_a, n_b) + 1 true outputs. Row t reads
    y(t-1)..y(t-n_b) and predicts y(t+1), so the first prediction that is fed
    back enters at row t0 + 2. Feedback stays in the normalized domain.
    """
    u = np.asarray(u, dtype=float).reshape(-1)
    y_true = np.asarray(y_true, dtype=float).reshape(-1)
    y_init = np.asarray(y_init_lags, dtype=float).reshape(-1)
    n_a, n_b = model.n_a, model.n_b
    t0 = first_row_time(n_a, n_b)
    if len(y_true) != len(u):
        raise DataError(f"u and y_true differ in length ({len(u)} vs {len(y_true)})")
    if len(y_init) != t0 + 1:
        raise DataError(f"free run needs {t0 + 1} seed outputs for lags n_a={n_a}, n_b={n_b}, got {len(y_init)}")
    if len(u) < t0 + 2:
        raise DataError(f"series of length {len(u)} too short for a free run with {t0 + 1} seed outputs")

    norm = model.norm
    u_n = norm.scale_u(u) if norm is not None else u
    y_n = np.zeros(len(u))
    y_n[: t0 + 1] = norm.scale_y(y_init) if norm is not None else y_init
    u_lags = np.arange(0, n_a + 1)
    y_lags = np.arange(1, n_b + 1)

    diverged_at = None
    stop = len(u) - 1
    for t in range(t0, len(u) - 1):
        z = np.concatenate([u_n[t - u_lags], y_n[t - y_lags]])
        value = float(predict(model.net, z[None, :])[0])
        if not np.isfinite(value) or abs(value) > config.DIVERGENCE_LIMIT:
            diverged_at, stop = t + 1, t
            logger.warning(f"✗ Free run diverged at step {t + 1} (value {value:.3e})")
            break
        y_n[t + 1] = value

    times = np.arange(t0 + 1, stop + 1)
    yhat = norm.unscale_y(y_n[times]) if norm is not None else y_n[times]
    truth = y_true[times]
    report = EvalReport(
        rmse=float("inf") if diverged_at is not None else rmse(yhat, truth),
        predictions=yhat, truth=truth, times=times, mode=EvalMode.SIMULATION,
        diverged=diverged_at is not None, diverged_at=diverged_at, seed_outputs=t0 + 1,
    )
    if not report.diverged:
        logger.info(f"Free-run simulation: rmse {report.rmse:.6g} over {len(times)} samples ({t0 + 1} seeded)")
    return report


def simulate_signal(model: TrainedModel, signal: SignalPair) -> EvalReport:
    """Free run over a whole test signal, seeded with its first true outputs."""
    t0 = first_row_time(model.n_a, model.n_b)
    return simulate_free_run(model, signal.u, signal.y[: t0 + 1], signal.y)
