"""Scoring, one-step prediction, free-run simulation and sweeps."""

from .models import EvalMode, EvalReport, RepeatStats
from .metrics import rmse, repeat_stats
from .harness import predict_one_step, simulate_free_run, simulate_signal
from .sweep import SweepResult, ratio_sweep, lambda_sweep, log_grid, cell_seed, cell_fingerprint, run_cell

__all__ = [
    "EvalMode", "EvalReport", "RepeatStats", "rmse", "repeat_stats", "predict_one_step",
    "simulate_free_run", "simulate_signal", "SweepResult", "ratio_sweep", "lambda_sweep",
    "log_grid", "cell_seed", "cell_fingerprint", "run_cell",
]
