"""Evaluation configuration."""

import os

# free-run predictions beyond this magnitude (normalized units) count as diverged
DIVERGENCE_LIMIT = float(os.getenv("SPARSID_DIVERGENCE_LIMIT", "1e6"))
# diverged or very large RMSEs enter the capped mean at this value (raw units)
RMSE_CAP = float(os.getenv("SPARSID_RMSE_CAP", "10.0"))

DEFAULT_RATIOS = [0.05, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0]
DEFAULT_REPEATS = int(os.getenv("SPARSID_REPEATS", "1"))

PREDICTIONS_FILE = "predictions.csv"
REPORT_FILE = "report.json"
SWEEP_FILE = "sweep.csv"
SWEEP_DETAIL_FILE = "sweep_detail.csv"
SUMMARY_FILE = "summary.csv"
SUMMARY_DETAIL_FILE = "summary_detail.csv"
LAMBDA_SWEEP_FILE = "lambda_sweep.csv"
CELLS_DIR = "cells"
