"""Trainer configuration."""

import os

DEFAULT_LAMBDA = float(os.getenv("SPARSID_LAMBDA", "0.005"))
DEFAULT_KAPPA_UPSILON = float(os.getenv("SPARSID_KAPPA_UPSILON", "1e-4"))
DEFAULT_KAPPA_W = float(os.getenv("SPARSID_KAPPA_W", "1e-2"))
DEFAULT_T_MAX = int(os.getenv("SPARSID_T_MAX", "50"))
DEFAULT_INNER_STEPS = int(os.getenv("SPARSID_INNER_STEPS", "200"))
DEFAULT_STEP_SIZE = float(os.getenv("SPARSID_STEP_SIZE", "0.05"))
DEFAULT_BATCH_SIZE = int(os.getenv("SPARSID_BATCH_SIZE", "32"))
DEFAULT_SIGMA2 = float(os.getenv("SPARSID_SIGMA2", "1.0"))
DEFAULT_PRUNE_START = int(os.getenv("SPARSID_PRUNE_START", "3"))

CHECKPOINT_PATTERN = "checkpoint_{iteration:04d}.json"
MODEL_FILE = "model.json"
HISTORY_FILE = "history.csv"
HYPER_LOG_FILE = "hyper_log.csv"

# The two experiment architectures: one-step prediction and free-run simulation.
PRESETS = {
    "prediction": {"layer_widths": [100, 100], "n_a": 5, "n_b": 5, "granularity": "row"},
    "simulation": {"layer_widths": [10, 10, 10], "n_a": 19, "n_b": 19, "granularity": "row"},
}
