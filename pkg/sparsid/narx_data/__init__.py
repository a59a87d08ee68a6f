"""NARX data: benchmark ingestion, cascaded-tank simulator, lagged regressors."""

from .models import SignalPair, TankParams, RegressorDataset, NormStats, SubsetMode
from .io import load_benchmark_csv, write_signal_csv
from .tank import simulate_tank, multisine
from .regressors import build_regressors, subset_ratio, normalize, denormalize

__all__ = [
    "SignalPair", "TankParams", "RegressorDataset", "NormStats", "SubsetMode",
    "load_benchmark_csv", "write_signal_csv", "simulate_tank", "multisine",
    "build_regressors", "subset_ratio", "normalize", "denormalize",
]
