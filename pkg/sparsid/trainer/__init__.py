"""Sparse Bayesian training: inner proximal SGD, outer reweighting loop, pruning."""

from .models import Method, TrainConfig, TrainedModel, IterationRecord, LayerRecord, ModelDocument
from .prox import soft_threshold, group_soft_threshold
from .engine import (
    inner_optimize, outer_train, prune, floor_prune, sparsity, neuron_sparsity, prepare_data, init_model,
)
from .store import save_model, load_model, latest_checkpoint, write_history, write_hyper_log
from .presets import resolve_config, load_config_file

__all__ = [
    "Method", "TrainConfig", "TrainedModel", "IterationRecord", "LayerRecord", "ModelDocument",
    "soft_threshold", "group_soft_threshold", "inner_optimize", "outer_train", "prune", "floor_prune",
    "sparsity", "neuron_sparsity", "prepare_data", "init_model", "save_model", "load_model",
    "latest_checkpoint", "write_history", "write_hyper_log", "resolve_config", "load_config_file",
]
