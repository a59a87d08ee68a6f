"""Sparse Bayesian machinery: covariance, α/ω/υ updates, regularizer and cost."""

from .models import Granularity, HyperState, CostReport, HyperDocument, init_hyper
from .groups import group_ids, group_sum, is_group_constant
from .updates import (
    compute_C, update_alpha, update_omega, update_upsilon, regularizer, posterior_moments, diag_covariance,
)
from .cost import layer_cost, marginal_cost

__all__ = [
    "Granularity", "HyperState", "CostReport", "HyperDocument", "init_hyper",
    "group_ids", "group_sum", "is_group_constant",
    "compute_C", "update_alpha", "update_omega", "update_upsilon", "regularizer",
    "posterior_moments", "diag_covariance", "layer_cost", "marginal_cost",
]
