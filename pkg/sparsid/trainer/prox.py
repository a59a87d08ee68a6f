"""Proximal operators for the ℓ1 and group penalties."""

from typing import Tuple

import numpy as np

from sparsid.sparse_bayes import Granularity, group_ids, group_sum


def soft_threshold(W: np.ndarray, threshold) -> np.ndarray:
    """sign(W) · max(|W| - threshold, 0); ``threshold`` may be per-entry."""
    return np.sign(W) * np.maximum(np.abs(W) - threshold, 0.0)


def group_soft_threshold(
    W: np.ndarray,
    threshold: float,
    granularity: Granularity,
    block_shape: Tuple[int, int] = (1, 1),
) -> np.ndarray:
    """Shrink each group's ℓ2 norm by threshold·sqrt(group size); groups that fall below vanish."""
    ids = group_ids(W.shape, granularity, block_shape)
    norm = np.sqrt(group_sum(W * W, ids))
    size = group_sum(np.ones_like(W), ids)
    with np.errstate(divide="ignore", invalid="ignore"):
        scale = np.where(norm > 0, 1.0 - threshold * np.sqrt(size) / norm, 0.0)
    return W * np.maximum(scale, 0.0)
